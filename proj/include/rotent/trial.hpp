#pragma once

// Symmetrized products of nu = 1/2 Laughlin factors,
//   Psi^k = S[ prod_{blocks} prod_{i<j in block} (z_i - z_j)^2 ],
// expanded exactly in the bosonic Fock basis of fixed L.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rotent/analysis.hpp"
#include "rotent/errors.hpp"
#include "rotent/fock.hpp"
#include "rotent/solver.hpp"
#include "rotent/special.hpp"

namespace rotent {

using BigInt = boost::multiprecision::cpp_int;

/// Polynomial in z_1..z_n with exact integer coefficients, keyed by exponent vector.
struct MonomialExpansion {
    int variables = 0;
    std::map<std::vector<int>, BigInt> terms;

    BigInt coefficient(const std::vector<int>& exponents) const {
        const auto it = terms.find(exponents);
        return it == terms.end() ? BigInt(0) : it->second;
    }

    /// Total degree of the terms (all terms share it); -1 when empty.
    int degree() const {
        if (terms.empty()) return -1;
        int d = 0;
        for (int e : terms.begin()->first) d += e;
        return d;
    }

    std::complex<double> evaluate(std::span<const std::complex<double>> z) const {
        std::complex<double> acc = 0.0;
        for (const auto& [exps, c] : terms) {
            std::complex<double> term = c.convert_to<double>();
            for (std::size_t v = 0; v < exps.size(); ++v) term *= std::pow(z[v], exps[v]);
            acc += term;
        }
        return acc;
    }
};

/// Exact expansion of prod_{a<b} (z_a - z_b)^2 over `count` variables.
inline MonomialExpansion jastrow_squared(int count, int cap = 8) {
    if (count < 1) throw ConfigError("jastrow: need at least one variable");
    if (count > cap) throw ConfigError("jastrow: " + std::to_string(count) + " variables exceeds cap " + std::to_string(cap));
    MonomialExpansion poly;
    poly.variables = count;
    poly.terms[std::vector<int>(static_cast<std::size_t>(count), 0)] = 1;
    for (int a = 0; a < count; ++a)
        for (int b = a + 1; b < count; ++b) {
            std::map<std::vector<int>, BigInt> next;
            // (z_a - z_b)^2 = z_a^2 - 2 z_a z_b + z_b^2
            const std::pair<std::pair<int, int>, int> factor[3] = {{{2, 0}, 1}, {{1, 1}, -2}, {{0, 2}, 1}};
            for (const auto& [exps, c] : poly.terms)
                for (const auto& [pw, coeff] : factor) {
                    auto e = exps;
                    e[static_cast<std::size_t>(a)] += pw.first;
                    e[static_cast<std::size_t>(b)] += pw.second;
                    next[e] += c * coeff;
                }
            std::erase_if(next, [](const auto& kv) { return kv.second == 0; });
            poly.terms = std::move(next);
        }
    return poly;
}

/// Coefficient of prod_i z_i^{e_i} in prod_{i<j} (z_i - z_j)^2, n = e.size().
///
/// The squared Vandermonde is sum_{sigma, tau} sgn(sigma) sgn(tau)
/// prod_i z_i^{sigma(i) + tau(i)}; the sum over permutation pairs with
/// sigma(i) + tau(i) = e_i runs as a DP over (used sigma values, used tau values).
inline std::int64_t jastrow_squared_coefficient(std::span<const int> e) {
    const int n = static_cast<int>(e.size());
    if (n > 12) throw ConfigError("jastrow coefficient: more than 12 variables");
    if (n <= 1) return (n == 0 || e[0] == 0) ? 1 : 0;
    int sum = 0;
    for (int x : e) {
        if (x < 0 || x > 2 * (n - 1)) return 0;
        sum += x;
    }
    if (sum != n * (n - 1)) return 0;
    std::unordered_map<std::uint32_t, std::int64_t> layer{{0u, 1}}, next;
    for (int i = 0; i < n; ++i) {
        next.clear();
        for (const auto& [key, c] : layer) {
            const std::uint32_t used_s = key & ((1u << n) - 1), used_t = key >> n;
            for (int v = 0; v < n; ++v) {
                if (used_s & (1u << v)) continue;
                const int w = e[static_cast<std::size_t>(i)] - v;
                if (w < 0 || w >= n || (used_t & (1u << w))) continue;
                // inversions added: earlier positions holding larger values
                const int inv = std::popcount(used_s >> (v + 1)) + std::popcount(used_t >> (w + 1));
                const std::uint32_t k2 = (used_s | (1u << v)) | ((used_t | (1u << w)) << n);
                next[k2] += (inv & 1) ? -c : c;
            }
        }
        std::swap(layer, next);
    }
    const std::uint32_t full = (1u << n) - 1;
    const auto it = layer.find(full | (full << n));
    return it == layer.end() ? 0 : it->second;
}

/// Block sizes of Psi^k: Nbar blocks of (N - Nbar)/k + 1 and k - Nbar blocks of (N - Nbar)/k.
inline std::vector<int> trial_block_sizes(int n_particles, int k) {
    const auto sm = special_subspace_momentum(n_particles, k, Statistics::Boson);
    const int m = (n_particles - sm.nbar) / k;
    if (m < 1) throw ConfigError("k: need N >= k so every block holds a particle");
    std::vector<int> sizes;
    for (int b = 0; b < sm.nbar; ++b) sizes.push_back(m + 1);
    for (int b = sm.nbar; b < k; ++b) sizes.push_back(m);
    return sizes;
}

/// All partitions of {0..n-1} into unlabeled blocks with the given size multiset.
inline std::vector<std::vector<std::vector<int>>> set_partitions(int n, std::vector<int> sizes) {
    std::sort(sizes.begin(), sizes.end());
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::vector<int>> current;
    std::vector<bool> used(static_cast<std::size_t>(n), false);

    std::function<void(std::vector<int>&)> recurse = [&](std::vector<int>& remaining) {
        int first = -1;
        for (int x = 0; x < n; ++x)
            if (!used[static_cast<std::size_t>(x)]) {
                first = x;
                break;
            }
        if (first < 0) {
            if (remaining.empty()) out.push_back(current);
            return;
        }
        // the block containing `first` takes each distinct remaining size once
        for (std::size_t si = 0; si < remaining.size(); ++si) {
            if (si > 0 && remaining[si] == remaining[si - 1]) continue;
            const int size = remaining[si];
            std::vector<int> rest(remaining);
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(si));
            std::vector<int> pool;
            for (int x = first + 1; x < n; ++x)
                if (!used[static_cast<std::size_t>(x)]) pool.push_back(x);
            if (static_cast<int>(pool.size()) < size - 1) continue;
            // choose size-1 companions from pool
            std::vector<int> pick(static_cast<std::size_t>(size - 1));
            std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t from, std::size_t depth) {
                if (depth == pick.size()) {
                    std::vector<int> block{first};
                    block.insert(block.end(), pick.begin(), pick.end());
                    for (int x : block) used[static_cast<std::size_t>(x)] = true;
                    current.push_back(block);
                    recurse(rest);
                    current.pop_back();
                    for (int x : block) used[static_cast<std::size_t>(x)] = false;
                    return;
                }
                for (std::size_t p = from; p + (pick.size() - depth) <= pool.size(); ++p) {
                    pick[depth] = pool[p];
                    choose(p + 1, depth + 1);
                }
            };
            choose(0, 0);
        }
    };
    recurse(sizes);
    return out;
}

struct TrialOptions {
    int max_particles = 8;
};

struct TrialState {
    int n_particles = 0;
    int k = 1;
    int nbar = 0;
    int total_l = 0;
    SubspaceBasis basis;
    std::vector<double> amplitudes;
};

/// Expands Psi^k on the (N, L, Boson) basis. Fock amplitude of occupation n:
/// c_lambda * prod_l sqrt((l!)^{n_l} / n_l!), where c_lambda is the monomial
/// coefficient with exponent multiset lambda; then normalized.
inline TrialState symmetrized_product(int n_particles, int k, const TrialOptions& opts = {}) {
    if (n_particles < 1) throw ConfigError("N: particle number must be >= 1");
    if (n_particles > opts.max_particles)
        throw ConfigError("N: trial construction capped at " + std::to_string(opts.max_particles) + " particles");
    const auto sizes = trial_block_sizes(n_particles, k);
    const auto sm = special_subspace_momentum(n_particles, k, Statistics::Boson);
    auto basis = enumerate_basis(n_particles, sm.total_l, Statistics::Boson);
    const auto partitions = set_partitions(n_particles, sizes);

    std::map<std::vector<int>, std::int64_t> block_cache;
    auto block_coefficient = [&](std::vector<int> exps) {
        std::sort(exps.begin(), exps.end());
        auto it = block_cache.find(exps);
        if (it != block_cache.end()) return it->second;
        const auto c = jastrow_squared_coefficient(exps);
        block_cache.emplace(std::move(exps), c);
        return c;
    };

    std::vector<double> amps(basis.dimension(), 0.0);
    std::vector<int> exps;
    for (std::size_t m = 0; m < basis.dimension(); ++m) {
        const auto occ = basis.state(m);
        exps.clear();
        for (std::size_t l = 0; l < occ.size(); ++l)
            for (int c = 0; c < occ[l]; ++c) exps.push_back(static_cast<int>(l));
        BigInt total = 0;
        for (const auto& partition : partitions) {
            BigInt prod = 1;
            for (const auto& block : partition) {
                std::vector<int> be;
                be.reserve(block.size());
                for (int x : block) be.push_back(exps[static_cast<std::size_t>(x)]);
                const auto c = block_coefficient(std::move(be));
                if (c == 0) {
                    prod = 0;
                    break;
                }
                prod *= c;
            }
            total += prod;
        }
        if (total == 0) continue;
        double log_weight = 0.0;
        for (std::size_t l = 0; l < occ.size(); ++l)
            log_weight += 0.5 * (occ[l] * log_factorial(static_cast<int>(l)) - log_factorial(occ[l]));
        amps[m] = total.convert_to<double>() * std::exp(log_weight);
    }
    double norm = 0.0;
    for (double a : amps) norm += a * a;
    if (norm == 0.0) throw NumericalError("trial state vanishes identically");
    norm = std::sqrt(norm);
    for (auto& a : amps) a /= norm;
    detail::canonicalize_sign(amps);
    return TrialState{n_particles, k, sm.nbar, sm.total_l, std::move(basis), std::move(amps)};
}

/// |<Psi^k | Phi>| for a ground state on the same basis.
inline double overlap(const TrialState& trial, const GroundStateRecord& ed, const SubspaceBasis& ed_basis) {
    if (!trial.basis.same_subspace(ed_basis) || ed.amplitudes.size() != trial.amplitudes.size())
        throw ConfigError("overlap: trial state and ground state live on different bases");
    double s = 0.0;
    for (std::size_t m = 0; m < trial.amplitudes.size(); ++m) s += trial.amplitudes[m] * ed.amplitudes[m];
    return std::abs(s);
}

/// Direct evaluation of Psi^k (Gaussian omitted) at particle positions z.
inline std::complex<double> evaluate_trial(int n_particles, int k, std::span<const std::complex<double>> z) {
    std::complex<double> acc = 0.0;
    for (const auto& partition : set_partitions(n_particles, trial_block_sizes(n_particles, k))) {
        std::complex<double> prod = 1.0;
        for (const auto& block : partition)
            for (std::size_t a = 0; a < block.size(); ++a)
                for (std::size_t b = a + 1; b < block.size(); ++b) {
                    const auto d = z[static_cast<std::size_t>(block[a])] - z[static_cast<std::size_t>(block[b])];
                    prod *= d * d;
                }
        acc += prod;
    }
    return acc;
}

} // namespace rotent
