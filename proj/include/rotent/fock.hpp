#pragma once

// Fixed-(N, L) occupation-number bases over lowest-Landau-level orbitals
// and the two-body ladder algebra acting on them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rotent/errors.hpp"

namespace rotent {

enum class Statistics { Boson, Fermion };

inline std::string_view to_string(Statistics s) {
    return s == Statistics::Boson ? "boson" : "fermion";
}

inline Statistics parse_statistics(std::string_view name) {
    if (name == "boson" || name == "bosons") return Statistics::Boson;
    if (name == "fermion" || name == "fermions") return Statistics::Fermion;
    throw ConfigError("stat: expected 'boson' or 'fermion', got '" + std::string(name) + "'");
}

using Occupation = std::uint8_t;

/// Smallest total angular momentum of N particles: 0 for bosons, N(N-1)/2 for fermions.
inline int minimal_angular_momentum(int n_particles, Statistics stat) {
    return stat == Statistics::Fermion ? n_particles * (n_particles - 1) / 2 : 0;
}

/// Largest orbital any state of the (N, L) subspace can occupy.
inline int tight_orbital_bound(int n_particles, int total_l, Statistics stat) {
    if (stat == Statistics::Boson || n_particles <= 1) return total_l;
    return total_l - (n_particles - 1) * (n_particles - 2) / 2;
}

/// Occupation vector n_l, l = 0..size()-1.
struct FockState {
    std::vector<Occupation> occupations;

    FockState() = default;
    explicit FockState(std::vector<Occupation> occ) : occupations(std::move(occ)) {}
    explicit FockState(std::span<const Occupation> occ) : occupations(occ.begin(), occ.end()) {}

    int particle_count() const {
        int n = 0;
        for (auto o : occupations) n += o;
        return n;
    }
    int angular_momentum() const {
        int l_total = 0;
        for (std::size_t l = 0; l < occupations.size(); ++l) l_total += static_cast<int>(l) * occupations[l];
        return l_total;
    }
    std::span<const Occupation> view() const { return occupations; }

    friend auto operator<=>(const FockState&, const FockState&) = default;
};

/// Renders an occupation vector as "n0 n1 n2 ..." with trailing zeros kept.
inline std::string occupation_string(std::span<const Occupation> occ) {
    std::string out;
    for (std::size_t l = 0; l < occ.size(); ++l) {
        if (l) out += ' ';
        out += std::to_string(occ[l]);
    }
    return out;
}

namespace detail {

// Range of total momentum reachable by p particles in orbitals [lo, hi].
inline bool momentum_feasible(int p, int r, int lo, int hi, Statistics stat) {
    if (p == 0) return r == 0;
    if (hi < lo) return false;
    if (stat == Statistics::Boson) return r >= p * lo && r <= p * hi;
    if (p > hi - lo + 1) return false;
    const int pairs = p * (p - 1) / 2;
    return r >= p * lo + pairs && r <= p * hi - pairs;
}

} // namespace detail

/// Immutable indexed enumeration of all Fock states with fixed (N, L, statistics).
///
/// States are stored contiguously with stride `orbital_count()` and sorted in
/// descending lexicographic order of (n_0, n_1, ...), so the state with the
/// most particles in the lowest orbitals comes first. The index map is a
/// binary search over that order.
class SubspaceBasis {
public:
    SubspaceBasis(int n_particles, int total_l, Statistics stat, int l_max)
        : n_(n_particles), l_(total_l), stat_(stat) {
        if (n_particles < 1) throw ConfigError("N: particle number must be >= 1");
        if (total_l < 0) throw ConfigError("L: angular momentum must be >= 0");
        if (l_max < 0) throw ConfigError("l_max: orbital cutoff must be >= 0");
        const int floor_l = minimal_angular_momentum(n_particles, stat);
        if (total_l < floor_l)
            throw EmptySubspace("no " + std::string(to_string(stat)) + " states with N=" + std::to_string(n_particles) +
                                " and L=" + std::to_string(total_l) + " (minimum is " + std::to_string(floor_l) + ")");
        l_max_ = std::min(l_max, tight_orbital_bound(n_particles, total_l, stat));
        if (stat == Statistics::Boson && n_particles > 255)
            throw ConfigError("N: boson occupations are limited to 255");
        std::vector<Occupation> scratch(static_cast<std::size_t>(l_max_) + 1, 0);
        fill(0, n_particles, total_l, scratch);
        if (count_ == 0)
            throw EmptySubspace("no " + std::string(to_string(stat)) + " states with N=" + std::to_string(n_particles) +
                                ", L=" + std::to_string(total_l) + " and orbitals <= " + std::to_string(l_max));
    }

    int particle_count() const { return n_; }
    int angular_momentum() const { return l_; }
    Statistics statistics() const { return stat_; }
    int l_max() const { return l_max_; }
    int orbital_count() const { return l_max_ + 1; }
    std::size_t dimension() const { return count_; }

    std::span<const Occupation> state(std::size_t index) const {
        return {data_.data() + index * stride(), stride()};
    }

    std::optional<std::size_t> index_of(std::span<const Occupation> occ) const {
        if (occ.size() != stride()) return std::nullopt;
        std::size_t lo = 0, hi = count_;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            const auto s = state(mid);
            // descending order: element at mid is "greater" when it precedes occ
            if (std::lexicographical_compare(occ.begin(), occ.end(), s.begin(), s.end()))
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo < count_ && std::ranges::equal(state(lo), occ)) return lo;
        return std::nullopt;
    }

    std::optional<std::size_t> index_of(const FockState& s) const { return index_of(s.view()); }

    bool same_subspace(const SubspaceBasis& other) const {
        return n_ == other.n_ && l_ == other.l_ && stat_ == other.stat_ && l_max_ == other.l_max_;
    }

private:
    std::size_t stride() const { return static_cast<std::size_t>(l_max_) + 1; }

    void fill(int orbital, int particles, int momentum, std::vector<Occupation>& scratch) {
        if (orbital > l_max_) {
            if (particles == 0 && momentum == 0) {
                data_.insert(data_.end(), scratch.begin(), scratch.end());
                ++count_;
            }
            return;
        }
        int n_hi = stat_ == Statistics::Fermion ? std::min(1, particles) : particles;
        if (orbital > 0) n_hi = std::min(n_hi, momentum / orbital);
        for (int n = n_hi; n >= 0; --n) {
            const int p = particles - n;
            const int r = momentum - n * orbital;
            if (!detail::momentum_feasible(p, r, orbital + 1, l_max_, stat_)) continue;
            scratch[static_cast<std::size_t>(orbital)] = static_cast<Occupation>(n);
            fill(orbital + 1, p, r, scratch);
        }
        scratch[static_cast<std::size_t>(orbital)] = 0;
    }

    int n_;
    int l_;
    Statistics stat_;
    int l_max_ = 0;
    std::size_t count_ = 0;
    std::vector<Occupation> data_;
};

inline SubspaceBasis enumerate_basis(int n_particles, int total_l, Statistics stat, std::optional<int> l_max = {}) {
    return SubspaceBasis(n_particles, total_l, stat,
                         l_max.value_or(std::max(0, tight_orbital_bound(n_particles, total_l, stat))));
}

// Ladder operators acting in place on an occupation vector. Fermion states are
// |n> = prod_{l ascending} (a_l^dag)^{n_l} |vac>, so a sign (-1)^{#occupied below l}
// is picked up. Returns 0 when the state is annihilated.

inline double annihilate(std::span<Occupation> occ, int orbital, Statistics stat) {
    auto& n = occ[static_cast<std::size_t>(orbital)];
    if (n == 0) return 0.0;
    if (stat == Statistics::Boson) {
        const double amp = std::sqrt(static_cast<double>(n));
        --n;
        return amp;
    }
    int below = 0;
    for (int l = 0; l < orbital; ++l) below += occ[static_cast<std::size_t>(l)];
    n = 0;
    return (below & 1) ? -1.0 : 1.0;
}

inline double create(std::span<Occupation> occ, int orbital, Statistics stat) {
    auto& n = occ[static_cast<std::size_t>(orbital)];
    if (stat == Statistics::Boson) {
        ++n;
        return std::sqrt(static_cast<double>(n));
    }
    if (n != 0) return 0.0;
    int below = 0;
    for (int l = 0; l < orbital; ++l) below += occ[static_cast<std::size_t>(l)];
    n = 1;
    return (below & 1) ? -1.0 : 1.0;
}

struct TwoBodyImage {
    std::size_t index;
    double amplitude;
};

/// a_i^dag a_j^dag a_k a_l |state>, projected onto the basis.
/// Returns nullopt when the operator annihilates the state.
inline std::optional<TwoBodyImage> apply_two_body(std::span<const Occupation> state, const SubspaceBasis& basis,
                                                  int i, int j, int k, int l) {
    const int top = basis.l_max();
    for (int idx : {i, j, k, l})
        if (idx < 0 || idx > top)
            throw std::out_of_range("orbital index " + std::to_string(idx) + " outside 0.." + std::to_string(top));
    if (i + j != k + l) throw std::invalid_argument("two-body operator must conserve angular momentum");
    std::vector<Occupation> occ(state.begin(), state.end());
    const auto stat = basis.statistics();
    double amp = annihilate(occ, l, stat);
    if (amp == 0.0) return std::nullopt;
    amp *= annihilate(occ, k, stat);
    if (amp == 0.0) return std::nullopt;
    amp *= create(occ, j, stat);
    if (amp == 0.0) return std::nullopt;
    amp *= create(occ, i, stat);
    if (amp == 0.0) return std::nullopt;
    const auto idx = basis.index_of(occ);
    if (!idx) return std::nullopt;
    return TwoBodyImage{*idx, amp};
}

} // namespace rotent
