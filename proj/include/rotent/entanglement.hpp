#pragma once

// One- and two-particle reduced density operators of a subspace ground state
// and their von Neumann entropies (natural log).

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "rotent/errors.hpp"
#include "rotent/fock.hpp"
#include "rotent/solver.hpp"

namespace rotent {

/// Eigenvalues of rho_1: p_l = <a_l^dag a_l> / N. rho_1 is diagonal in l
/// because every state in the basis has the same total L.
struct SingleParticleRdm {
    std::vector<double> occupations;   ///< <a_l^dag a_l>
    std::vector<double> probabilities; ///< occupations / N
};

/// rho_2 is block diagonal in the pair momentum s = i + j. Rows and columns
/// of block s are the ordered pairs (i, s - i); bosons include i = j.
struct TwoParticleRdm {
    struct Block {
        int pair_momentum = 0;
        std::vector<std::pair<int, int>> pairs;
        Eigen::MatrixXd matrix;
    };
    std::vector<Block> blocks;

    double trace() const {
        double t = 0.0;
        for (const auto& b : blocks) t += b.matrix.trace();
        return t;
    }

    std::vector<double> eigenvalues() const {
        std::vector<double> ev;
        for (const auto& b : blocks) {
            if (b.matrix.rows() == 0) continue;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.matrix, Eigen::EigenvaluesOnly);
            for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) ev.push_back(es.eigenvalues()[k]);
        }
        return ev;
    }
};

/// -sum p ln p with 0 ln 0 = 0. Entries in [-1e-14, 0) are treated as zero;
/// anything more negative, or a sum off by more than `sum_tolerance`, is an error.
inline double entropy(std::span<const double> spectrum, double sum_tolerance = 1e-10) {
    double total = 0.0, s = 0.0;
    for (double p : spectrum) {
        if (p < -1e-14) throw NumericalError("entropy: negative probability " + std::to_string(p));
        total += p;
        if (p > 0.0) s -= p * std::log(p);
    }
    if (std::abs(total - 1.0) > sum_tolerance)
        throw NumericalError("entropy: probabilities sum to " + std::to_string(total));
    return s + 0.0; // no negative zero for a pure state
}

inline SingleParticleRdm single_particle_rdm(const GroundStateRecord& state, const SubspaceBasis& basis) {
    if (state.amplitudes.size() != basis.dimension()) throw std::invalid_argument("state does not live on this basis");
    SingleParticleRdm rdm;
    const auto orbitals = static_cast<std::size_t>(basis.orbital_count());
    rdm.occupations.assign(orbitals, 0.0);
    for (std::size_t m = 0; m < basis.dimension(); ++m) {
        const double w = state.amplitudes[m] * state.amplitudes[m];
        const auto s = basis.state(m);
        for (std::size_t l = 0; l < orbitals; ++l)
            if (s[l]) rdm.occupations[l] += w * s[l];
    }
    const double n = basis.particle_count();
    rdm.probabilities.resize(orbitals);
    for (std::size_t l = 0; l < orbitals; ++l) rdm.probabilities[l] = rdm.occupations[l] / n;
    return rdm;
}

inline TwoParticleRdm two_particle_rdm(const GroundStateRecord& state, const SubspaceBasis& basis) {
    const int n = basis.particle_count();
    if (n < 2) throw std::invalid_argument("two-particle RDM needs N >= 2");
    if (state.amplitudes.size() != basis.dimension()) throw std::invalid_argument("state does not live on this basis");
    const auto stat = basis.statistics();
    const int top = basis.l_max();

    TwoParticleRdm rdm;
    std::vector<std::vector<int>> pair_slot(static_cast<std::size_t>(2 * top + 1));
    for (int s = 0; s <= 2 * top; ++s) {
        TwoParticleRdm::Block b;
        b.pair_momentum = s;
        auto& slots = pair_slot[static_cast<std::size_t>(s)];
        slots.assign(static_cast<std::size_t>(top) + 1, -1);
        for (int i = std::max(0, s - top); i <= std::min(s, top); ++i) {
            if (stat == Statistics::Fermion && 2 * i == s) continue;
            slots[static_cast<std::size_t>(i)] = static_cast<int>(b.pairs.size());
            b.pairs.emplace_back(i, s - i);
        }
        const auto dim = static_cast<Eigen::Index>(b.pairs.size());
        b.matrix = Eigen::MatrixXd::Zero(dim, dim);
        rdm.blocks.push_back(std::move(b));
    }

    // (rho_2)_{ij,kl} = <a_k^dag a_l^dag a_j a_i> / (N(N-1))
    std::vector<Occupation> occ, reduced;
    for (std::size_t m = 0; m < basis.dimension(); ++m) {
        const double cm = state.amplitudes[m];
        if (cm == 0.0) continue;
        const auto src = basis.state(m);
        for (int i = 0; i <= top; ++i) {
            if (!src[static_cast<std::size_t>(i)]) continue;
            for (int j = 0; j <= top; ++j) {
                if (!src[static_cast<std::size_t>(j)]) continue;
                reduced.assign(src.begin(), src.end());
                double amp_ann = annihilate(reduced, i, stat);
                if (amp_ann == 0.0) continue;
                amp_ann *= annihilate(reduced, j, stat);
                if (amp_ann == 0.0) continue;
                const int s = i + j;
                auto& block = rdm.blocks[static_cast<std::size_t>(s)];
                const int row = pair_slot[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
                for (int k = std::max(0, s - top); k <= std::min(s, top); ++k) {
                    const int col = pair_slot[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)];
                    if (col < 0) continue;
                    const int l = s - k;
                    occ = reduced;
                    double amp = amp_ann * create(occ, l, stat);
                    if (amp == 0.0) continue;
                    amp *= create(occ, k, stat);
                    if (amp == 0.0) continue;
                    const auto target = basis.index_of(occ);
                    if (!target) continue;
                    block.matrix(row, col) += state.amplitudes[*target] * amp * cm;
                }
            }
        }
    }
    const double norm = static_cast<double>(n) * (n - 1);
    std::erase_if(rdm.blocks, [](const auto& b) { return b.pairs.empty(); });
    for (auto& b : rdm.blocks) {
        b.matrix /= norm;
        b.matrix = 0.5 * (b.matrix + b.matrix.transpose()).eval();
    }
    return rdm;
}

struct EntanglementReport {
    double s1 = 0.0;
    std::optional<double> s2;
    std::optional<double> log_l_minus_s1; ///< ln L - S1; absent at L = 0
    double delta_s1 = 0.0;                ///< S1 - ln N
    std::vector<double> occupations;
    bool degenerate = false;              ///< ground space degenerate: values depend on the chosen vector
};

inline double two_particle_entropy(const TwoParticleRdm& rdm) {
    auto ev = rdm.eigenvalues();
    for (auto& e : ev) {
        if (e < -1e-12) throw NumericalError("two-particle RDM not positive semidefinite: eigenvalue " + std::to_string(e));
        if (e < 0.0) e = 0.0;
    }
    return entropy(ev, 1e-9);
}

inline EntanglementReport report(const GroundStateRecord& state, const SubspaceBasis& basis, bool with_s2 = true) {
    EntanglementReport r;
    const auto rdm1 = single_particle_rdm(state, basis);
    r.s1 = entropy(rdm1.probabilities);
    r.occupations = rdm1.occupations;
    const int n = basis.particle_count();
    const int l = basis.angular_momentum();
    if (l > 0) r.log_l_minus_s1 = std::log(static_cast<double>(l)) - r.s1;
    r.delta_s1 = r.s1 - std::log(static_cast<double>(n));
    if (with_s2 && n >= 2) r.s2 = two_particle_entropy(two_particle_rdm(state, basis));
    r.degenerate = state.degenerate;
    return r;
}

} // namespace rotent
