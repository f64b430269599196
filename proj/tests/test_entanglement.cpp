#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "rotent/entanglement.hpp"

using namespace rotent;

namespace {

struct Solved {
    SubspaceBasis basis;
    GroundStateRecord gs;
};

Solved solve(int n, int l, Statistics stat, Kernel kind) {
    auto basis = enumerate_basis(n, l, stat);
    const auto table = ElementTable::closed_form(kind, basis.l_max());
    auto gs = ground_state_lanczos(build_hamiltonian(basis, table));
    annotate(gs, basis);
    return {std::move(basis), std::move(gs)};
}

// First-quantized wavefunction psi(l_1, ..., l_N) over orbital tuples, built
// from Fock amplitudes by symmetrizing (bosons) or antisymmetrizing
// (fermions) the product of occupied orbitals.
std::map<std::vector<int>, double> first_quantized(const Solved& s) {
    const int n = s.basis.particle_count();
    const bool fermion = s.basis.statistics() == Statistics::Fermion;
    double n_fact = std::tgamma(n + 1.0);
    std::map<std::vector<int>, double> psi;
    for (std::size_t m = 0; m < s.basis.dimension(); ++m) {
        const auto occ = s.basis.state(m);
        std::vector<int> orbs;
        double weight = 1.0;
        for (std::size_t l = 0; l < occ.size(); ++l) {
            for (int c = 0; c < occ[l]; ++c) orbs.push_back(static_cast<int>(l));
            weight *= std::tgamma(occ[l] + 1.0);
        }
        // number of distinct orderings is N! / prod n_l!
        const double amp = s.gs.amplitudes[m] * std::sqrt(weight / n_fact);
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::map<std::vector<int>, bool> seen;
        do {
            std::vector<int> tuple(static_cast<std::size_t>(n));
            for (int a = 0; a < n; ++a) tuple[static_cast<std::size_t>(a)] = orbs[static_cast<std::size_t>(perm[a])];
            if (seen[tuple]) continue;
            seen[tuple] = true;
            double sign = 1.0;
            if (fermion)
                for (int a = 0; a < n; ++a)
                    for (int b = a + 1; b < n; ++b)
                        if (perm[a] > perm[b]) sign = -sign;
            psi[tuple] += sign * amp;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return psi;
}

std::vector<double> nonzero_sorted(std::vector<double> v) {
    std::erase_if(v, [](double x) { return std::abs(x) < 1e-12; });
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST(Entropy, Examples) {
    EXPECT_NEAR(entropy(std::vector<double>{0.5, 0.5}), std::log(2.0), 1e-15);
    EXPECT_EQ(entropy(std::vector<double>{1.0, 0.0}), 0.0);
    EXPECT_FALSE(std::signbit(entropy(std::vector<double>{1.0})));
    EXPECT_NEAR(entropy(std::vector<double>(4, 0.25)), std::log(4.0), 1e-15);
    EXPECT_THROW(entropy(std::vector<double>{0.6, 0.6}), NumericalError);
    EXPECT_THROW(entropy(std::vector<double>{1.1, -0.1}), NumericalError);
}

TEST(Rdm, CondensateIsPure) {
    const auto s = solve(5, 0, Statistics::Boson, Kernel::Coulomb);
    const auto r = report(s.gs, s.basis);
    EXPECT_EQ(r.s1, 0.0);
    EXPECT_NEAR(*r.s2, 0.0, 1e-12);
    EXPECT_FALSE(r.log_l_minus_s1.has_value());
    EXPECT_NEAR(r.delta_s1, -std::log(5.0), 1e-15);
}

TEST(Rdm, SingleVortexEntropyFormula) {
    for (int n = 2; n <= 9; ++n) {
        const auto s = solve(n, 1, Statistics::Boson, Kernel::Coulomb);
        const double p = 1.0 / n;
        const double expect = -(1 - p) * std::log(1 - p) - p * std::log(p);
        const auto r = report(s.gs, s.basis);
        EXPECT_NEAR(r.s1, expect, 1e-12) << n;
        EXPECT_NEAR(*r.log_l_minus_s1, -expect, 1e-12);
    }
    const auto six = solve(6, 1, Statistics::Boson, Kernel::Coulomb);
    EXPECT_NEAR(report(six.gs, six.basis).s1, 0.450561, 5e-7);
}

TEST(Rdm, SlaterDeterminantEntropies) {
    for (int n = 2; n <= 5; ++n) {
        const auto s = solve(n, n * (n - 1) / 2, Statistics::Fermion, Kernel::Coulomb);
        const auto r = report(s.gs, s.basis);
        EXPECT_NEAR(r.s1, std::log(n), 1e-14);
        EXPECT_NEAR(*r.s2, std::log(n * (n - 1) / 2.0), 1e-12);
    }
}

TEST(Rdm, TwoParticlesHaveZeroS2) {
    for (auto stat : {Statistics::Boson, Statistics::Fermion})
        for (int l = minimal_angular_momentum(2, stat); l <= 9; ++l) {
            const auto s = solve(2, l, stat, Kernel::Coulomb);
            EXPECT_NEAR(*report(s.gs, s.basis).s2, 0.0, 1e-10) << l;
        }
}

TEST(Rdm, TraceAndPositivity) {
    for (auto stat : {Statistics::Boson, Statistics::Fermion})
        for (int dl : {0, 3, 7, 12}) {
            const auto s = solve(5, minimal_angular_momentum(5, stat) + dl, stat, Kernel::Coulomb);
            const auto rdm1 = single_particle_rdm(s.gs, s.basis);
            EXPECT_NEAR(std::accumulate(rdm1.probabilities.begin(), rdm1.probabilities.end(), 0.0), 1.0, 1e-12);
            double momentum = 0.0;
            for (std::size_t l = 0; l < rdm1.occupations.size(); ++l) momentum += l * rdm1.occupations[l];
            EXPECT_NEAR(momentum, s.basis.angular_momentum(), 1e-10);
            const auto rdm2 = two_particle_rdm(s.gs, s.basis);
            EXPECT_NEAR(rdm2.trace(), 1.0, 1e-12);
            for (double e : rdm2.eigenvalues()) EXPECT_GT(e, -1e-12);
            for (const auto& b : rdm2.blocks) EXPECT_NEAR((b.matrix - b.matrix.transpose()).norm(), 0.0, 1e-15);
            if (stat == Statistics::Fermion)
                for (double n : rdm1.occupations) EXPECT_LE(n, 1.0 + 1e-12);
        }
}

TEST(Rdm, PairDensityContractsToOccupations) {
    for (auto stat : {Statistics::Boson, Statistics::Fermion}) {
        const auto s = solve(4, minimal_angular_momentum(4, stat) + 6, stat, Kernel::Coulomb);
        const auto rdm1 = single_particle_rdm(s.gs, s.basis);
        const auto rdm2 = two_particle_rdm(s.gs, s.basis);
        std::vector<double> contracted(rdm1.probabilities.size(), 0.0);
        for (const auto& b : rdm2.blocks)
            for (std::size_t p = 0; p < b.pairs.size(); ++p)
                contracted[static_cast<std::size_t>(b.pairs[p].first)] +=
                    b.matrix(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
        for (std::size_t l = 0; l < contracted.size(); ++l) EXPECT_NEAR(contracted[l], rdm1.probabilities[l], 1e-12);
    }
}

TEST(Rdm, MatchesFirstQuantizedPartialTrace) {
    struct Case {
        int n, l;
        Statistics stat;
        Kernel kind;
    };
    for (const auto& c : {Case{3, 2, Statistics::Boson, Kernel::Contact}, Case{3, 5, Statistics::Boson, Kernel::Coulomb},
                          Case{4, 6, Statistics::Boson, Kernel::Coulomb}, Case{3, 7, Statistics::Fermion, Kernel::Coulomb},
                          Case{4, 10, Statistics::Fermion, Kernel::Coulomb}}) {
        const auto s = solve(c.n, c.l, c.stat, c.kind);
        const auto psi = first_quantized(s);
        const int orbs = s.basis.orbital_count();

        std::vector<double> rho1(static_cast<std::size_t>(orbs), 0.0);
        std::map<std::pair<int, int>, std::map<std::vector<int>, double>> by_pair; // (l1,l2) -> rest -> psi
        for (const auto& [tuple, amp] : psi) {
            rho1[static_cast<std::size_t>(tuple[0])] += amp * amp;
            by_pair[{tuple[0], tuple[1]}][std::vector<int>(tuple.begin() + 2, tuple.end())] = amp;
        }
        const auto rdm1 = single_particle_rdm(s.gs, s.basis);
        for (int l = 0; l < orbs; ++l) EXPECT_NEAR(rho1[static_cast<std::size_t>(l)], rdm1.probabilities[static_cast<std::size_t>(l)], 1e-12);

        // full ordered-pair rho_2, diagonalized in one piece
        const auto dim = static_cast<Eigen::Index>(orbs * orbs);
        Eigen::MatrixXd rho2 = Eigen::MatrixXd::Zero(dim, dim);
        for (const auto& [a, rest_a] : by_pair)
            for (const auto& [b, rest_b] : by_pair) {
                double v = 0.0;
                for (const auto& [rest, amp] : rest_a)
                    if (auto it = rest_b.find(rest); it != rest_b.end()) v += amp * it->second;
                rho2(a.first * orbs + a.second, b.first * orbs + b.second) = v;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho2, Eigen::EigenvaluesOnly);
        const auto oracle = nonzero_sorted(std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + dim));
        const auto got = nonzero_sorted(two_particle_rdm(s.gs, s.basis).eigenvalues());
        ASSERT_EQ(oracle.size(), got.size()) << c.n << " " << c.l;
        for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], oracle[k], 1e-12);
    }
}

TEST(Rdm, RejectsMismatchedState) {
    const auto s = solve(3, 4, Statistics::Boson, Kernel::Coulomb);
    GroundStateRecord bad = s.gs;
    bad.amplitudes.pop_back();
    EXPECT_THROW(single_particle_rdm(bad, s.basis), std::invalid_argument);
    const auto one = solve(1, 3, Statistics::Boson, Kernel::Coulomb);
    EXPECT_THROW(two_particle_rdm(one.gs, one.basis), std::invalid_argument);
    EXPECT_FALSE(report(one.gs, one.basis).s2.has_value());
}
