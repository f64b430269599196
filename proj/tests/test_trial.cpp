#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "rotent/trial.hpp"

using namespace rotent;

namespace {

GroundStateRecord ground_state(const SubspaceBasis& basis, Kernel kind) {
    const auto table = ElementTable::closed_form(kind, basis.l_max());
    auto gs = ground_state_lanczos(build_hamiltonian(basis, table));
    return annotate(gs, basis);
}

// Psi(z) rebuilt from Fock amplitudes: sum over occupations of the symmetric
// monomial, with the orbital normalization divided back out.
std::complex<double> from_amplitudes(const TrialState& t, const std::vector<std::complex<double>>& z) {
    std::complex<double> acc = 0.0;
    for (std::size_t m = 0; m < t.basis.dimension(); ++m) {
        if (t.amplitudes[m] == 0.0) continue;
        const auto occ = t.basis.state(m);
        std::vector<int> exps;
        double weight = 0.0;
        for (std::size_t l = 0; l < occ.size(); ++l) {
            for (int c = 0; c < occ[l]; ++c) exps.push_back(static_cast<int>(l));
            weight += 0.5 * (occ[l] * std::lgamma(l + 1.0) - std::lgamma(occ[l] + 1.0));
        }
        std::complex<double> monomial = 0.0;
        std::sort(exps.begin(), exps.end());
        do {
            std::complex<double> term = 1.0;
            for (std::size_t v = 0; v < exps.size(); ++v) term *= std::pow(z[v], exps[v]);
            monomial += term;
        } while (std::next_permutation(exps.begin(), exps.end()));
        acc += t.amplitudes[m] / std::exp(weight) * monomial;
    }
    return acc;
}

} // namespace

TEST(Jastrow, TwoVariables) {
    const auto p = jastrow_squared(2);
    EXPECT_EQ(p.terms.size(), 3u);
    EXPECT_EQ(p.coefficient({2, 0}), 1);
    EXPECT_EQ(p.coefficient({1, 1}), -2);
    EXPECT_EQ(p.coefficient({0, 2}), 1);
    EXPECT_EQ(p.degree(), 2);
    EXPECT_THROW(jastrow_squared(9), ConfigError);
}

TEST(Jastrow, ThreeVariableExamples) {
    const auto p = jastrow_squared(3);
    EXPECT_EQ(p.degree(), 6);
    EXPECT_EQ(p.coefficient({4, 2, 0}), 1);
    EXPECT_EQ(p.coefficient({2, 2, 2}), -6);
    EXPECT_EQ(p.coefficient({3, 2, 1}), 2);
}

TEST(Jastrow, PermutationDpMatchesExpansion) {
    for (int n = 1; n <= 6; ++n) {
        const auto p = jastrow_squared(n);
        for (const auto& [exps, c] : p.terms) EXPECT_EQ(BigInt(jastrow_squared_coefficient(exps)), c);
    }
    std::mt19937 rng(3);
    const auto p5 = jastrow_squared(5);
    std::uniform_int_distribution<int> e(0, 8);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<int> exps(5);
        for (auto& x : exps) x = e(rng);
        EXPECT_EQ(BigInt(jastrow_squared_coefficient(exps)), p5.coefficient(exps));
    }
}

TEST(Jastrow, EvaluatesLikeTheProduct) {
    const auto p = jastrow_squared(4);
    const std::vector<std::complex<double>> z{{0.3, 0.1}, {-0.7, 0.4}, {0.2, -0.9}, {1.1, 0.5}};
    std::complex<double> direct = 1.0;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) direct *= (z[a] - z[b]) * (z[a] - z[b]);
    EXPECT_LT(std::abs(p.evaluate(z) - direct), 1e-12 * std::abs(direct));
}

TEST(Trial, BlockSizes) {
    EXPECT_EQ(trial_block_sizes(6, 2), (std::vector<int>{3, 3}));
    EXPECT_EQ(trial_block_sizes(5, 2), (std::vector<int>{3, 2}));
    EXPECT_EQ(trial_block_sizes(7, 3), (std::vector<int>{3, 2, 2}));
    EXPECT_EQ(set_partitions(4, {2, 2}).size(), 3u);
    EXPECT_EQ(set_partitions(5, {3, 2}).size(), 10u);
    EXPECT_EQ(set_partitions(6, {2, 2, 2}).size(), 15u);
}

TEST(Trial, TwoParticleLaughlin) {
    const auto t = symmetrized_product(2, 1);
    EXPECT_EQ(t.total_l, 2);
    ASSERT_EQ(t.amplitudes.size(), 2u);
    EXPECT_NEAR(t.amplitudes[0], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(t.amplitudes[1], -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Trial, MomentumOfPairedStates) {
    const auto four = symmetrized_product(4, 2);
    EXPECT_EQ(four.total_l, 4);
    EXPECT_EQ(four.nbar, 0);
    const auto five = symmetrized_product(5, 2);
    EXPECT_EQ(five.nbar, 1);
    EXPECT_EQ(five.total_l, 8);
}

TEST(Trial, LaughlinIsTheContactGroundState) {
    for (int n = 2; n <= 6; ++n) {
        const auto t = symmetrized_product(n, 1);
        const auto gs = ground_state(t.basis, Kernel::Contact);
        EXPECT_NEAR(gs.energy, 0.0, 1e-10);
        EXPECT_NEAR(overlap(t, gs, t.basis), 1.0, 1e-9) << n;

        // H annihilates the trial state directly
        const auto h = build_hamiltonian(t.basis, ElementTable::closed_form(Kernel::Contact, t.basis.l_max()));
        std::vector<double> hv(t.amplitudes.size());
        h.apply(t.amplitudes, hv);
        double norm = 0.0;
        for (double x : hv) norm += x * x;
        EXPECT_LT(std::sqrt(norm), 1e-12) << n;
    }
}

TEST(Trial, CoulombOverlapStaysLarge) {
    const auto t = symmetrized_product(5, 1);
    const double ov = overlap(t, ground_state(t.basis, Kernel::Coulomb), t.basis);
    EXPECT_GE(ov, 0.9);
    EXPECT_NEAR(ov, 0.998471378495, 1e-9); // frozen from the first run
}

TEST(Trial, ExpansionMatchesDirectEvaluation) {
    std::mt19937 rng(17);
    std::normal_distribution<double> g(0.0, 0.8);
    for (int n = 2; n <= 5; ++n)
        for (int k = 1; k <= std::min(2, n); ++k) {
            if (n / k < 1) continue;
            const auto t = symmetrized_product(n, k);
            std::complex<double> ratio = 0.0;
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<std::complex<double>> z(static_cast<std::size_t>(n));
                for (auto& x : z) x = {g(rng), g(rng)};
                const auto direct = evaluate_trial(n, k, z);
                const auto rebuilt = from_amplitudes(t, z);
                if (std::abs(direct) < 1e-8) continue;
                const auto r = rebuilt / direct;
                if (ratio == 0.0) ratio = r;
                // the monomial sum cancels heavily, so only ~1e-7 of the digits survive
                EXPECT_LT(std::abs(r - ratio), 1e-6 * std::abs(ratio)) << n << " " << k;
            }
            EXPECT_NE(ratio, 0.0);
        }
}

TEST(Trial, Errors) {
    EXPECT_THROW(symmetrized_product(9, 1), ConfigError);
    EXPECT_THROW(symmetrized_product(2, 3), ConfigError);
    EXPECT_THROW(symmetrized_product(0, 1), ConfigError);
    const auto t = symmetrized_product(4, 2);
    const auto other = enumerate_basis(4, 5, Statistics::Boson);
    EXPECT_THROW(overlap(t, ground_state(other, Kernel::Coulomb), other), ConfigError);
}
