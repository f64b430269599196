#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rotent/analysis.hpp"

using namespace rotent;

namespace {

Series from_values(const std::vector<double>& v, int first_l = 0) {
    Series s;
    for (std::size_t k = 0; k < v.size(); ++k) s.emplace_back(first_l + static_cast<int>(k), v[k]);
    return s;
}

// Extrema by scanning each plateau and comparing its two neighbours.
std::vector<int> brute_extrema(const Series& s, ExtremumKind kind) {
    std::vector<int> out;
    std::size_t a = 0;
    while (a < s.size()) {
        std::size_t b = a;
        while (b + 1 < s.size() && s[b + 1].second == s[a].second) ++b;
        if (a > 0 && b + 1 < s.size()) {
            const double left = s[a - 1].second, right = s[b + 1].second, v = s[a].second;
            if (kind == ExtremumKind::Max ? (v > left && v > right) : (v < left && v < right)) out.push_back(s[a].first);
        }
        a = b + 1;
    }
    return out;
}

// L_i is stable when some Omega makes E_i - Omega L_i strictly the lowest.
std::vector<int> brute_stable(const Series& s) {
    std::vector<int> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double lo = -INFINITY, hi = INFINITY;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (j == i) continue;
            const double slope = (s[i].second - s[j].second) / (s[i].first - s[j].first);
            if (j < i) lo = std::max(lo, slope);
            else hi = std::min(hi, slope);
        }
        if (lo < hi) out.push_back(s[i].first);
    }
    return out;
}

std::vector<double> profile(std::initializer_list<double> v) { return v; }

} // namespace

TEST(Extrema, Examples) {
    const auto s = from_values({3, 1, 2, 2, 5, 4, 4, 4, 6, 0});
    EXPECT_EQ(local_extrema(s, ExtremumKind::Min), (std::vector<int>{1, 5}));
    EXPECT_EQ(local_extrema(s, ExtremumKind::Max), (std::vector<int>{4, 8}));
    EXPECT_TRUE(local_extrema(from_values({1, 2, 3}), ExtremumKind::Max).empty());
    EXPECT_TRUE(local_extrema(from_values({2, 2, 2}), ExtremumKind::Min).empty());
    EXPECT_THROW(local_extrema({{2, 1.0}, {2, 0.0}}, ExtremumKind::Min), std::invalid_argument);
}

TEST(Extrema, AgreeWithPlateauScan) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> val(0, 4), len(0, 30);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> v(static_cast<std::size_t>(len(rng)));
        for (auto& x : v) x = val(rng);
        const auto s = from_values(v, 3);
        for (auto kind : {ExtremumKind::Min, ExtremumKind::Max}) EXPECT_EQ(local_extrema(s, kind), brute_extrema(s, kind));
        // maxima and minima alternate
        const auto mins = local_extrema(s, ExtremumKind::Min), maxs = local_extrema(s, ExtremumKind::Max);
        std::vector<std::pair<int, int>> merged;
        for (int l : mins) merged.emplace_back(l, 0);
        for (int l : maxs) merged.emplace_back(l, 1);
        std::sort(merged.begin(), merged.end());
        for (std::size_t k = 1; k < merged.size(); ++k) EXPECT_NE(merged[k].second, merged[k - 1].second);
    }
}

TEST(Periods, Sawtooth) {
    std::vector<double> v;
    for (int l = 0; l <= 20; ++l) v.push_back(l % 3);
    const auto p = oscillation_periods(from_values(v));
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0], (OscillationInterval{3, 18, 3}));
}

TEST(Periods, PeriodChangeSharesEndpoint) {
    // minima at 2, 4, 6, 8, then 11, 14, 17
    std::vector<double> v(20, 1.0);
    for (int l : {2, 4, 6, 8, 11, 14, 17}) v[static_cast<std::size_t>(l)] = 0.0;
    for (int l : {9, 12, 15, 18}) v[static_cast<std::size_t>(l)] = 0.5;
    const auto p = oscillation_periods(from_values(v));
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p[0], (OscillationInterval{2, 8, 2}));
    EXPECT_EQ(p[1], (OscillationInterval{8, 17, 3}));
}

TEST(Periods, LongDescentDoesNotStartACycle) {
    std::vector<double> v;
    for (int l = 0; l <= 10; ++l) v.push_back(10 - l);
    for (int l = 11; l <= 17; ++l) v.push_back(l % 2);
    const auto s = from_values(v);
    EXPECT_EQ(local_extrema(s, ExtremumKind::Min), (std::vector<int>{10, 12, 14, 16}));
    const auto p = oscillation_periods(s);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0], (OscillationInterval{12, 16, 2}));
}

TEST(Periods, NeedEnoughSpacings) {
    const auto s = from_values({1, 0, 1, 0, 1, 1});
    EXPECT_TRUE(oscillation_periods(s).empty());
    ASSERT_EQ(oscillation_periods(s, 1).size(), 1u);
    // gaps outside 2..4 are not oscillations
    std::vector<double> wide(30, 1.0);
    for (int l : {3, 8, 13, 18, 23}) wide[static_cast<std::size_t>(l)] = 0.0;
    EXPECT_TRUE(oscillation_periods(from_values(wide)).empty());
}

TEST(Stable, Examples) {
    EXPECT_EQ(stable_angular_momenta(from_values({0, 1, 4, 9, 16})), (std::vector<int>{0, 1, 2, 3, 4}));
    EXPECT_EQ(stable_angular_momenta(from_values({2, 2, 0, 0, 0})), (std::vector<int>{0, 2, 4}));
    EXPECT_EQ(stable_angular_momenta(from_values({0, 1, 2, 3})), (std::vector<int>{0, 3}));
    EXPECT_THROW(stable_angular_momenta(from_values({1})), std::invalid_argument);
}

TEST(Stable, BruteForceAndAffineInvariance) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> val(0, 20), len(2, 14);
    for (int trial = 0; trial < 400; ++trial) {
        std::vector<double> v(static_cast<std::size_t>(len(rng)));
        for (auto& x : v) x = val(rng);
        const auto s = from_values(v, 4);
        const auto stable = stable_angular_momenta(s);
        EXPECT_EQ(stable, brute_stable(s));
        EXPECT_EQ(stable.front(), s.front().first);
        EXPECT_EQ(stable.back(), s.back().first);
        Series tilted;
        for (const auto& [l, e] : s) tilted.emplace_back(l, e - 3.0 * l + 7.0);
        EXPECT_EQ(stable_angular_momenta(tilted), stable);
    }
}

TEST(Special, MomentumExamples) {
    EXPECT_EQ(special_subspace_momentum(6, 1, Statistics::Boson).momentum, 30);
    EXPECT_EQ(special_subspace_momentum(6, 2, Statistics::Boson).momentum, 12);
    const auto five = special_subspace_momentum(5, 2, Statistics::Boson);
    EXPECT_EQ(five.nbar, 1);
    EXPECT_EQ(five.momentum, 8);
    const auto f = special_subspace_momentum(4, 1, Statistics::Fermion);
    EXPECT_EQ(f.momentum, 12);
    EXPECT_EQ(f.total_l, 18);
    EXPECT_THROW(special_subspace_momentum(4, 0, Statistics::Boson), ConfigError);
    EXPECT_THROW(special_subspace_momentum(2, 3, Statistics::Boson), ConfigError);
}

TEST(Special, NbarProperties) {
    for (int n = 1; n <= 30; ++n)
        for (int k = 1; k <= 4; ++k) {
            if (n <= n % k) continue;
            const auto sm = special_subspace_momentum(n, k, Statistics::Boson);
            EXPECT_EQ((n - sm.nbar) % k, 0);
            EXPECT_LT(sm.nbar, k);
            EXPECT_GE(sm.momentum, 0);
            EXPECT_EQ(sm.momentum * k, (n - sm.nbar) * (n + sm.nbar - k));
        }
}

TEST(Special, PredictionIdentities) {
    for (int n = 2; n <= 20; ++n) {
        EXPECT_NEAR(qh_entropy_prediction(n, 1, Statistics::Boson).s1, laughlin_prediction(n, 2), 1e-14);
        EXPECT_NEAR(qh_entropy_prediction(n, 1, Statistics::Fermion).s1, laughlin_prediction(n, 3), 1e-14);
        for (int k = 1; k <= 3; ++k) {
            const auto b = qh_entropy_prediction(n, k, Statistics::Boson);
            EXPECT_NEAR(b.s1, spherical_prediction(n, b.nu, b.sigma), 1e-14);
            const auto f = qh_entropy_prediction(n, k, Statistics::Fermion);
            EXPECT_NEAR(f.s1, spherical_prediction(n, f.nu, f.sigma), 1e-14);
        }
    }
    EXPECT_NEAR(qh_entropy_prediction(6, 2, Statistics::Boson).s1, std::log(5.0), 1e-15);
    EXPECT_NEAR(qh_entropy_prediction(5, 2, Statistics::Fermion).s1, std::log(8.0), 1e-15);
}

TEST(Edge, ClassifierProfiles) {
    const auto vortex = profile({0.2, 0.8, 1, 1, 1, 0.9, 0.3, 0});
    EXPECT_EQ(classify_profile(vortex), ProfileClass::CentralVortex);
    const auto flat = profile({1, 1, 1, 1, 0.95, 1, 0.2});
    EXPECT_EQ(classify_profile(flat), ProfileClass::CentralVortex);
    const auto ring = profile({1, 1, 1, 0.5, 1, 1, 0.2});
    EXPECT_EQ(classify_profile(ring), ProfileClass::EdgeReconstructed);
    EXPECT_THROW(classify_profile(std::vector<double>{}), std::invalid_argument);
}

TEST(Edge, DetectorFindsTransition) {
    std::vector<ProfilePoint> pts;
    for (int n = 14; n <= 17; ++n) pts.push_back({n, profile({0.2, 0.8, 1, 1, 1, 0.9, 0.3}), 0.04 - 0.003 * (n - 14)});
    pts.push_back({18, profile({1, 1, 1, 0.5, 1, 1, 0.2}), 0.21});
    pts.push_back({19, profile({1, 1, 1, 0.4, 1, 1, 0.2}), 0.20});
    const auto d = edge_reconstruction_detector(pts);
    ASSERT_TRUE(d.transition.has_value());
    EXPECT_EQ(*d.transition, 18);
    EXPECT_TRUE(d.entropy_jump);
    EXPECT_EQ(d.classes.size(), 6u);

    pts.resize(4);
    EXPECT_FALSE(edge_reconstruction_detector(pts).transition.has_value());
}

TEST(Scan, TwoContactBosons) {
    int seen = 0;
    ScanOptions opts;
    opts.with_s2 = true;
    opts.on_row = [&](const ScanRow&) { ++seen; };
    const auto res = scan_subspaces(2, Statistics::Boson, {Kernel::Contact, 1.0}, 0, 4, opts);
    ASSERT_EQ(res.rows.size(), 5u);
    EXPECT_EQ(seen, 5);
    const std::vector<double> expect{2, 2, 0, 0, 0};
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_NEAR(res.rows[k].energy, expect[k], 1e-10);
        EXPECT_NEAR(*res.rows[k].s2, 0.0, 1e-10);
    }
    EXPECT_EQ(stable_angular_momenta(res.rows), (std::vector<int>{0, 2, 4}));
    EXPECT_FALSE(res.error.has_value());
}

TEST(Scan, FermionsSkipInfeasibleMomenta) {
    const auto res = scan_subspaces(3, Statistics::Fermion, {Kernel::Coulomb, 1.0}, 0, 5);
    EXPECT_EQ(res.notes.size(), 3u);
    ASSERT_EQ(res.rows.size(), 3u);
    EXPECT_EQ(res.rows.front().l, 3);
    EXPECT_EQ(res.rows.front().delta_l, 0);
    EXPECT_NEAR(res.rows.front().delta_s1, 0.0, 1e-14);
    EXPECT_THROW(scan_subspaces(0, Statistics::Boson, {}, 0, 3), ConfigError);
    EXPECT_THROW(scan_subspaces(3, Statistics::Boson, {}, 5, 3), ConfigError);
}

TEST(Scan, StrengthOnlyRescalesEnergy) {
    const auto a = scan_subspaces(4, Statistics::Boson, {Kernel::Coulomb, 1.0}, 0, 8);
    const auto b = scan_subspaces(4, Statistics::Boson, {Kernel::Coulomb, 3.0}, 0, 8);
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        EXPECT_NEAR(b.rows[k].energy, 3.0 * a.rows[k].energy, 1e-9);
        if (!a.rows[k].degenerate) EXPECT_NEAR(b.rows[k].s1, a.rows[k].s1, 1e-8);
    }
}
