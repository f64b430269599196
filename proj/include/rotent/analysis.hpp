#pragma once

// Angular-momentum scans and the signatures read off them: extrema,
// oscillation periods, yrast (real ground-state) momenta, special-subspace
// momenta with their quantum-Hall entropy predictions, and the
// edge-reconstruction classifier.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rotent/entanglement.hpp"
#include "rotent/errors.hpp"
#include "rotent/fock.hpp"
#include "rotent/interaction.hpp"
#include "rotent/solver.hpp"

namespace rotent {

struct ScanRow {
    Statistics statistics = Statistics::Boson;
    int n_particles = 0;
    int l = 0;
    int delta_l = 0;                 ///< L - N(N-1)/2 for fermions, L for bosons
    std::size_t dimension = 0;
    double energy = 0.0;             ///< interaction part of E0
    double s1 = 0.0;
    std::optional<double> log_l_minus_s1;
    double delta_s1 = 0.0;
    std::optional<double> s2;
    std::vector<double> occupations;
    bool degenerate = false;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    std::vector<std::string> notes;  ///< skipped points
    std::optional<std::string> error;///< set when a solver failure aborted the scan
};

struct ScanOptions {
    bool with_s2 = false;
    LanczosOptions lanczos{};
    std::function<void(const ScanRow&)> on_row; ///< called as each row completes
};

/// Ground state and entanglement report of one harmonic-trap subspace.
inline ScanRow solve_subspace(int n_particles, int total_l, Statistics stat, const ElementTable& table,
                              double interaction_scale, bool with_s2, const LanczosOptions& lanczos = {},
                              GroundStateRecord* record_out = nullptr) {
    const auto basis = enumerate_basis(n_particles, total_l, stat);
    const auto h = build_hamiltonian(basis, table, interaction_scale);
    auto gs = ground_state_lanczos(h, lanczos);
    annotate(gs, basis);
    const auto rep = report(gs, basis, with_s2);
    ScanRow row;
    row.statistics = stat;
    row.n_particles = n_particles;
    row.l = total_l;
    row.delta_l = total_l - minimal_angular_momentum(n_particles, stat);
    row.dimension = basis.dimension();
    row.energy = gs.energy;
    row.s1 = rep.s1;
    row.log_l_minus_s1 = rep.log_l_minus_s1;
    row.delta_s1 = rep.delta_s1;
    row.s2 = rep.s2;
    row.occupations = rep.occupations;
    row.degenerate = gs.degenerate;
    if (record_out) *record_out = std::move(gs);
    return row;
}

/// Scans total angular momentum L over [l_from, l_to] (absolute L for both
/// statistics). Infeasible L are skipped with a note.
inline ScanResult scan_subspaces(int n_particles, Statistics stat, const Interaction& interaction, int l_from, int l_to,
                                 const ScanOptions& opts = {}) {
    if (n_particles < 1) throw ConfigError("N: particle number must be >= 1");
    if (l_to < l_from) throw ConfigError("L: empty range");
    ScanResult out;
    const int floor_l = minimal_angular_momentum(n_particles, stat);
    const int first = std::max(l_from, floor_l);
    for (int l = l_from; l < first; ++l) out.notes.push_back("L=" + std::to_string(l) + " infeasible, skipped");
    if (first > l_to) return out;
    const int table_max = std::max(0, tight_orbital_bound(n_particles, l_to, stat));
    const auto table = ElementTable::closed_form(interaction.kind, table_max);
    for (int l = first; l <= l_to; ++l) {
        try {
            auto row = solve_subspace(n_particles, l, stat, table, interaction.strength, opts.with_s2, opts.lanczos);
            if (opts.on_row) opts.on_row(row);
            out.rows.push_back(std::move(row));
        } catch (const EmptySubspace& e) {
            out.notes.push_back("L=" + std::to_string(l) + " skipped: " + e.what());
        } catch (const NumericalError& e) {
            out.error = "L=" + std::to_string(l) + ": " + e.what();
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Series analysis
// ---------------------------------------------------------------------------

using Series = std::vector<std::pair<int, double>>;

enum class ExtremumKind { Max, Min };

/// Interior strict extrema. A plateau counts once, at its smallest L.
inline std::vector<int> local_extrema(const Series& series, ExtremumKind kind) {
    for (std::size_t k = 1; k < series.size(); ++k)
        if (series[k].first <= series[k - 1].first) throw std::invalid_argument("series must be strictly increasing in L");
    // Collapse runs of equal values.
    struct Run {
        int l;
        double v;
    };
    std::vector<Run> runs;
    for (const auto& [l, v] : series)
        if (runs.empty() || runs.back().v != v) runs.push_back({l, v});
    std::vector<int> out;
    for (std::size_t k = 1; k + 1 < runs.size(); ++k) {
        const double a = runs[k - 1].v, b = runs[k].v, c = runs[k + 1].v;
        const bool hit = kind == ExtremumKind::Max ? (b > a && b > c) : (b < a && b < c);
        if (hit) out.push_back(runs[k].l);
    }
    return out;
}

struct OscillationInterval {
    int l_begin = 0;
    int l_end = 0;
    int period = 0;
    friend bool operator==(const OscillationInterval&, const OscillationInterval&) = default;
};

/// Maximal runs of local minima spaced equally by P in {2, 3, 4}, with at
/// least `min_spacings` consecutive equal gaps. Neighbouring runs may share
/// an endpoint.
///
/// An oscillation is counted in full cycles: the leading minimum of a run is
/// dropped when the descent into it (back to the previous rise or the series
/// start) is longer than P, since it then closes a slower feature.
inline std::vector<OscillationInterval> oscillation_periods(const Series& series, int min_spacings = 2) {
    const auto minima = local_extrema(series, ExtremumKind::Min);
    auto descent_length = [&](int l_min) {
        std::size_t pos = 0;
        while (series[pos].first != l_min) ++pos;
        std::size_t top = pos;
        while (top > 0 && series[top - 1].second >= series[top].second) --top;
        return l_min - series[top].first;
    };
    std::vector<OscillationInterval> out;
    std::size_t start = 0;
    while (start + 1 < minima.size()) {
        const int gap = minima[start + 1] - minima[start];
        std::size_t end = start + 1;
        while (end + 1 < minima.size() && minima[end + 1] - minima[end] == gap) ++end;
        if (gap >= 2 && gap <= 4) {
            std::size_t first = start;
            if (descent_length(minima[first]) > gap) ++first;
            if (static_cast<int>(end - first) >= min_spacings) out.push_back({minima[first], minima[end], gap});
        }
        start = end;
    }
    return out;
}

/// Energies closer than this (relative) to a hull chord count as on it.
inline constexpr double hull_tolerance = 1e-9;

/// Vertices of the lower convex hull of (L, E0): the L that are ground states
/// of H_L - L*Omega for some rotation frequency.
inline std::vector<int> stable_angular_momenta(const Series& energies) {
    if (energies.size() < 2) throw std::invalid_argument("stable_angular_momenta needs at least two points");
    for (std::size_t k = 1; k < energies.size(); ++k)
        if (energies[k].first <= energies[k - 1].first) throw std::invalid_argument("series must be strictly increasing in L");
    std::vector<std::pair<int, double>> hull;
    for (const auto& p : energies) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            // remove b unless it lies below the chord a -> p by more than round-off
            const double cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
            const double depth = cross / (p.first - a.first);
            if (depth <= hull_tolerance * std::max(1.0, std::abs(b.second)))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    std::vector<int> out;
    for (const auto& p : hull) out.push_back(p.first);
    return out;
}

inline std::vector<int> stable_angular_momenta(const std::vector<ScanRow>& rows) {
    Series s;
    for (const auto& r : rows) s.emplace_back(r.l, r.energy);
    return stable_angular_momenta(s);
}

// ---------------------------------------------------------------------------
// Special subspaces and quantum-Hall predictions
// ---------------------------------------------------------------------------

struct SpecialMomentum {
    int momentum = 0;   ///< L for bosons, Delta L for fermions
    int total_l = 0;    ///< absolute L
    int nbar = 0;       ///< smallest n >= 0 with k | (N - n)
};

/// L = (N - Nbar)(N + Nbar - k) / k.
inline SpecialMomentum special_subspace_momentum(int n_particles, int k, Statistics stat) {
    if (k < 1) throw ConfigError("k: must be >= 1");
    if (n_particles < 1) throw ConfigError("N: particle number must be >= 1");
    SpecialMomentum out;
    out.nbar = n_particles % k;
    if (n_particles <= out.nbar) throw ConfigError("N: must exceed N mod k");
    out.momentum = (n_particles - out.nbar) * (n_particles + out.nbar - k) / k;
    out.total_l = out.momentum + minimal_angular_momentum(n_particles, stat);
    return out;
}

/// Quantum-Hall entropy on the sphere: ln(N / nu - sigma + 1).
inline double spherical_prediction(int n_particles, double nu, double sigma) {
    return std::log(n_particles / nu - sigma + 1.0);
}

/// Laughlin state of N0 particles at nu = 1/m: ln(m (N0 - 1) + 1).
inline double laughlin_prediction(int n0, int m) { return std::log(static_cast<double>(m) * (n0 - 1) + 1.0); }

struct QhPrediction {
    int k = 1;
    int nbar = 0;
    double nu = 0.0;
    double sigma = 0.0;
    double s1 = 0.0;
};

/// Bosons: nu = k/2, sigma = 2, S1 = ln(2N/k - 1).
/// Fermions: nu = k/(k+2), sigma = 3, S1 = ln((1 + 2/k) N - 2).
inline QhPrediction qh_entropy_prediction(int n_particles, int k, Statistics stat) {
    if (k < 1) throw ConfigError("k: must be >= 1");
    QhPrediction p;
    p.k = k;
    p.nbar = n_particles % k;
    if (stat == Statistics::Boson) {
        p.nu = k / 2.0;
        p.sigma = 2.0;
        p.s1 = std::log(2.0 * n_particles / k - 1.0);
    } else {
        p.nu = static_cast<double>(k) / (k + 2);
        p.sigma = 3.0;
        p.s1 = std::log((1.0 + 2.0 / k) * n_particles - 2.0);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Edge reconstruction
// ---------------------------------------------------------------------------

enum class ProfileClass { CentralVortex, EdgeReconstructed };

inline std::string_view to_string(ProfileClass c) {
    return c == ProfileClass::CentralVortex ? "central-vortex" : "edge-reconstructed";
}

struct EdgeClassifierConfig {
    double trough_depth = 0.10; ///< fraction of the plateau occupation
    int min_trough_offset = 2;  ///< orbitals between l = 0 and the trough centre
};

/// Central vortex: the depletion sits at the low-l end of the droplet.
/// Edge reconstructed: an interior trough with a higher-occupied region
/// between it and l = 0.
inline ProfileClass classify_profile(std::span<const double> occupations, const EdgeClassifierConfig& cfg = {}) {
    if (occupations.empty()) throw std::invalid_argument("empty occupation profile");
    const double plateau = *std::max_element(occupations.begin(), occupations.end());
    std::size_t edge = 0;
    for (std::size_t l = 0; l < occupations.size(); ++l)
        if (occupations[l] >= 0.5 * plateau) edge = l;
    std::size_t trough = 0;
    for (std::size_t l = 1; l <= edge; ++l)
        if (occupations[l] < occupations[trough]) trough = l;
    const double floor = occupations[trough];
    const double threshold = cfg.trough_depth * plateau;
    if (static_cast<int>(trough) < cfg.min_trough_offset || plateau - floor < threshold)
        return ProfileClass::CentralVortex;
    const double inner = *std::max_element(occupations.begin(), occupations.begin() + static_cast<std::ptrdiff_t>(trough));
    return inner - floor >= threshold ? ProfileClass::EdgeReconstructed : ProfileClass::CentralVortex;
}

struct ProfilePoint {
    int n_particles = 0;
    std::vector<double> occupations;
    double delta_s1 = 0.0;
};

struct EdgeReconstruction {
    std::vector<std::pair<int, ProfileClass>> classes;
    std::optional<int> transition;   ///< first N whose class differs from the previous N
    bool entropy_jump = false;       ///< Delta S1(transition) > Delta S1(previous)
};

inline EdgeReconstruction edge_reconstruction_detector(const std::vector<ProfilePoint>& profiles,
                                                       const EdgeClassifierConfig& cfg = {}) {
    if (profiles.size() < 2) throw std::invalid_argument("edge detector needs at least two profiles");
    EdgeReconstruction out;
    for (const auto& p : profiles) out.classes.emplace_back(p.n_particles, classify_profile(p.occupations, cfg));
    for (std::size_t k = 1; k < profiles.size(); ++k) {
        if (out.classes[k].second != out.classes[k - 1].second) {
            out.transition = profiles[k].n_particles;
            out.entropy_jump = profiles[k].delta_s1 > profiles[k - 1].delta_s1;
            break;
        }
    }
    return out;
}

} // namespace rotent
