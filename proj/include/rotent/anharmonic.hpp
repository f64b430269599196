#pragma once

// Interaction-strength scans for contact-interacting bosons in the
// quadratic-plus-quartic trap:
//   H_L = sum_l eps_l n_l + U0 sum_{ijkl} U_{ijkl} a_i^dag a_j^dag a_k a_l
// with Numerov orbitals and energies. The -L*Omega term is constant in the
// subspace and omitted.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rotent/entanglement.hpp"
#include "rotent/errors.hpp"
#include "rotent/fock.hpp"
#include "rotent/interaction.hpp"
#include "rotent/orbitals.hpp"
#include "rotent/solver.hpp"

namespace rotent {

/// LLL validity window for the interaction strength (units of hbar omega).
inline constexpr double max_strength = 0.05;

struct StrengthScanRow {
    int n_particles = 0;
    int l = 0;
    double lambda = 0.0;
    double strength = 0.0;
    double energy = 0.0;
    std::optional<double> s1; ///< absent when the ground state is degenerate
    std::optional<double> s2;
    std::vector<double> occupations;
    std::vector<double> amplitudes;
    bool degenerate = false;
};

struct AnharmonicOptions {
    TrapConfig trap{};      ///< lambda is overridden by the scan argument
    LanczosOptions lanczos{};
};

/// Uniform grid of `points` values over [lo, hi].
inline std::vector<double> uniform_grid(double lo, double hi, int points) {
    if (points < 1) throw ConfigError("U0: grid needs at least one point");
    if (points == 1) return {lo};
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
    // snap the midpoint of symmetric grids to an exact zero
    for (auto& v : g)
        if (std::abs(v) < 1e-15 * std::max(std::abs(lo), std::abs(hi))) v = 0.0;
    return g;
}

inline std::vector<StrengthScanRow> strength_scan(int n_particles, int total_l, double lambda,
                                                  const std::vector<double>& strengths, bool with_s2,
                                                  const AnharmonicOptions& opts = {}) {
    for (double u : strengths)
        if (!(std::abs(u) <= max_strength + 1e-15))
            throw ConfigError("U0: " + std::to_string(u) + " outside [-0.05, 0.05]");
    for (std::size_t k = 1; k < strengths.size(); ++k)
        if (strengths[k] <= strengths[k - 1]) throw ConfigError("U0: grid must be strictly increasing");
    TrapConfig trap = opts.trap;
    trap.lambda = lambda;
    trap.validate();

    const auto basis = enumerate_basis(n_particles, total_l, Statistics::Boson);
    const OrbitalSet orbitals(basis.l_max(), trap);
    const auto table = ElementTable::numeric_contact(orbitals, basis.l_max());
    const auto energies = orbitals.energies();
    auto h = build_hamiltonian(basis, table, 1.0, &energies);

    std::vector<StrengthScanRow> rows;
    for (double u : strengths) {
        h.set_interaction_scale(u);
        auto gs = ground_state_lanczos(h, opts.lanczos);
        annotate(gs, basis);
        StrengthScanRow row;
        row.n_particles = n_particles;
        row.l = total_l;
        row.lambda = lambda;
        row.strength = u;
        row.energy = gs.energy;
        row.degenerate = gs.degenerate;
        const auto rep = report(gs, basis, with_s2 && n_particles >= 2);
        row.occupations = rep.occupations;
        if (!gs.degenerate) {
            row.s1 = rep.s1;
            row.s2 = rep.s2;
        }
        row.amplitudes = std::move(gs.amplitudes);
        rows.push_back(std::move(row));
    }
    return rows;
}

/// S1 of the L = N ground state for each N at fixed (lambda, U0).
inline std::vector<std::pair<int, double>> condensation_trend(const std::vector<int>& particle_counts, double lambda,
                                                              double strength, const AnharmonicOptions& opts = {}) {
    if (strength == 0.0) throw ConfigError("U0: condensation trend needs a non-zero interaction");
    std::vector<std::pair<int, double>> out;
    for (std::size_t k = 0; k < particle_counts.size(); ++k) {
        if (k > 0 && particle_counts[k] <= particle_counts[k - 1]) throw ConfigError("N: list must be increasing");
        const int n = particle_counts[k];
        const auto rows = strength_scan(n, n, lambda, {strength}, false, opts);
        if (!rows.front().s1) throw NumericalError("degenerate ground state at N=" + std::to_string(n));
        out.emplace_back(n, *rows.front().s1);
    }
    return out;
}

} // namespace rotent
