#pragma once

// Nodeless single-particle orbitals of the quadratic-plus-quartic trap
// V(r) = r^2 (1 + lambda r^2) / 2, solved by Numerov shooting with energy
// bisection.
//
// The radial equation -1/2 (R'' + R'/r - l^2 R / r^2) + V R = eps R is
// integrated on a uniform grid in x = ln r, where it becomes
// w'' = [l^2 + 2 r^2 (V - eps)] w with w(x) = R(e^x): no first-derivative term
// and no singular coefficient at small r.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rotent/errors.hpp"

namespace rotent {

struct TrapConfig {
    double lambda = 0.0;   ///< quartic coefficient, >= 0
    double r_min = 1e-6;   ///< inner grid edge (units of a0)
    double r_max = 12.0;   ///< outer grid edge (units of a0)
    double log_step = 1e-3;///< grid spacing in ln r
    double energy_tolerance = 1e-12;

    void validate() const {
        if (!(lambda >= 0.0)) throw ConfigError("lambda: quartic coefficient must be >= 0");
        if (!(r_min > 0.0) || !(r_max > r_min)) throw ConfigError("grid: need 0 < r_min < r_max");
        if (r_max < 8.0) throw ConfigError("grid: r_max must be >= 8 a0");
        if (!(log_step > 0.0) || log_step > 2e-3) throw ConfigError("grid: log step must be in (0, 2e-3]");
    }

    double potential(double r) const { return 0.5 * r * r * (1.0 + lambda * r * r); }
};

/// Log-uniform radial grid with trapezoid weights for int f(r) r dr.
class RadialGrid {
public:
    explicit RadialGrid(const TrapConfig& trap) : h_(trap.log_step) {
        x0_ = std::log(trap.r_min);
        const auto n = static_cast<std::size_t>(std::ceil((std::log(trap.r_max) - x0_) / h_)) + 1;
        r_.resize(n);
        for (std::size_t k = 0; k < n; ++k) r_[k] = std::exp(x0_ + h_ * static_cast<double>(k));
    }

    std::size_t size() const { return r_.size(); }
    double step() const { return h_; }
    double r(std::size_t k) const { return r_[k]; }
    const std::vector<double>& radii() const { return r_; }

    /// Weight such that sum_k weight(k) f(r_k) ~ int f(r) r dr (= int f r^2 dx).
    double weight(std::size_t k) const {
        const double w = h_ * r_[k] * r_[k];
        return (k == 0 || k + 1 == r_.size()) ? 0.5 * w : w;
    }

    /// Same rule using every other grid point, for error estimates.
    double coarse_weight(std::size_t k) const {
        if (k % 2 != 0) return 0.0;
        const std::size_t last = (r_.size() - 1) / 2 * 2;
        if (k > last) return 0.0;
        const double w = 2.0 * h_ * r_[k] * r_[k];
        return (k == 0 || k == last) ? 0.5 * w : w;
    }

private:
    double h_;
    double x0_;
    std::vector<double> r_;
};

struct Orbital {
    int l = 0;
    double energy = 0.0;
    std::vector<double> radial; ///< R_l(r_k), normalized so 2 pi int R^2 r dr = 1
};

namespace detail {

// Outward Numerov pass; returns the number of sign changes. If `out` is
// non-null the (rescaled) solution is stored there.
inline int numerov_outward(int l, double energy, const TrapConfig& trap, const RadialGrid& grid,
                           std::vector<double>* out) {
    const std::size_t n = grid.size();
    const double h2 = grid.step() * grid.step() / 12.0;
    auto g = [&](std::size_t k) {
        const double r = grid.r(k);
        return static_cast<double>(l) * l + 2.0 * r * r * (trap.potential(r) - energy);
    };
    // Regular solution near the origin: R ~ r^l (1 - eps r^2 / (2(l+1))), common factor r_min^l dropped.
    const double a = -energy / (2.0 * (l + 1));
    double w_prev = 1.0 + a * grid.r(0) * grid.r(0);
    double w_curr = std::exp(l * grid.step()) * (1.0 + a * grid.r(1) * grid.r(1));
    if (out) {
        out->assign(n, 0.0);
        (*out)[0] = w_prev;
        (*out)[1] = w_curr;
    }
    double g_prev = g(0), g_curr = g(1);
    int nodes = 0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double g_next = g(k + 1);
        const double w_next =
            (2.0 * w_curr * (1.0 + 5.0 * h2 * g_curr) - w_prev * (1.0 - h2 * g_prev)) / (1.0 - h2 * g_next);
        if ((w_next < 0.0) != (w_curr < 0.0)) ++nodes;
        w_prev = w_curr;
        w_curr = w_next;
        g_prev = g_curr;
        g_curr = g_next;
        if (out) (*out)[k + 1] = w_next;
        if (std::abs(w_curr) > 1e200) {
            w_prev *= 1e-200;
            w_curr *= 1e-200;
            if (out)
                for (std::size_t m = 0; m <= k + 1; ++m) (*out)[m] *= 1e-200;
        }
    }
    return nodes;
}

} // namespace detail

/// Lowest (nodeless) radial state of angular momentum l.
inline Orbital solve_orbital(int l, const TrapConfig& trap, const RadialGrid& grid) {
    if (l < 0) throw ConfigError("l: orbital angular momentum must be >= 0");
    // Harmonic orbital is a variational trial state: eps <= (l+1) + lambda (l+1)(l+2)/2.
    double lo = (l + 1) - 0.5;
    double hi = (l + 1) + 0.5 * trap.lambda * (l + 1) * (l + 2) + 0.5;
    if (detail::numerov_outward(l, lo, trap, grid, nullptr) != 0 || detail::numerov_outward(l, hi, trap, grid, nullptr) == 0)
        throw NumericalError("orbital l=" + std::to_string(l) + ": energy bisection bracket failed");
    while (hi - lo > trap.energy_tolerance * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (detail::numerov_outward(l, mid, trap, grid, nullptr) == 0)
            lo = mid;
        else
            hi = mid;
    }
    Orbital orb;
    orb.l = l;
    orb.energy = 0.5 * (lo + hi);
    detail::numerov_outward(l, lo, trap, grid, &orb.radial);
    auto& w = orb.radial;

    // Beyond the decaying region the lower-bracket solution turns back up; cut there.
    std::size_t peak = 0;
    while (peak + 1 < w.size() && std::abs(w[peak + 1]) >= std::abs(w[peak])) ++peak;
    // Bisection on node count acts like a hard wall at r_max, so the decay is
    // judged away from it.
    const double r_check = 0.9 * grid.r(grid.size() - 1);
    std::size_t cut = peak;
    for (std::size_t k = peak + 1; k < w.size() && grid.r(k) <= r_check; ++k) {
        if (std::abs(w[k]) < std::abs(w[cut])) cut = k;
        else if (std::abs(w[k]) > 2.0 * std::abs(w[cut])) break;
    }
    const double peak_value = std::abs(w[peak]);
    if (std::abs(w[cut]) > 1e-5 * peak_value)
        throw NumericalError("orbital l=" + std::to_string(l) + ": solution does not decay before r_max (grid too small)");
    std::fill(w.begin() + static_cast<std::ptrdiff_t>(cut) + 1, w.end(), 0.0);

    const double peak_signed = w[peak];
    for (auto& v : w) v /= peak_signed;
    double norm = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) norm += grid.weight(k) * w[k] * w[k];
    const double scale = 1.0 / std::sqrt(2.0 * std::numbers::pi * norm);
    for (auto& v : w) v *= scale;
    return orb;
}

/// Orbitals 0..l_max on a shared grid.
class OrbitalSet {
public:
    OrbitalSet(int l_max, const TrapConfig& trap) : trap_(trap), grid_((trap.validate(), trap)) {
        if (l_max < 0) throw ConfigError("l_max: must be >= 0");
        orbitals_.resize(static_cast<std::size_t>(l_max) + 1);
        std::string failure;
#pragma omp parallel for schedule(dynamic)
        for (int l = 0; l <= l_max; ++l) {
            try {
                orbitals_[static_cast<std::size_t>(l)] = solve_orbital(l, trap_, grid_);
            } catch (const std::exception& e) {
#pragma omp critical(rotent_orbital_failure)
                failure = e.what();
            }
        }
        if (!failure.empty()) throw NumericalError(failure);
    }

    int l_max() const { return static_cast<int>(orbitals_.size()) - 1; }
    const TrapConfig& trap() const { return trap_; }
    const RadialGrid& grid() const { return grid_; }
    const Orbital& orbital(int l) const { return orbitals_.at(static_cast<std::size_t>(l)); }
    double energy(int l) const { return orbital(l).energy; }

    std::vector<double> energies() const {
        std::vector<double> e;
        e.reserve(orbitals_.size());
        for (const auto& o : orbitals_) e.push_back(o.energy);
        return e;
    }

private:
    TrapConfig trap_;
    RadialGrid grid_;
    std::vector<Orbital> orbitals_;
};

/// Analytic harmonic LLL radial profile r^l e^{-r^2/2} / sqrt(pi l!).
inline double analytic_radial(int l, double r) {
    if (r <= 0.0) return l == 0 ? 1.0 / std::sqrt(std::numbers::pi) : 0.0;
    return std::exp(l * std::log(r) - 0.5 * r * r - 0.5 * (std::log(std::numbers::pi) + std::lgamma(l + 1.0)));
}

} // namespace rotent
