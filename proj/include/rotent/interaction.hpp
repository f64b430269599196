#pragma once

// Two-body matrix elements U_{ijkl} = <i(1) j(2)| U |l(1) k(2)> over LLL
// orbitals phi_l(z) = z^l e^{-|z|^2/2} / sqrt(pi l!).
//
// Normalization: contact elements are scaled so that U_{0000} = 1, i.e. the
// raw delta-function integral times 2 pi. Coulomb elements are the physical
// 1/|z1 - z2| integrals in these orbitals, so U_{0000} = sqrt(pi / 2).

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rotent/errors.hpp"
#include "rotent/orbitals.hpp"
#include "rotent/special.hpp"

namespace rotent {

enum class Kernel { Contact, Coulomb };

inline std::string_view to_string(Kernel k) { return k == Kernel::Contact ? "contact" : "coulomb"; }

inline Kernel parse_kernel(std::string_view name) {
    if (name == "contact") return Kernel::Contact;
    if (name == "coulomb") return Kernel::Coulomb;
    throw ConfigError("interaction: expected 'contact' or 'coulomb', got '" + std::string(name) + "'");
}

/// Interaction type and signed strength U0 (positive = repulsive).
struct Interaction {
    Kernel kind = Kernel::Coulomb;
    double strength = 1.0;
};

/// Contact closed form (i+j)! / (2^{i+j} sqrt(i! j! k! l!)) when i+j = k+l.
inline double contact_element(int i, int j, int k, int l) {
    if (i + j != k + l || i < 0 || j < 0 || k < 0 || l < 0) return 0.0;
    const int s = i + j;
    if (s <= 30) {
        auto fact = [](int n) {
            double f = 1.0;
            for (int m = 2; m <= n; ++m) f *= m;
            return f;
        };
        return fact(s) / (std::ldexp(1.0, s) * std::sqrt(fact(i) * fact(j) * fact(k) * fact(l)));
    }
    return std::exp(log_factorial(s) - s * std::numbers::ln2 -
                    0.5 * (log_factorial(i) + log_factorial(j) + log_factorial(k) + log_factorial(l)));
}

enum class IndexSymmetry { Identity, HermitianConjugate };

struct CanonicalIndices {
    int i, j, k, l;
    IndexSymmetry symmetry;
};

/// Maps (i, j, k, l) to an equivalent tuple with i - l >= 0 using
/// U_{ijkl} = U_{lkji} (real elements).
inline CanonicalIndices canonicalize_indices(int i, int j, int k, int l) {
    if (i >= l) return {i, j, k, l, IndexSymmetry::Identity};
    return {l, k, j, i, IndexSymmetry::HermitianConjugate};
}

namespace detail {

// ln of the coefficient sums A^t_{rs} (with_linear = false) and B^t_{rs}.
inline double log_coulomb_sum(int r, int s, int t, bool with_linear) {
    double acc = -INFINITY;
    for (int m = 0; m <= r; ++m) {
        double term = log_factorial(r) - log_factorial(m) - log_factorial(r - m) + log_gamma_half(2 * m + 1) +
                      log_gamma_half(2 * (m + t) + 1) - log_factorial(m + t) - log_gamma_half(2 * (m + s + t) + 3);
        if (with_linear) term += std::log(2.0 * m + t + 0.5);
        acc = log_add(acc, term);
    }
    return acc;
}

} // namespace detail

/// The A/B-sum closed form for Coulomb elements exactly as tabulated in the
/// literature; it is proportional to the element in our orbital convention.
inline double coulomb_element_raw(int i, int j, int k, int l) {
    if (i + j != k + l || i < 0 || j < 0 || k < 0 || l < 0) return 0.0;
    const auto c = canonicalize_indices(i, j, k, l);
    const int t = c.i - c.l;
    const double prefix = 0.5 * (log_factorial(c.i) + log_factorial(c.k) - log_factorial(c.j) - log_factorial(c.l)) +
                          log_gamma_half(2 * (c.i + c.j) + 3) - (c.i + c.j) * std::numbers::ln2;
    const double first = detail::log_coulomb_sum(c.l, c.j, t, false) + detail::log_coulomb_sum(c.j, c.l, t, true);
    const double second = detail::log_coulomb_sum(c.j, c.l, t, false) + detail::log_coulomb_sum(c.l, c.j, t, true);
    return std::exp(prefix + log_add(first, second));
}

/// Ratio between the tabulated closed form and the 1/|z1-z2| integral in the
/// phi_l convention. Fixed against quadrature_element (see tests); equals
/// 2 sqrt(2) pi to machine precision.
inline constexpr double coulomb_convention_ratio = 2.0 * std::numbers::sqrt2 * std::numbers::pi;

inline double coulomb_element(int i, int j, int k, int l) {
    return coulomb_element_raw(i, j, k, l) / coulomb_convention_ratio;
}

inline double closed_form_element(Kernel kind, int i, int j, int k, int l) {
    return kind == Kernel::Contact ? contact_element(i, j, k, l) : coulomb_element(i, j, k, l);
}

// ---------------------------------------------------------------------------
// Quadrature oracle
// ---------------------------------------------------------------------------

struct QuadratureOptions {
    int nodes = 0;            ///< Gauss-Laguerre nodes; 0 picks enough for exactness
    double tolerance = 1e-8;  ///< relative error-estimate ceiling
};

struct QuadratureResult {
    double raw = 0.0;            ///< the integral itself
    double value = 0.0;          ///< raw times the kernel's convention factor
    double error_estimate = 0.0; ///< |fine - coarse| difference
};

namespace detail {

// Coefficients of z1^a z2^b in centre/relative monomials Z^p w^q,
// z1 = (Z + w)/sqrt2, z2 = (Z - w)/sqrt2; indexed by q (p = a + b - q).
inline std::vector<double> relative_expansion(int a, int b) {
    auto binom = [](int n, int m) { return std::exp(log_factorial(n) - log_factorial(m) - log_factorial(n - m)); };
    std::vector<double> coeff(static_cast<std::size_t>(a + b) + 1, 0.0);
    for (int u = 0; u <= a; ++u)
        for (int v = 0; v <= b; ++v)
            coeff[static_cast<std::size_t>(u + v)] += std::round(binom(a, u)) * std::round(binom(b, v)) * ((v & 1) ? -1.0 : 1.0);
    const double norm = std::pow(2.0, -0.5 * (a + b));
    for (auto& c : coeff) c *= norm;
    return coeff;
}

inline double coulomb_relative_quadrature(int i, int j, int k, int l, int nodes) {
    const GaussLaguerre centre(nodes, 0.0);
    const GaussLaguerre relative(nodes, -0.5);
    const auto bra = relative_expansion(i, j);
    const auto ket = relative_expansion(l, k);
    const int total = i + j;
    double acc = 0.0;
    for (int q = 0; q <= total; ++q) {
        const int p = total - q;
        const double c = bra[static_cast<std::size_t>(q)] * ket[static_cast<std::size_t>(q)];
        if (c == 0.0) continue;
        // int |Z|^{2p} e^{-|Z|^2} d^2Z and int |w|^{2q} e^{-|w|^2} / (sqrt2 |w|) d^2w
        const double centre_part = std::numbers::pi * centre.integrate([p](double t) { return std::pow(t, p); });
        const double relative_part =
            std::numbers::pi / std::numbers::sqrt2 * relative.integrate([q](double t) { return std::pow(t, q); });
        acc += c * centre_part * relative_part;
    }
    const double norm = std::numbers::pi * std::numbers::pi *
                        std::exp(0.5 * (log_factorial(i) + log_factorial(j) + log_factorial(k) + log_factorial(l)));
    return acc / norm;
}

inline double contact_analytic_quadrature(int i, int j, int k, int l, int nodes) {
    // 2 pi int r R_i R_j R_k R_l dr with t = 2 r^2, Gaussian weight e^{-t} factored out.
    const GaussLaguerre rule(nodes, 0.0);
    return 2.0 * std::numbers::pi * 0.25 * rule.integrate([&](double t) {
               const double r = std::sqrt(0.5 * t);
               return analytic_radial(i, r) * analytic_radial(j, r) * analytic_radial(k, r) * analytic_radial(l, r) *
                      std::exp(t);
           });
}

} // namespace detail

/// Direct numerical evaluation of U_{ijkl}. Angular momentum conservation is
/// enforced analytically (the angular integral). With `orbitals` the numeric
/// radial profiles are integrated on their grid (contact kernel only);
/// otherwise the analytic LLL orbitals are used.
inline QuadratureResult quadrature_element(int i, int j, int k, int l, Kernel kernel, const OrbitalSet* orbitals = nullptr,
                                           QuadratureOptions opts = {}) {
    QuadratureResult res;
    if (i + j != k + l) return res;
    const double factor = kernel == Kernel::Contact ? 2.0 * std::numbers::pi : 1.0;
    if (orbitals) {
        if (kernel != Kernel::Contact)
            throw ConfigError("interaction: quadrature with numeric orbitals supports the contact kernel only");
        for (int idx : {i, j, k, l})
            if (idx > orbitals->l_max()) throw std::out_of_range("orbital index beyond the solved orbital set");
        const auto& g = orbitals->grid();
        const auto& ri = orbitals->orbital(i).radial;
        const auto& rj = orbitals->orbital(j).radial;
        const auto& rk = orbitals->orbital(k).radial;
        const auto& rl = orbitals->orbital(l).radial;
        double fine = 0.0, coarse = 0.0;
        for (std::size_t m = 0; m < g.size(); ++m) {
            const double f = ri[m] * rj[m] * rk[m] * rl[m];
            fine += g.weight(m) * f;
            coarse += g.coarse_weight(m) * f;
        }
        res.raw = 2.0 * std::numbers::pi * fine;
        res.error_estimate = 2.0 * std::numbers::pi * std::abs(fine - coarse);
    } else {
        const int n = opts.nodes > 0 ? opts.nodes : (i + j) / 2 + 4;
        auto eval = [&](int nodes) {
            return kernel == Kernel::Contact ? detail::contact_analytic_quadrature(i, j, k, l, nodes)
                                             : detail::coulomb_relative_quadrature(i, j, k, l, nodes);
        };
        res.raw = eval(2 * n);
        res.error_estimate = std::abs(res.raw - eval(n));
    }
    res.value = res.raw * factor;
    res.error_estimate *= factor;
    if (res.error_estimate > opts.tolerance * std::max(std::abs(res.value), 1e-300))
        throw NumericalError("quadrature for U(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                             "," + std::to_string(l) + ") unconverged: error estimate " +
                             std::to_string(res.error_estimate));
    return res;
}

// ---------------------------------------------------------------------------
// Element table
// ---------------------------------------------------------------------------

/// Dense table of U_{ijkl} for orbitals 0..l_max, filled at construction and
/// read-only afterwards.
class ElementTable {
public:
    /// Closed-form contact or Coulomb elements.
    static ElementTable closed_form(Kernel kind, int l_max) {
        ElementTable t(kind, l_max);
        t.scale_ = kind == Kernel::Contact ? 1.0 : 1.0 / coulomb_convention_ratio;
        t.fill([kind](int i, int j, int k, int l) { return closed_form_element(kind, i, j, k, l); });
        return t;
    }

    /// Contact elements integrated over numerically solved orbitals.
    static ElementTable numeric_contact(const OrbitalSet& orbitals, int l_max) {
        if (l_max > orbitals.l_max()) throw ConfigError("l_max: exceeds the solved orbital set");
        ElementTable t(Kernel::Contact, l_max);
        t.scale_ = 2.0 * std::numbers::pi;
        const auto& g = orbitals.grid();
        // Fully symmetric in the four indices: integrate sorted quadruples once.
        std::vector<double> cache(t.values_.size(), NAN);
        t.fill([&](int i, int j, int k, int l) {
            std::array<int, 4> q{i, j, k, l};
            std::sort(q.begin(), q.end());
            const std::size_t key = t.slot(q[0], q[3], q[1]);
            if (q[0] + q[3] == q[1] + q[2] && !std::isnan(cache[key])) return cache[key];
            const auto& a = orbitals.orbital(q[0]).radial;
            const auto& b = orbitals.orbital(q[1]).radial;
            const auto& c = orbitals.orbital(q[2]).radial;
            const auto& d = orbitals.orbital(q[3]).radial;
            double acc = 0.0;
            for (std::size_t m = 0; m < g.size(); ++m) acc += g.weight(m) * a[m] * b[m] * c[m] * d[m];
            const double v = 4.0 * std::numbers::pi * std::numbers::pi * acc;
            if (q[0] + q[3] == q[1] + q[2]) cache[key] = v;
            return v;
        });
        return t;
    }

    Kernel kind() const { return kind_; }
    int l_max() const { return l_max_; }
    /// Multiplier applied to the underlying integral (contact: 2 pi; Coulomb
    /// closed form: 1 / coulomb_convention_ratio relative to the tabulated sum).
    double scale() const { return scale_; }

    double operator()(int i, int j, int k, int l) const {
        if (i + j != k + l) return 0.0;
        if (i < 0 || j < 0 || k < 0 || l < 0 || i > l_max_ || j > l_max_ || k > l_max_ || l > l_max_)
            throw std::out_of_range("element table covers orbitals 0.." + std::to_string(l_max_));
        return values_[slot(i, j, k)];
    }

    /// CSV dump: i,j,k,l,value with 17 significant digits, conserving tuples only.
    void write_csv(std::ostream& out) const {
        out << "i,j,k,l,value\n";
        char buf[64];
        for (int i = 0; i <= l_max_; ++i)
            for (int j = 0; j <= l_max_; ++j)
                for (int k = 0; k <= l_max_; ++k) {
                    const int l = i + j - k;
                    if (l < 0 || l > l_max_) continue;
                    std::snprintf(buf, sizeof buf, "%.17g", values_[slot(i, j, k)]);
                    out << i << ',' << j << ',' << k << ',' << l << ',' << buf << '\n';
                }
    }

private:
    ElementTable(Kernel kind, int l_max) : kind_(kind), l_max_(l_max) {
        if (l_max < 0) throw ConfigError("l_max: must be >= 0");
        const auto n = static_cast<std::size_t>(l_max) + 1;
        values_.assign(n * n * n, 0.0);
    }

    std::size_t slot(int i, int j, int k) const {
        const auto n = static_cast<std::size_t>(l_max_) + 1;
        return (static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)) * n + static_cast<std::size_t>(k);
    }

    template <typename F>
    void fill(F&& f) {
        for (int i = 0; i <= l_max_; ++i)
            for (int j = 0; j <= l_max_; ++j)
                for (int k = 0; k <= l_max_; ++k) {
                    const int l = i + j - k;
                    if (l < 0 || l > l_max_) continue;
                    values_[slot(i, j, k)] = f(i, j, k, l);
                }
    }

    Kernel kind_;
    int l_max_;
    double scale_ = 1.0;
    std::vector<double> values_;
};

} // namespace rotent
