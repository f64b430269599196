#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace rotent {

/// ln n!
inline double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial of negative argument");
    static const std::vector<double> table = [] {
        std::vector<double> t(512);
        t[0] = 0.0;
        for (std::size_t k = 1; k < t.size(); ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
        return t;
    }();
    if (static_cast<std::size_t>(n) < table.size()) return table[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

/// ln Gamma(x) for the half-integer x = twice_x / 2 (twice_x odd and positive),
/// by upward recurrence from Gamma(1/2) = sqrt(pi).
inline double log_gamma_half(int twice_x) {
    if (twice_x <= 0 || twice_x % 2 == 0) throw std::domain_error("log_gamma_half expects an odd positive integer 2x");
    static const std::vector<double> table = [] {
        std::vector<double> t(1024); // t[n] = ln Gamma(n + 1/2)
        t[0] = 0.5 * std::log(std::numbers::pi);
        for (std::size_t n = 1; n < t.size(); ++n) t[n] = t[n - 1] + std::log(static_cast<double>(n) - 0.5);
        return t;
    }();
    const auto n = static_cast<std::size_t>(twice_x / 2);
    if (n < table.size()) return table[n];
    double acc = table.back();
    for (std::size_t m = table.size(); m <= n; ++m) acc += std::log(static_cast<double>(m) - 0.5);
    return acc;
}

/// ln(e^a + e^b)
inline double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -INFINITY) return a;
    return a + std::log1p(std::exp(b - a));
}

/// Generalized Gauss-Laguerre rule for int_0^inf t^alpha e^{-t} f(t) dt,
/// nodes and weights by Golub-Welsch.
struct GaussLaguerre {
    std::vector<double> nodes;
    std::vector<double> weights;

    GaussLaguerre(int n, double alpha) {
        if (n < 1) throw std::invalid_argument("Gauss-Laguerre rule needs at least one node");
        Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
        for (int m = 0; m < n; ++m) diag[m] = 2.0 * m + alpha + 1.0;
        for (int m = 1; m < n; ++m) sub[m - 1] = std::sqrt(m * (m + alpha));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const double mu0 = std::tgamma(alpha + 1.0);
        nodes.resize(static_cast<std::size_t>(n));
        weights.resize(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) {
            nodes[static_cast<std::size_t>(m)] = es.eigenvalues()[m];
            const double v0 = es.eigenvectors()(0, m);
            weights[static_cast<std::size_t>(m)] = mu0 * v0 * v0;
        }
    }

    template <typename F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t m = 0; m < nodes.size(); ++m) acc += weights[m] * f(nodes[m]);
        return acc;
    }
};

} // namespace rotent
