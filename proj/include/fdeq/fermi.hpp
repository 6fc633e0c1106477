#pragma once

// One-dimensional Fermi-type integrals and the moment-ratio function P whose
// strict monotonicity makes the (mass, energy) -> (a, b) inversion unique.
//
//   fermi_I(s,t)  = int_0^inf r^s / (1 + t e^{r^2}) dr
//   fermi_J(s,t)  = int_0^inf r^s e^{r^2} / (1 + t e^{r^2})^2 dr   ( = -d/dt I_s )
//   fermi_K(s,p)  = int_0^inf u^{s/2} / (1 + e^{p(u-1)}) du
//   fermi_P(t,n)  = I_{n+1}(t) / I_{n-1}(t)^{(n+2)/n}

#include <array>
#include <cmath>

#include "fdeq/quadrature.hpp"
#include "fdeq/sphere.hpp"
#include "fdeq/vec.hpp"

namespace fdeq {

namespace detail {

// 1 / (1 + e^x) without overflow on either side
inline double logistic_complement(double x) {
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

// e^x / (1 + e^x)^2 = 1 / ((1 + e^x)(1 + e^-x))
inline double logistic_peak(double x) {
    const double ax = std::abs(x);
    const double e = std::exp(-ax);
    const double d = 1.0 + e;
    return e / (d * d);
}

} // namespace detail

inline double fermi_I(double s, double t, const QuadratureSpec& spec = {}) {
    if (!(s >= 0.0)) throw DomainError("fermi_I: order s must be >= 0");
    if (!(t > 0.0)) throw DomainError("fermi_I: t must be > 0");
    const double log_t = std::log(t);
    auto integrand = [s, log_t](double r) {
        return std::pow(r, s) * detail::logistic_complement(r * r + log_t);
    };
    // integrand ~ r^s e^{-(r^2+log t)} for large r; the shoulder sits at sqrt(-log t)
    const double shoulder = log_t < 0.0 ? std::sqrt(-log_t) : 0.0;
    const double r0 = std::max(std::sqrt(39.0), shoulder + 7.0);
    return detail::integrate_with_tail(integrand, r0, spec);
}

inline double fermi_J(double s, double t, const QuadratureSpec& spec = {}) {
    if (!(s >= 0.0)) throw DomainError("fermi_J: order s must be >= 0");
    if (!(t > 0.0)) throw DomainError("fermi_J: t must be > 0");
    const double log_t = std::log(t);
    auto integrand = [s, t, log_t](double r) {
        return std::pow(r, s) / t * detail::logistic_peak(r * r + log_t);
    };
    const double shoulder = log_t < 0.0 ? std::sqrt(-log_t) : 0.0;
    const double r0 = std::max(std::sqrt(39.0), shoulder + 7.0);
    return detail::integrate_with_tail(integrand, r0, spec);
}

inline double fermi_K(double s, double rho, const QuadratureSpec& spec = {}) {
    if (!(s >= 0.0)) throw DomainError("fermi_K: order s must be >= 0");
    if (!(rho > 0.0)) throw DomainError("fermi_K: rho must be > 0");
    auto integrand = [s, rho](double u) {
        return std::pow(u, 0.5 * s) * detail::logistic_complement(rho * (u - 1.0));
    };
    const double u0 = 1.0 + 60.0 / rho;
    return detail::integrate_with_tail(integrand, u0, spec);
}

inline double fermi_P(double t, int n, const QuadratureSpec& spec = {}) {
    require_dimension(n);
    const double num = fermi_I(n + 1, t, spec);
    const double den = fermi_I(n - 1, t, spec);
    return num / std::pow(den, (n + 2.0) / n);
}

// c_n = n/(n+2) * (n/|S^{n-1}|)^{2/n}; admissible moments satisfy
// M2 / M0^{(n+2)/n} >= c_n with equality exactly for ball indicators.
inline double moment_ratio_threshold(int n) {
    require_dimension(n);
    return n / (n + 2.0) * std::pow(n / sphere_area(n), 2.0 / n);
}

// lim_{t->0+} P(t), by polynomial extrapolation in rho^-2 along t = e^-rho.
// Direct evaluation degenerates (the integrand approaches an indicator), while
// P(e^-rho) approaches the limit with an asymptotic series in rho^-2. The
// rho^-6 series coefficient grows with n; nodes starting at 20 keep the
// extrapolation residual below 2e-7 up to n = 6.
inline double fermi_P_small_t_limit(int n, const QuadratureSpec& spec = {}) {
    require_dimension(n);
    constexpr std::array<double, 3> rhos = {20.0, 40.0, 80.0};
    std::array<double, 3> h{}, p{};
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        h[i] = 1.0 / (rhos[i] * rhos[i]);
        p[i] = fermi_P(std::exp(-rhos[i]), n, spec);
    }
    // Neville tableau evaluated at h = 0
    for (std::size_t level = 1; level < p.size(); ++level)
        for (std::size_t i = p.size() - 1; i >= level; --i)
            p[i] = p[i] + h[i] * (p[i] - p[i - 1]) / (h[i - level] - h[i]);
    return p.back();
}

// Closed-form Fermi-Dirac radial moment: int F_{a,b}(v) |v-v0|^k dv over R^n
// equals |S^{n-1}| b^{-(n+k)/2} I_{n-1+k}(1/a).
inline double fermi_dirac_moment(int k, double a, double b, int n,
                                 const QuadratureSpec& spec = {}) {
    require_dimension(n);
    if (k < 0) throw DomainError("fermi_dirac_moment: k must be >= 0");
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("fermi_dirac_moment: a, b must be > 0");
    return sphere_area(n) * std::pow(b, -0.5 * (n + k)) * fermi_I(n - 1 + k, 1.0 / a, spec);
}

} // namespace fdeq
