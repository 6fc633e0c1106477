#pragma once

// Unit-sphere areas and surface integrals. Zonal integrands reduce to a single
// polar integral against sin^{n-2}; everything else goes through Monte Carlo.

#include <cmath>
#include <numbers>

#include "fdeq/mc.hpp"
#include "fdeq/quadrature.hpp"
#include "fdeq/rng.hpp"
#include "fdeq/vec.hpp"

namespace fdeq {

// |S^m|, the area of the unit m-sphere in R^{m+1}; |S^0| = 2 by convention.
inline double sphere_measure(int m) {
    if (m < 0) throw InvalidDimension("sphere_measure: order must be >= 0");
    const double mp1 = 0.5 * (m + 1);
    return 2.0 * std::pow(std::numbers::pi, mp1) / std::tgamma(mp1);
}

// |S^{n-1}| for ambient dimension n >= 2, i.e. 2 pi^{n/2} / Gamma(n/2).
inline double sphere_area(int n) {
    require_dimension(n);
    return sphere_measure(n - 1);
}

// int_0^{pi/2} sin^m(t) dt in closed form.
inline double half_sin_power_integral(int m) {
    if (m < 0) throw DomainError("half_sin_power_integral: power must be >= 0");
    const double num = std::tgamma(0.5 * (m + 1));
    const double den = std::tgamma(0.5 * m + 1.0);
    return 0.5 * std::sqrt(std::numbers::pi) * num / den;
}

// Surface integral over S^{n-1} of a zonal integrand g(<omega, sigma>) given as
// its cosine profile: |S^{n-2}| int_0^pi sin^{n-2}(t) g(cos t) dt.
template <class G>
double sphere_zonal_integral(G&& g, int n, const QuadratureSpec& spec = {}) {
    require_dimension(n);
    const double ring = sphere_measure(n - 2);
    const int m = n - 2;
    return ring * integrate_1d(
                      [&](double theta) { return std::pow(std::sin(theta), m) * g(std::cos(theta)); },
                      0.0, std::numbers::pi, spec);
}

// Surface integral of a general integrand by Monte Carlo over uniform directions.
template <class G>
McEstimate sphere_integral_mc(G&& g, int n, const McConfig& mc) {
    require_dimension(n);
    const double area = sphere_area(n);
    auto est = mc_estimate_scalar(mc, [&](SampleStream& s) {
        Vec sigma(static_cast<std::size_t>(n));
        s.fill_direction(sigma);
        return g(sigma);
    });
    return {area * est.mean, area * est.std_error};
}

} // namespace fdeq
