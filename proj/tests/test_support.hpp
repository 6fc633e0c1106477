#pragma once

#include <cmath>
#include <vector>

#include "fdeq/density.hpp"
#include "fdeq/rng.hpp"

namespace test_support {

inline bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

inline bool close_abs(double a, double b, double abs) { return std::abs(a - b) <= abs; }

// Midpoint Riemann sum, the independent quadrature oracle.
template <class F>
double riemann_midpoint(F&& f, double a, double b, int slices) {
    const double h = (b - a) / slices;
    double sum = 0.0;
    for (int i = 0; i < slices; ++i) sum += f(a + (i + 0.5) * h);
    return sum * h;
}

// Random admissible radial grid density: values in [0,1], compact support.
inline fdeq::RadialGridDensity random_grid_density(std::uint64_t seed, std::uint64_t index, int n,
                                                   double r_max = 1.5, int nodes = 24) {
    fdeq::SampleStream s(seed, index);
    std::vector<double> radii, values;
    radii.reserve(nodes);
    values.reserve(nodes);
    double r = 0.0;
    for (int i = 0; i < nodes; ++i) {
        radii.push_back(r);
        values.push_back(s.next_unit());
        r += s.next_unit() * (r_max / nodes) + 1e-3;
    }
    values.back() = 0.0;
    return fdeq::make_radial_grid(std::move(radii), std::move(values), {}, n);
}

inline fdeq::Vec random_point(fdeq::SampleStream& s, int n, double scale) {
    fdeq::Vec v(static_cast<std::size_t>(n));
    for (double& x : v) x = scale * s.next_normal();
    return v;
}

} // namespace test_support
