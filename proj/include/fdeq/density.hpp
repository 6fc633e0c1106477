#pragma once

// Admissible velocity densities: pointwise values in [0,1], finite mass and
// second moment. All representations are radial about their barycenter, so the
// moment and entropy integrals reduce to one radial quadrature.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "fdeq/fermi.hpp"
#include "fdeq/quadrature.hpp"
#include "fdeq/sphere.hpp"
#include "fdeq/vec.hpp"

namespace fdeq {

// F_{a,b}(v) = a e^{-b|v-v0|^2} / (1 + a e^{-b|v-v0|^2}), strictly inside (0,1).
struct FermiDiracDensity {
    double a = 1.0;
    double b = 1.0;
    Vec center;
    int dim = 2;
};

// Indicator of the closed ball |v - v0| <= R.
struct BallDensity {
    double radius = 1.0;
    Vec center;
    int dim = 2;
};

// Indicator of eps <= |v| <= 1, centered at the origin.
struct AnnulusDensity {
    double inner = 0.5;
    int dim = 2;
};

// Radial profile on an increasing grid, linearly interpolated, compactly
// supported (last node value must be 0).
struct RadialGridDensity {
    std::vector<double> radii;
    std::vector<double> values;
    Vec center;
    int dim = 2;
};

using Density = std::variant<FermiDiracDensity, BallDensity, AnnulusDensity, RadialGridDensity>;

inline FermiDiracDensity make_fermi_dirac(double a, double b, Vec center, int n) {
    require_dimension(n);
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("make_fermi_dirac: a, b must be > 0");
    if (center.empty()) center = zeros(n);
    if (static_cast<int>(center.size()) != n)
        throw DimensionMismatch("make_fermi_dirac: center has wrong dimension");
    return {a, b, std::move(center), n};
}

inline BallDensity make_ball(double radius, Vec center, int n) {
    require_dimension(n);
    if (!(radius > 0.0)) throw DomainError("make_ball: radius must be > 0");
    if (center.empty()) center = zeros(n);
    if (static_cast<int>(center.size()) != n)
        throw DimensionMismatch("make_ball: center has wrong dimension");
    return {radius, std::move(center), n};
}

inline AnnulusDensity make_annulus(double inner, int n) {
    require_dimension(n);
    if (!(inner > 0.0) || !(inner < 1.0)) throw DomainError("make_annulus: inner radius must be in (0,1)");
    return {inner, n};
}

inline RadialGridDensity make_radial_grid(std::vector<double> radii, std::vector<double> values,
                                          Vec center, int n) {
    require_dimension(n);
    if (radii.size() != values.size() || radii.size() < 2)
        throw DomainError("make_radial_grid: need matching radii/values with >= 2 nodes");
    if (!(radii.front() >= 0.0)) throw DomainError("make_radial_grid: radii must be >= 0");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw DomainError("make_radial_grid: radii must be increasing");
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("make_radial_grid: values must lie in [0,1]");
    if (values.back() != 0.0)
        throw DomainError("make_radial_grid: last value must be 0 (compact support)");
    if (center.empty()) center = zeros(n);
    if (static_cast<int>(center.size()) != n)
        throw DimensionMismatch("make_radial_grid: center has wrong dimension");
    return {std::move(radii), std::move(values), std::move(center), n};
}

inline int dimension(const Density& f) {
    return std::visit([](const auto& d) { return d.dim; }, f);
}

inline Vec density_center(const Density& f) {
    if (const auto* ann = std::get_if<AnnulusDensity>(&f)) return zeros(ann->dim);
    return std::visit(
        [](const auto& d) -> Vec {
            if constexpr (requires { d.center; })
                return d.center;
            else
                return {};
        },
        f);
}

// Exact radial profile about the barycenter.
inline double radial_value(const Density& f, double r) {
    if (!(r >= 0.0)) throw DomainError("radial_value: r must be >= 0");
    return std::visit(
        [r](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, FermiDiracDensity>) {
                return detail::logistic_complement(d.b * r * r - std::log(d.a));
            } else if constexpr (std::is_same_v<T, BallDensity>) {
                return r <= d.radius ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, AnnulusDensity>) {
                return (r >= d.inner && r <= 1.0) ? 1.0 : 0.0;
            } else {
                const auto& radii = d.radii;
                const auto& vals = d.values;
                if (r <= radii.front()) return vals.front();
                if (r >= radii.back()) return 0.0;
                const auto it = std::upper_bound(radii.begin(), radii.end(), r);
                const std::size_t i = static_cast<std::size_t>(it - radii.begin());
                const double w = (r - radii[i - 1]) / (radii[i] - radii[i - 1]);
                return vals[i - 1] + w * (vals[i] - vals[i - 1]);
            }
        },
        f);
}

inline double evaluate(const Density& f, std::span<const double> v) {
    if (static_cast<int>(v.size()) != dimension(f))
        throw DimensionMismatch("evaluate: point has wrong dimension");
    const Vec c = density_center(f);
    return radial_value(f, distance(v, c));
}

// Spherical average about the barycenter, computed as the zonal surface
// average of pointwise evaluations. Coincides with radial_value for every
// density type here; kept as the quadrature route for cross-checks.
inline double radial_average(const Density& f, double r, const QuadratureSpec& spec = {}) {
    if (!(r >= 0.0)) throw DomainError("radial_average: r must be >= 0");
    const int n = dimension(f);
    const Vec c = density_center(f);
    Vec point(c.size());
    auto g = [&](double cos_theta) {
        const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
        for (std::size_t i = 0; i < point.size(); ++i) point[i] = c[i];
        point[0] += r * cos_theta;
        point[1] += r * sin_theta;
        return evaluate(f, point);
    };
    return sphere_zonal_integral(g, n, spec) / sphere_area(n);
}

// Radius beyond which the profile is identically zero, or +inf for the
// Fermi-Dirac family.
inline double support_radius(const Density& f) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, FermiDiracDensity>)
                return std::numeric_limits<double>::infinity();
            else if constexpr (std::is_same_v<T, BallDensity>)
                return d.radius;
            else if constexpr (std::is_same_v<T, AnnulusDensity>)
                return 1.0;
            else
                return d.radii.back();
        },
        f);
}

struct Moments {
    double m0 = 0.0; // mass
    double m2 = 0.0; // centered second moment
    Vec center;      // barycenter
    int dim = 2;

    double ratio() const { return m2 / std::pow(m0, (dim + 2.0) / dim); }
};

namespace detail {

template <class Profile>
double radial_moment_integral(Profile&& profile, int power, double r_support,
                              const QuadratureSpec& spec, double fd_decay) {
    auto integrand = [&](double r) { return std::pow(r, power) * profile(r); };
    if (std::isinf(r_support)) return integrate_semi_infinite(integrand, spec, fd_decay);
    return integrate_1d(integrand, 0.0, r_support, spec);
}

} // namespace detail

inline Moments compute_moments(const Density& f, const QuadratureSpec& spec = {}) {
    const int n = dimension(f);
    const double area = sphere_area(n);
    const double r_sup = support_radius(f);
    const double decay = std::holds_alternative<FermiDiracDensity>(f)
                             ? std::get<FermiDiracDensity>(f).b
                             : 1.0;
    auto profile = [&](double r) { return radial_value(f, r); };
    const double m0 = area * detail::radial_moment_integral(profile, n - 1, r_sup, spec, decay);
    if (!(m0 > spec.abs_tol)) throw ZeroMass("compute_moments: density has (numerically) zero mass");
    const double m2 = area * detail::radial_moment_integral(profile, n + 1, r_sup, spec, decay);
    return {m0, m2, density_center(f), n};
}

namespace detail {

//  -(1-y)log(1-y) - y log y, with the y log y = 0 convention at y in {0,1}
inline double entropy_density(double y) {
    if (!(y > 0.0) || !(y < 1.0)) return 0.0;
    const double s = -(1.0 - y) * std::log1p(-y) - y * std::log(y);
    return s > 0.0 ? s : 0.0;
}

} // namespace detail

inline double entropy(const Density& f, const QuadratureSpec& spec = {}) {
    const int n = dimension(f);
    const double r_sup = support_radius(f);
    const double decay = std::holds_alternative<FermiDiracDensity>(f)
                             ? std::get<FermiDiracDensity>(f).b
                             : 1.0;
    auto profile = [&](double r) { return detail::entropy_density(radial_value(f, r)); };
    return sphere_area(n) * detail::radial_moment_integral(profile, n - 1, r_sup, spec, decay);
}

struct MomentInequalityResult {
    double lhs = 0.0; // (p int r^{p-1} phi)^{1/p}
    double rhs = 0.0; // (q int r^{q-1} phi)^{1/q}
    bool is_indicator_equality = false;
};

// Power-moment inequality for radial profiles phi in [0,1]: lhs <= rhs, with
// equality exactly when phi is the indicator of [0, R]. `tail_radius` must
// bound the region where phi is non-negligible.
template <class Profile>
MomentInequalityResult moment_inequality_check(Profile&& phi, double p, double q,
                                               double tail_radius, const QuadratureSpec& spec = {},
                                               double eq_tol = 1e-8) {
    if (!(p > 0.0) || !(q > p)) throw DomainError("moment_inequality_check: need 0 < p < q");
    if (!(tail_radius > 0.0)) throw DomainError("moment_inequality_check: tail_radius must be > 0");

    auto moment = [&](double power) {
        return integrate_1d([&](double r) { return std::pow(r, power - 1.0) * phi(r); }, 0.0,
                            tail_radius, spec);
    };
    const double mq = q * moment(q);
    if (!(mq > 0.0) || !std::isfinite(mq))
        throw DegenerateProfile("moment_inequality_check: q-moment is zero or not finite");
    const double mp = p * moment(p);

    MomentInequalityResult res;
    res.lhs = std::pow(mp, 1.0 / p);
    res.rhs = std::pow(mq, 1.0 / q);
    res.is_indicator_equality = std::abs(res.lhs - res.rhs) <= eq_tol * std::max(res.lhs, res.rhs);
    return res;
}

// Smallest radius enclosing the given mass fraction about the barycenter.
inline double mass_radius(const Density& f, double fraction, const QuadratureSpec& spec = {}) {
    if (!(fraction > 0.0) || !(fraction < 1.0))
        throw DomainError("mass_radius: fraction must be in (0,1)");
    const int n = dimension(f);
    const Moments m = compute_moments(f, spec);
    const double target = fraction * m.m0 / sphere_area(n);
    auto cumulative = [&](double r) {
        return integrate_1d([&](double s) { return std::pow(s, n - 1) * radial_value(f, s); }, 0.0,
                            r, spec);
    };

    double hi = std::isinf(support_radius(f)) ? 1.0 : support_radius(f);
    int grow = 0;
    while (cumulative(hi) < target) {
        hi *= 2.0;
        if (++grow > 200) throw NonConvergence("mass_radius: failed to bracket the mass fraction");
    }
    double lo = 0.0;
    for (int it = 0; it < 80 && hi - lo > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cumulative(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// CSV input: two columns r,value (comma or whitespace separated); an optional
// non-numeric header line is skipped.
inline RadialGridDensity load_radial_grid_csv(std::istream& in, int n) {
    std::vector<double> radii, values;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        for (char& ch : line)
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        std::istringstream row(line);
        double r = 0.0, v = 0.0;
        if (!(row >> r >> v)) {
            if (first && !line.empty()) {
                first = false;
                continue; // header
            }
            if (line.find_first_not_of(" \r\n") == std::string::npos) continue;
            throw DomainError("load_radial_grid_csv: malformed row: " + line);
        }
        first = false;
        radii.push_back(r);
        values.push_back(v);
    }
    return make_radial_grid(std::move(radii), std::move(values), {}, n);
}

inline RadialGridDensity load_radial_grid_csv(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw DomainError("load_radial_grid_csv: cannot open " + path);
    return load_radial_grid_csv(in, n);
}

} // namespace fdeq
