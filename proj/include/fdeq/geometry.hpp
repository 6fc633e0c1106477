#pragma once

// Computational verifier for the mid-sphere characterization of Euclidean
// balls: for every boundary pair {x,y} of a compact K and every direction
// sigma, at least one of (x+y)/2 +- |x-y| sigma / 2 must lie in K. Balls
// satisfy this; the Reuleaux triangle (constant width!) does not. The measure
// version works through the fraction of directions whose post-collision pair
// meets a set E, bounded below by a lambda-constant; the annulus realizes
// lambda < 1 with a closed-form lower bound.
//
// The checker is a falsifier, not a prover: a pass is sampled evidence, a
// failure is a certificate (the witness triple is reported).

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "fdeq/collision.hpp"
#include "fdeq/density.hpp"
#include "fdeq/mc.hpp"
#include "fdeq/quadrature.hpp"
#include "fdeq/rng.hpp"
#include "fdeq/vec.hpp"

namespace fdeq {

struct BoundaryPoint {
    Vec point;
    Vec outward; // unit direction leaving the set at `point`
};

// Membership test plus boundary sampler for a compact set in R^n.
// exterior_distance may be a lower bound on dist(v, K); it only widens the
// membership slack, never the reported failures.
struct ShapeOracle {
    int dim = 2;
    double diameter_bound = 2.0;
    Vec bounding_center;
    double bounding_radius = 1.0;
    std::function<bool(const Vec&)> contains;
    std::function<BoundaryPoint(std::uint64_t, std::uint64_t)> boundary_sample; // (seed, index)
    std::function<double(const Vec&)> exterior_distance;
};

namespace detail {

inline void validate_shape_oracle(const ShapeOracle& shape, std::uint64_t seed, int checks) {
    const double delta = 1e-6 * shape.diameter_bound;
    const double slack = 1e-12 * shape.diameter_bound; // boundary samples carry rounding
    for (int i = 0; i < checks; ++i) {
        const BoundaryPoint bp = shape.boundary_sample(seed, static_cast<std::uint64_t>(i));
        const bool on_set =
            shape.contains(bp.point) ||
            (shape.exterior_distance && shape.exterior_distance(bp.point) <= slack);
        if (!on_set) throw DomainError("ShapeOracle: boundary sample not contained in the set");
        const Vec outside = axpy(bp.point, delta, bp.outward);
        if (shape.contains(outside))
            throw DomainError("ShapeOracle: point just outside the boundary reported inside");
    }
}

} // namespace detail

inline ShapeOracle make_ball_shape(double radius, Vec center, int n) {
    require_dimension(n);
    if (!(radius > 0.0)) throw DomainError("make_ball_shape: radius must be > 0");
    if (center.empty()) center = zeros(n);

    ShapeOracle shape;
    shape.dim = n;
    shape.diameter_bound = 2.0 * radius;
    shape.bounding_center = center;
    shape.bounding_radius = radius;
    shape.contains = [center, radius](const Vec& v) { return distance(v, center) <= radius; };
    shape.exterior_distance = [center, radius](const Vec& v) {
        return std::max(0.0, distance(v, center) - radius);
    };
    shape.boundary_sample = [center, radius, n](std::uint64_t seed, std::uint64_t index) {
        SampleStream s(seed ^ 0x5b5e0a5ce17u, index);
        BoundaryPoint bp;
        bp.outward = s.direction(n);
        bp.point = axpy(center, radius, bp.outward);
        return bp;
    };
    detail::validate_shape_oracle(shape, 17, 8);
    return shape;
}

inline ShapeOracle make_annulus_shape(double inner, int n) {
    require_dimension(n);
    if (!(inner > 0.0) || !(inner < 1.0))
        throw DomainError("make_annulus_shape: inner radius must be in (0,1)");

    ShapeOracle shape;
    shape.dim = n;
    shape.diameter_bound = 2.0;
    shape.bounding_center = zeros(n);
    shape.bounding_radius = 1.0;
    shape.contains = [inner](const Vec& v) {
        const double r = norm(v);
        return r >= inner && r <= 1.0;
    };
    shape.exterior_distance = [inner](const Vec& v) {
        const double r = norm(v);
        if (r < inner) return inner - r;
        if (r > 1.0) return r - 1.0;
        return 0.0;
    };
    // boundary = outer and inner spheres, weighted by their surface measures
    const double outer_weight = 1.0 / (1.0 + std::pow(inner, n - 1));
    shape.boundary_sample = [inner, n, outer_weight](std::uint64_t seed, std::uint64_t index) {
        SampleStream s(seed ^ 0x7a11u, index);
        const bool outer = s.next_unit() <= outer_weight;
        BoundaryPoint bp;
        bp.outward = s.direction(n);
        if (outer) {
            bp.point = bp.outward;
        } else {
            bp.point = scaled(bp.outward, inner);
            for (double& x : bp.outward) x = -x; // outward from the annulus = into the hole
        }
        return bp;
    };
    detail::validate_shape_oracle(shape, 17, 8);
    return shape;
}

// Unit-width Reuleaux triangle in R^2: intersection of three unit disks
// centered at the vertices of an equilateral triangle with unit side.
inline ShapeOracle make_reuleaux_shape() {
    const double h = std::sqrt(3.0) / 2.0;
    // vertices, centroid at the origin
    const std::vector<Vec> vertex = {
        {-0.5, -h / 3.0}, {0.5, -h / 3.0}, {0.0, 2.0 * h / 3.0}};

    ShapeOracle shape;
    shape.dim = 2;
    shape.diameter_bound = 1.0;
    shape.bounding_center = zeros(2);
    shape.bounding_radius = 2.0 * h / 3.0 + 1e-12;
    shape.contains = [vertex](const Vec& v) {
        for (const Vec& c : vertex)
            if (distance(v, c) > 1.0) return false;
        return true;
    };
    shape.exterior_distance = [vertex](const Vec& v) {
        // lower bound: worst single-disk deficit (exact except near corners)
        double d = 0.0;
        for (const Vec& c : vertex) d = std::max(d, distance(v, c) - 1.0);
        return d;
    };
    // each boundary arc is opposite its disk center; arc-length uniform sampling
    shape.boundary_sample = [vertex](std::uint64_t seed, std::uint64_t index) {
        SampleStream s(seed ^ 0x2e01eaULL, index);
        const double u = s.next_unit() * 3.0;
        const int arc = std::min(2, static_cast<int>(u));
        const Vec& c = vertex[static_cast<std::size_t>(arc)];
        const Vec& a = vertex[(arc + 1) % 3];
        const Vec& b = vertex[(arc + 2) % 3];
        // sweep from a to b on the unit circle about c
        const double phi_a = std::atan2(a[1] - c[1], a[0] - c[0]);
        double phi_b = std::atan2(b[1] - c[1], b[0] - c[0]);
        // the arc subtends pi/3; walk the short way
        double span = phi_b - phi_a;
        while (span > std::numbers::pi) span -= 2.0 * std::numbers::pi;
        while (span < -std::numbers::pi) span += 2.0 * std::numbers::pi;
        const double phi = phi_a + span * (u - arc);
        BoundaryPoint bp;
        bp.outward = {std::cos(phi), std::sin(phi)};
        bp.point = add(c, bp.outward);
        return bp;
    };
    detail::validate_shape_oracle(shape, 17, 16);
    return shape;
}

// ---------------------------------------------------------------------------
// Condition checker.

struct MidsphereWitness {
    Vec x, y, sigma;
    Vec candidate_plus, candidate_minus;
};

struct ConditionReport {
    std::uint64_t pairs_tested = 0;
    std::uint64_t failure_count = 0;
    std::vector<MidsphereWitness> failures; // first few witnesses
    bool pass = true;
};

inline bool midsphere_pair_meets(const ShapeOracle& shape, const Vec& x, const Vec& y,
                                 const Vec& sigma, double slack, Vec& cand_plus, Vec& cand_minus) {
    const double half_sep = 0.5 * distance(x, y);
    cand_plus.resize(x.size());
    cand_minus.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double mid = 0.5 * (x[i] + y[i]);
        cand_plus[i] = mid + half_sep * sigma[i];
        cand_minus[i] = mid - half_sep * sigma[i];
    }
    auto inside = [&](const Vec& p) {
        if (shape.contains(p)) return true;
        return shape.exterior_distance && shape.exterior_distance(p) <= slack;
    };
    return inside(cand_plus) || inside(cand_minus);
}

// Samples mc.samples random (x, y, sigma) triples with x, y on the boundary and
// sigma uniform; points within membership_slack of K count as inside (absorbs
// boundary-sampler rounding). Negative slack selects 1e-9 * diameter.
inline ConditionReport check_midsphere_condition(const ShapeOracle& shape, const McConfig& mc,
                                                 double membership_slack = -1.0,
                                                 std::size_t max_witnesses = 16) {
    mc.validate();
    const double slack =
        membership_slack >= 0.0 ? membership_slack : 1e-9 * shape.diameter_bound;

    ConditionReport report;
    report.pairs_tested = mc.samples;
    Vec cand_plus, cand_minus;
    for (std::uint64_t i = 0; i < mc.samples; ++i) {
        const BoundaryPoint bx = shape.boundary_sample(mc.seed, 2 * i);
        const BoundaryPoint by = shape.boundary_sample(mc.seed, 2 * i + 1);
        SampleStream s(mc.seed ^ 0xd1ec7u, i);
        const Vec sigma = s.direction(shape.dim);
        if (!midsphere_pair_meets(shape, bx.point, by.point, sigma, slack, cand_plus, cand_minus)) {
            ++report.failure_count;
            if (report.failures.size() < max_witnesses)
                report.failures.push_back({bx.point, by.point, sigma, cand_plus, cand_minus});
        }
    }
    report.pass = report.failure_count == 0;
    return report;
}

// Exact algebraic identity behind the necessity of the condition:
// |m + h sigma - x0|^2 + |m - h sigma - x0|^2 = |x-x0|^2 + |y-x0|^2 with
// m = (x+y)/2, h = |x-y|/2. Kept as a regression guard on the collision-map
// arithmetic; the residual is pure rounding noise.
inline double midsphere_identity_residual(const Vec& x, const Vec& y, const Vec& x0,
                                          const Vec& sigma) {
    require_same_dim(x, y, "midsphere_identity_residual");
    require_same_dim(x, x0, "midsphere_identity_residual");
    require_same_dim(x, sigma, "midsphere_identity_residual");
    const double h = 0.5 * distance(x, y);
    double lhs = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = 0.5 * (x[i] + y[i]) - x0[i];
        const double p = m + h * sigma[i];
        const double q = m - h * sigma[i];
        lhs += p * p + q * q;
    }
    const double rhs = squared_distance(x, x0) + squared_distance(y, x0);
    return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Measure version: sphere fractions and the lambda constant.

struct FractionEstimate {
    double fraction = 0.0;
    double std_error = 0.0;
};

// Fraction of directions sigma for which the post-collision pair of (v, v_*)
// meets E.
inline FractionEstimate sphere_fraction(const ShapeOracle& set, const Vec& v, const Vec& v_star,
                                        const McConfig& mc) {
    mc.validate();
    if (distance(v, v_star) == 0.0)
        throw DegeneratePair("sphere_fraction: v and v_* must differ");

    auto est = mc_estimate_scalar(mc, [&](SampleStream& s) -> double {
        thread_local Vec sigma, cp, cm;
        sigma.resize(v.size());
        s.fill_direction(sigma);
        return midsphere_pair_meets(set, v, v_star, sigma, 0.0, cp, cm) ? 1.0 : 0.0;
    });
    return {est.mean, est.std_error};
}

struct LambdaEstimate {
    double lambda_hat = 1.0;
    double std_error = 0.0;             // binomial error of the minimizing pair
    Vec worst_v, worst_v_star;
    std::uint64_t pairs = 0;
};

// Minimum sphere fraction over sampled pairs (v, v_*) in E x E: a
// downward-biased estimator of the essential infimum lambda.
inline LambdaEstimate lambda_estimate(const ShapeOracle& set, const McConfig& mc,
                                      std::uint64_t directions_per_pair = 4096) {
    mc.validate();
    if (directions_per_pair < 2)
        throw DomainError("lambda_estimate: need at least 2 directions per pair");

    LambdaEstimate out;
    out.pairs = mc.samples;
    out.lambda_hat = 2.0; // above any fraction

    auto draw_inside = [&](SampleStream& s, const Vec* avoid) {
        // rejection from the bounding ball; the per-index stream keeps this
        // deterministic regardless of sharding
        for (int tries = 0; tries < 100000; ++tries) {
            Vec p = s.ball_point(set.bounding_center, set.bounding_radius);
            if (set.contains(p) && (!avoid || distance(p, *avoid) > 0.0)) return p;
        }
        throw NonConvergence("lambda_estimate: rejection sampling failed to land in the set");
    };

    for (std::uint64_t i = 0; i < mc.samples; ++i) {
        SampleStream s(mc.seed ^ 0x1a3bdau, i);
        const Vec v = draw_inside(s, nullptr);
        const Vec vs = draw_inside(s, &v);
        McConfig dir_mc;
        dir_mc.seed = mc.seed ^ (0x9e3779b9u + i);
        dir_mc.samples = directions_per_pair;
        dir_mc.workers = mc.workers;
        const FractionEstimate fe = sphere_fraction(set, v, vs, dir_mc);
        if (fe.fraction < out.lambda_hat) {
            out.lambda_hat = fe.fraction;
            out.std_error = fe.std_error;
            out.worst_v = v;
            out.worst_v_star = vs;
        }
    }
    return out;
}

// Closed-form lower bound for the annulus {eps <= |x| <= 1}:
//   lambda >= int_0^{(1-eps^2)/(1+eps^2)} (1-t^2)^{(n-3)/2} dt
//           / int_0^1 (1-t^2)^{(n-3)/2} dt,
// evaluated with t = sin(u) to absorb the n = 2 endpoint singularity.
inline double annulus_lambda_lower_bound(double eps, int n, const QuadratureSpec& spec = {}) {
    require_dimension(n);
    if (!(eps > 0.0) || !(eps < 1.0))
        throw DomainError("annulus_lambda_lower_bound: eps must be in (0,1)");
    const double x = (1.0 - eps * eps) / (1.0 + eps * eps);
    const int m = n - 2;
    auto cospow = [m](double u) { return std::pow(std::cos(u), m); };
    const double num = integrate_1d(cospow, 0.0, std::asin(x), spec);
    const double den = integrate_1d(cospow, 0.0, 0.5 * std::numbers::pi, spec);
    return num / den;
}

// ---------------------------------------------------------------------------
// Two-route identity checks.

struct SidePair {
    double lhs = 0.0;
    double rhs = 0.0;
    double mc_std_error = 0.0; // of whichever side was estimated by Monte Carlo
};

// Change-of-variables identity for pair integrals of separable integrands
//   F(<n,sigma>, v_a, v_b) = alpha(<n,sigma>) * beta(v_a) * gamma(|v - v_b|):
// the left side is the direct (v_*, sigma) integral with v_a = v'_*, v_b = v_*;
// the right side is the reduced theta/radial quadrature. `beta` is a density
// (radial about its own center), `gamma` vanishes beyond gamma_reach.
template <class Alpha, class Gamma>
SidePair reduction_identity_check(Alpha&& alpha, const Density& beta, Gamma&& gamma,
                                  double gamma_reach, const Vec& v, const QuadratureSpec& spec,
                                  const McConfig& mc) {
    const int n = dimension(beta);
    if (static_cast<int>(v.size()) != n)
        throw DimensionMismatch("reduction_identity_check: bad point dimension");

    SidePair sides;

    // left: Monte Carlo over (v_*, sigma), evaluating beta at v'_*
    {
        const double area = sphere_area(n);
        const double ball_vol = area * std::pow(gamma_reach, n) / n;
        RadialEvaluator be(beta);
        auto est = mc_estimate_scalar(mc, [&](SampleStream& s) -> double {
            thread_local detail::CollisionScratch ws;
            ws.resize(v.size());
            ws.v_star = s.ball_point(v, gamma_reach);
            s.fill_direction(ws.sigma);
            const double sep = distance(v, ws.v_star);
            if (sep < 1e-300) return 0.0;
            double cos_dev = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i)
                cos_dev += (v[i] - ws.v_star[i]) * ws.sigma[i];
            cos_dev /= sep;
            post_collision(v, ws.v_star, ws.sigma, ws.v_prime, ws.v_star_prime);
            return ball_vol * area * alpha(cos_dev) * be(ws.v_star_prime) * gamma(sep);
        });
        sides.lhs = est.mean;
        sides.mc_std_error = est.std_error;
    }

    // right: 2^{n-1} |S^{n-2}| int_0^{pi/2} sin^{n-2}/cos^2 alpha(cos 2theta)
    //        int beta(v_*) gamma(|v - v_*| / cos theta) dv_* dtheta
    {
        const double front = std::pow(2.0, n - 1) * sphere_measure(n - 2);
        auto theta_integrand = [&](double theta) {
            const double ct = std::cos(theta);
            const double st = std::sin(theta);
            const double ratio = alpha(std::cos(2.0 * theta)) / (ct * ct);
            if (!std::isfinite(ratio)) return 0.0;
            const double conv = scaled_radial_convolution(beta, v, gamma, ct, gamma_reach, spec);
            return std::pow(st, n - 2) * ratio * conv;
        };
        sides.rhs = front * integrate_1d(theta_integrand, 0.0, 0.5 * std::numbers::pi,
                                         detail::relaxed(spec, 1e4));
    }
    return sides;
}

// Sphere-pair average bound: the normalized mass of f in B_r(v) dominates the
// double spherical average of f over mid-sphere points,
//   (1/r^n) int_{B_r(v)} f >= int int sqrt(1-<w,s>^2) / (2^{n+1} |S^{n-2}|)
//                             (f(v + r(w+s)/2) + f(v + r(w-s)/2)) ds dw.
inline SidePair ball_average_bound_check(const Density& f, const Vec& v, double r,
                                         const QuadratureSpec& spec, const McConfig& mc) {
    const int n = dimension(f);
    if (!(r > 0.0)) throw DomainError("ball_average_bound_check: r must be > 0");

    SidePair sides;

    const double lhs_mass = ball_mass(f, v, r, spec);
    sides.lhs = lhs_mass / std::pow(r, n);

    const double area = sphere_area(n);
    const double front = area * area / (std::pow(2.0, n + 1) * sphere_measure(n - 2));
    RadialEvaluator fe(f);
    auto est = mc_estimate_scalar(mc, [&](SampleStream& s) -> double {
        thread_local Vec w, sg, p1, p2;
        w.resize(v.size());
        sg.resize(v.size());
        p1.resize(v.size());
        p2.resize(v.size());
        s.fill_direction(w);
        s.fill_direction(sg);
        const double c = dot(w, sg);
        for (std::size_t i = 0; i < v.size(); ++i) {
            p1[i] = v[i] + 0.5 * r * (w[i] + sg[i]);
            p2[i] = v[i] + 0.5 * r * (w[i] - sg[i]);
        }
        return std::sqrt(std::max(0.0, 1.0 - c * c)) * (fe(p1) + fe(p2));
    });
    sides.rhs = front * est.mean;
    sides.mc_std_error = front * est.std_error;
    return sides;
}

} // namespace fdeq
