#pragma once

// The binary collision map, the Pauli-blocked gain/loss functionals with the
// angular kernel b(t) = 1 - t^2, their reduced (quadrature) forms, the
// equilibrium residual, and the entropy-dissipation estimator.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "fdeq/density.hpp"
#include "fdeq/mc.hpp"
#include "fdeq/quadrature.hpp"
#include "fdeq/rng.hpp"
#include "fdeq/sphere.hpp"
#include "fdeq/vec.hpp"

namespace fdeq {

inline double angular_kernel(double t) { return 1.0 - t * t; }

// v' = (v+v*)/2 + |v-v*| sigma / 2,  v'* = (v+v*)/2 - |v-v*| sigma / 2.
// Conserves momentum and kinetic energy.
inline void post_collision(std::span<const double> v, std::span<const double> v_star,
                           std::span<const double> sigma, std::span<double> v_prime,
                           std::span<double> v_star_prime) {
    const double half_sep = 0.5 * distance(v, v_star);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mid = 0.5 * (v[i] + v_star[i]);
        v_prime[i] = mid + half_sep * sigma[i];
        v_star_prime[i] = mid - half_sep * sigma[i];
    }
}

inline std::pair<Vec, Vec> post_collision(const Vec& v, const Vec& v_star, const Vec& sigma) {
    require_same_dim(v, v_star, "post_collision");
    require_same_dim(v, sigma, "post_collision");
    Vec vp(v.size()), vsp(v.size());
    post_collision(v, v_star, sigma, vp, vsp);
    return {std::move(vp), std::move(vsp)};
}

// Radial density evaluation with a cached center (no per-call allocation).
struct RadialEvaluator {
    const Density* f;
    Vec center;

    explicit RadialEvaluator(const Density& d) : f(&d), center(density_center(d)) {}

    double operator()(std::span<const double> v) const {
        return radial_value(*f, distance(v, center));
    }
};

// Gaussian importance envelope for the v_* integration, matched to the support
// radius of the density.
struct GaussianEnvelope {
    Vec center;
    double scale = 1.0;
    double log_norm = 0.0; // log of (2 pi s^2)^{n/2}

    void sample(SampleStream& s, Vec& out) const {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = center[i] + scale * s.next_normal();
    }

    double pdf(std::span<const double> v) const {
        const double q = squared_distance(v, center);
        return std::exp(-0.5 * q / (scale * scale) - log_norm);
    }
};

inline GaussianEnvelope make_envelope(const Density& f, const QuadratureSpec& spec = {}) {
    GaussianEnvelope env;
    env.center = density_center(f);
    env.scale = mass_radius(f, 0.9999, spec);
    const int n = dimension(f);
    env.log_norm = 0.5 * n * std::log(2.0 * std::numbers::pi * env.scale * env.scale);
    return env;
}

namespace detail {

struct CollisionScratch {
    Vec v_star, sigma, v_prime, v_star_prime;
    void resize(std::size_t n) {
        v_star.resize(n);
        sigma.resize(n);
        v_prime.resize(n);
        v_star_prime.resize(n);
    }
};

struct GainLossTerm {
    double gain = 0.0;
    double loss = 0.0;
};

// One importance-sampled term of the gain and loss integrands at v. The weight
// includes |S^{n-1}| and the envelope density.
template <class Eval>
GainLossTerm gain_loss_term(const Eval& fe, std::span<const double> v, SampleStream& s,
                            const GaussianEnvelope& env, double area, CollisionScratch& ws) {
    env.sample(s, ws.v_star);
    s.fill_direction(ws.sigma);

    const double sep = distance(v, ws.v_star);
    if (sep < 1e-300) return {}; // measure-zero coincidence
    double cos_dev = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        cos_dev += (v[i] - ws.v_star[i]) * ws.sigma[i];
    cos_dev /= sep;
    const double b = angular_kernel(cos_dev);

    post_collision(v, ws.v_star, ws.sigma, ws.v_prime, ws.v_star_prime);

    const double f_star = fe(ws.v_star);
    const double f_p = fe(ws.v_prime);
    const double f_sp = fe(ws.v_star_prime);
    const double w = area * b / env.pdf(ws.v_star);

    return {w * f_p * f_sp * (1.0 - f_star), w * f_star * (1.0 - f_p) * (1.0 - f_sp)};
}

} // namespace detail

struct GainLossEstimate {
    McEstimate gain;
    McEstimate loss;
};

inline GainLossEstimate gain_loss_mc(const Density& f, const Vec& v, const McConfig& mc,
                                     const GaussianEnvelope& env) {
    const int n = dimension(f);
    if (static_cast<int>(v.size()) != n) throw DimensionMismatch("gain_loss_mc: bad point dimension");
    const double area = sphere_area(n);
    RadialEvaluator fe(f);

    auto batch = mc_estimate(mc, 2, [&](SampleStream& s, std::span<double> out) {
        thread_local detail::CollisionScratch ws;
        ws.resize(v.size());
        const auto t = detail::gain_loss_term(fe, v, s, env, area, ws);
        out[0] = t.gain;
        out[1] = t.loss;
    });
    return {batch[0], batch[1]};
}

// I_f(v): gain functional, nonnegative and bounded by C ||f||_L1.
inline McEstimate gain_functional(const Density& f, const Vec& v, const QuadratureSpec& spec,
                                  const McConfig& mc) {
    return gain_loss_mc(f, v, mc, make_envelope(f, spec)).gain;
}

// J_f(v): loss functional.
inline McEstimate loss_functional(const Density& f, const Vec& v, const QuadratureSpec& spec,
                                  const McConfig& mc) {
    return gain_loss_mc(f, v, mc, make_envelope(f, spec)).loss;
}

// C = (2^{n+2} + 2) |S^{n-2}| int_0^{pi/2} sin^n(theta) dtheta; both
// functionals are C-Lipschitz in f with respect to the L1 norm.
inline double lipschitz_constant(int n) {
    require_dimension(n);
    return (std::pow(2.0, n + 2) + 2.0) * sphere_measure(n - 2) * half_sin_power_integral(n);
}

// ||f - g||_L1 for two densities radial about a common center.
inline double l1_distance(const Density& f, const Density& g, const QuadratureSpec& spec = {}) {
    const int n = dimension(f);
    if (n != dimension(g)) throw DimensionMismatch("l1_distance: dimensions differ");
    const Vec cf = density_center(f);
    const Vec cg = density_center(g);
    if (distance(cf, cg) > 1e-12 * (1.0 + norm(cf)))
        throw DomainError("l1_distance: densities must share a center");

    auto integrand = [&](double r) {
        return std::pow(r, n - 1) * std::abs(radial_value(f, r) - radial_value(g, r));
    };
    const double rs = std::max(support_radius(f), support_radius(g));
    double integral = 0.0;
    if (std::isinf(rs)) {
        double decay = 1.0;
        if (const auto* fd = std::get_if<FermiDiracDensity>(&f)) decay = std::min(decay, fd->b);
        if (const auto* gd = std::get_if<FermiDiracDensity>(&g)) decay = std::min(decay, gd->b);
        integral = integrate_semi_infinite(integrand, spec, decay);
    } else {
        integral = integrate_1d(integrand, 0.0, rs, spec);
    }
    return sphere_area(n) * integral;
}

// ---------------------------------------------------------------------------
// Reduced (quadrature) forms of the pair integrals.

namespace detail {

// int_0^x sin^m(t) dt for integer m >= 0
inline double sin_power_primitive(int m, double x) {
    if (m == 0) return x;
    if (m == 1) return 1.0 - std::cos(x);
    const double s = std::sin(x), c = std::cos(x);
    return (-c * std::pow(s, m - 1) + (m - 1) * sin_power_primitive(m - 2, x)) / m;
}

inline double sin_power_integral_pi(int m) { return 2.0 * half_sin_power_integral(m); }

inline QuadratureSpec relaxed(const QuadratureSpec& spec, double factor) {
    QuadratureSpec s = spec;
    s.abs_tol *= factor;
    s.rel_tol = std::min(1e-4, s.rel_tol * factor);
    return s;
}

} // namespace detail

// Mass of f inside the closed ball of given radius about `at`. Radial symmetry
// reduces it to one radial quadrature against a closed-form wedge angle.
inline double ball_mass(const Density& f, const Vec& at, double radius,
                        const QuadratureSpec& spec = {}) {
    if (!(radius > 0.0)) throw DomainError("ball_mass: radius must be > 0");
    const int n = dimension(f);
    if (static_cast<int>(at.size()) != n) throw DimensionMismatch("ball_mass: bad point dimension");
    const Vec c = density_center(f);
    const double d = distance(at, c);
    const double rsup = support_radius(f);

    if (d < 1e-14 * (radius + 1.0)) {
        const double hi = std::min(radius, rsup);
        return sphere_area(n) *
               integrate_1d([&](double r) { return std::pow(r, n - 1) * radial_value(f, r); }, 0.0,
                            hi, spec);
    }

    const double full = detail::sin_power_integral_pi(n - 2);
    const double ring = sphere_measure(n - 2);
    auto shell = [&](double rho) { return std::pow(rho, n - 1) * radial_value(f, rho); };

    double total = 0.0;
    // shells entirely inside the ball
    const double full_hi = std::min(radius - d, rsup);
    if (full_hi > 0.0) total += full * integrate_1d(shell, 0.0, full_hi, spec);
    // partially covered shells: the wedge |at - v_*| <= radius has the closed
    // half-angle arccos((d^2 + rho^2 - radius^2) / (2 d rho))
    const double part_lo = std::max(0.0, std::abs(d - radius));
    const double part_hi = std::min(d + radius, rsup);
    if (part_hi > part_lo) {
        auto integrand = [&](double rho) {
            const double cstar = (d * d + rho * rho - radius * radius) / (2.0 * d * rho);
            if (cstar >= 1.0) return 0.0;
            const double w =
                cstar <= -1.0 ? full : detail::sin_power_primitive(n - 2, std::acos(cstar));
            return shell(rho) * w;
        };
        total += integrate_1d(integrand, part_lo, part_hi, spec);
    }
    return ring * total;
}

// int_{R^n} psi(|at - v_*| / scale) f(v_*) dv_* for radial f and a profile psi
// supported in [0, psi_reach]. Reduces to nested (rho, angle) quadrature.
template <class Psi>
double scaled_radial_convolution(const Density& f, const Vec& at, Psi&& psi, double scale,
                                 double psi_reach, const QuadratureSpec& spec = {}) {
    if (!(scale > 0.0)) throw DomainError("scaled_radial_convolution: scale must be > 0");
    if (!(psi_reach > 0.0)) throw DomainError("scaled_radial_convolution: psi_reach must be > 0");
    const int n = dimension(f);
    if (static_cast<int>(at.size()) != n)
        throw DimensionMismatch("scaled_radial_convolution: bad point dimension");
    const Vec c = density_center(f);
    const double d = distance(at, c);
    const double reach = scale * psi_reach;
    const double ring = sphere_measure(n - 2);

    const double rho_lo = std::max(0.0, d - reach);
    const double rho_hi = std::min(d + reach, support_radius(f));
    if (!(rho_hi > rho_lo)) return 0.0;

    if (d < 1e-14 * (reach + 1.0)) {
        const double full = detail::sin_power_integral_pi(n - 2);
        return ring * full *
               integrate_1d([&](double rho) { return std::pow(rho, n - 1) * radial_value(f, rho) *
                                                     psi(rho / scale); },
                            rho_lo, rho_hi, spec);
    }

    // the outer level must tolerate the inner level's quadrature noise
    auto integrand = [&](double rho) {
        const double fr = radial_value(f, rho);
        if (fr == 0.0) return 0.0;
        auto angular = [&](double phi) {
            const double dist2 = d * d + rho * rho - 2.0 * d * rho * std::cos(phi);
            const double dist = std::sqrt(std::max(0.0, dist2));
            return std::pow(std::sin(phi), n - 2) * psi(dist / scale);
        };
        return std::pow(rho, n - 1) * fr * integrate_1d(angular, 0.0, std::numbers::pi, spec);
    };
    return ring * integrate_1d(integrand, rho_lo, rho_hi, detail::relaxed(spec, 100.0));
}

// Reduced form of the gain-type pair integral with the fixed kernel:
//   int int b(|<n,sigma>|) Psi(|v-v_*|) f(v') dv_* dsigma
//     = 2^{n+1} |S^{n-2}| int_0^{pi/2} sin^n(theta)
//           int Psi(|v-v_*| / cos theta) f(v_*) dv_*  dtheta,
// using b(|cos 2theta|)/cos^2(theta) = 4 sin^2(theta).
template <class Psi>
double angular_reduction(Psi&& psi, double psi_reach, const Density& f, const Vec& v,
                         const QuadratureSpec& spec = {}) {
    const int n = dimension(f);
    const double front = std::pow(2.0, n + 1) * sphere_measure(n - 2);
    auto theta_integrand = [&](double theta) {
        const double ct = std::cos(theta);
        const double st = std::sin(theta);
        const double conv = scaled_radial_convolution(f, v, psi, ct, psi_reach, spec);
        return std::pow(st, n) * conv;
    };
    return front * integrate_1d(theta_integrand, 0.0, 0.5 * std::numbers::pi,
                                detail::relaxed(spec, 1e4));
}

// Same with Psi = indicator of [0, delta]; the inner integral is a ball mass.
inline double angular_reduction_indicator(double delta, const Density& f, const Vec& v,
                                          const QuadratureSpec& spec = {}) {
    if (!(delta > 0.0)) throw DomainError("angular_reduction_indicator: delta must be > 0");
    const int n = dimension(f);
    const double front = std::pow(2.0, n + 1) * sphere_measure(n - 2);
    auto theta_integrand = [&](double theta) {
        const double ct = std::cos(theta);
        const double st = std::sin(theta);
        if (ct < 1e-14) return 0.0;
        return std::pow(st, n) * ball_mass(f, v, delta * ct, detail::relaxed(spec, 100.0));
    };
    return front * integrate_1d(theta_integrand, 0.0, 0.5 * std::numbers::pi,
                                detail::relaxed(spec, 1e4));
}

// Direct Monte-Carlo evaluation of the same pair integral (independent route):
// v_* uniform in the ball of radius psi_reach about v, sigma uniform on the sphere.
template <class Psi>
McEstimate angular_reduction_mc(Psi&& psi, double psi_reach, const Density& f, const Vec& v,
                                const McConfig& mc) {
    const int n = dimension(f);
    if (static_cast<int>(v.size()) != n)
        throw DimensionMismatch("angular_reduction_mc: bad point dimension");
    const double area = sphere_area(n);
    const double ball_vol = area * std::pow(psi_reach, n) / n;
    RadialEvaluator fe(f);

    auto est = mc_estimate_scalar(mc, [&](SampleStream& s) -> double {
        thread_local detail::CollisionScratch ws;
        ws.resize(v.size());
        ws.v_star = s.ball_point(v, psi_reach);
        s.fill_direction(ws.sigma);
        const double sep = distance(v, ws.v_star);
        if (sep < 1e-300) return 0.0;
        double cos_dev = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            cos_dev += (v[i] - ws.v_star[i]) * ws.sigma[i];
        cos_dev /= sep;
        post_collision(v, ws.v_star, ws.sigma, ws.v_prime, ws.v_star_prime);
        return ball_vol * area * angular_kernel(cos_dev) * psi(sep) * fe(ws.v_prime);
    });
    return est;
}

// ---------------------------------------------------------------------------
// Equilibrium residual: f(v) [I_f(v) + J_f(v)] = I_f(v) characterizes
// equilibria. The residual is evaluated at sample points and normalized by the
// largest observed collision rate I_f + J_f.

struct ResidualPoint {
    Vec v;
    double f_value = 0.0;
    McEstimate gain;
    McEstimate loss;
    McEstimate residual; // f(v)(gain+loss) - gain, estimated per-sample
};

struct EquilibriumResidualReport {
    std::vector<ResidualPoint> points;
    double rate_scale = 0.0;    // max over points of gain + loss
    double residual_norm = 0.0; // max |residual| / rate_scale
    double error_norm = 0.0;    // (max residual std error + quadrature allowance) / rate_scale

    // equilibria stay within this; non-equilibria should clear 10x it
    double tolerance() const { return 5.0 * error_norm; }
    bool equilibrium_pass() const { return residual_norm <= tolerance(); }
};

inline EquilibriumResidualReport equilibrium_residual(const Density& f,
                                                      const std::vector<Vec>& v_samples,
                                                      const QuadratureSpec& spec,
                                                      const McConfig& mc) {
    if (v_samples.empty()) throw DomainError("equilibrium_residual: need at least one sample point");
    const int n = dimension(f);
    const double area = sphere_area(n);
    const GaussianEnvelope env = make_envelope(f, spec);
    RadialEvaluator fe(f);

    EquilibriumResidualReport rep;
    rep.points.reserve(v_samples.size());
    for (const Vec& v : v_samples) {
        if (static_cast<int>(v.size()) != n)
            throw DimensionMismatch("equilibrium_residual: bad point dimension");
        const double fv = fe(v);
        auto batch = mc_estimate(mc, 3, [&](SampleStream& s, std::span<double> out) {
            thread_local detail::CollisionScratch ws;
            ws.resize(v.size());
            const auto t = detail::gain_loss_term(fe, v, s, env, area, ws);
            out[0] = t.gain;
            out[1] = t.loss;
            out[2] = fv * (t.gain + t.loss) - t.gain;
        });
        rep.points.push_back({v, fv, batch[0], batch[1], batch[2]});
    }

    double max_rate = 0.0, max_res = 0.0, max_se = 0.0;
    for (const auto& p : rep.points) {
        max_rate = std::max(max_rate, p.gain.mean + p.loss.mean);
        max_res = std::max(max_res, std::abs(p.residual.mean));
        max_se = std::max(max_se, p.residual.std_error);
    }
    const double denom = std::max(max_rate, spec.abs_tol);
    rep.rate_scale = max_rate;
    rep.residual_norm = max_res / denom;
    rep.error_norm = (max_se + spec.abs_tol) / denom;
    return rep;
}

// Radial sample points for residual checks: a grid reaching past the support
// edge so the collision rate scale stays positive for indicator densities.
inline std::vector<Vec> radial_sample_points(const Density& f, int count,
                                             double extent_factor = 1.3,
                                             const QuadratureSpec& spec = {}) {
    if (count < 2) throw DomainError("radial_sample_points: need at least 2 points");
    const double r_cover = mass_radius(f, 0.9999, spec);
    const Vec c = density_center(f);
    const int n = dimension(f);
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Vec p = c;
        p[0] += extent_factor * r_cover * i / (count - 1);
        (void)n;
        pts.push_back(std::move(p));
    }
    return pts;
}

// ---------------------------------------------------------------------------
// Entropy production.

// (a-b) log(a/b) with the conventions: 0 at a=b=0, +inf when exactly one
// argument vanishes. Arguments below 1e-300 count as exact zeros.
inline double gamma_rate(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("gamma_rate: arguments must be >= 0");
    if (a < 1e-300) a = 0.0;
    if (b < 1e-300) b = 0.0;
    if (a == 0.0 && b == 0.0) return 0.0;
    if (a == 0.0 || b == 0.0) return std::numeric_limits<double>::infinity();
    return (a - b) * std::log(a / b);
}

struct DissipationEstimate {
    double value = 0.0;     // finite-part Monte-Carlo mean
    double std_error = 0.0; // of the finite part
    std::uint64_t infinite_samples = 0;

    bool infinite() const { return infinite_samples > 0; }
    double reported_value() const {
        return infinite() ? std::numeric_limits<double>::infinity() : value;
    }
};

// D(f) = 1/4 int int int b(|<n,sigma>|) Gamma(gain-config, loss-config).
// v and v_* are drawn uniformly from a ball that covers every pair whose
// post-collision points can touch the support; sampled Gamma = +inf is counted
// separately (a certificate that f is not an equilibrium indicator).
inline DissipationEstimate dissipation_estimate(const Density& f, const McConfig& mc,
                                                const QuadratureSpec& spec = {}) {
    const int n = dimension(f);
    const double area = sphere_area(n);
    const Vec c = density_center(f);
    const double cover = std::sqrt(2.0) * mass_radius(f, 0.9999, spec) * 1.02;
    const double vol = area * std::pow(cover, n) / n;
    const double front = 0.25 * vol * vol * area;
    RadialEvaluator fe(f);

    auto batch = mc_estimate(mc, 2, [&](SampleStream& s, std::span<double> out) {
        thread_local detail::CollisionScratch ws;
        ws.resize(static_cast<std::size_t>(n));
        thread_local Vec v;
        v = s.ball_point(c, cover);
        ws.v_star = s.ball_point(c, cover);
        s.fill_direction(ws.sigma);

        const double sep = distance(v, ws.v_star);
        if (sep < 1e-300) return;
        double cos_dev = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            cos_dev += (v[i] - ws.v_star[i]) * ws.sigma[i];
        cos_dev /= sep;
        post_collision(v, ws.v_star, ws.sigma, ws.v_prime, ws.v_star_prime);

        const double fv = fe(v);
        const double fs = fe(ws.v_star);
        const double fp = fe(ws.v_prime);
        const double fsp = fe(ws.v_star_prime);
        const double gain_cfg = fp * fsp * (1.0 - fv) * (1.0 - fs);
        const double loss_cfg = fv * fs * (1.0 - fp) * (1.0 - fsp);
        const double g = gamma_rate(gain_cfg, loss_cfg);
        if (std::isinf(g)) {
            out[1] = 1.0;
            return;
        }
        out[0] = front * angular_kernel(cos_dev) * g;
    });

    DissipationEstimate est;
    est.value = batch[0].mean;
    est.std_error = batch[0].std_error;
    est.infinite_samples =
        static_cast<std::uint64_t>(std::llround(batch[1].mean * static_cast<double>(mc.samples)));
    return est;
}

} // namespace fdeq
