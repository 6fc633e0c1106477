#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature with bisection refinement, plus a
// truncation wrapper for semi-infinite integrands with Gaussian-type decay.

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "fdeq/errors.hpp"

namespace fdeq {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;

    void validate() const {
        if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be > 0");
        if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be > 0");
        if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
    }
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss on [-1,1] (QUADPACK values).
inline constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double integral;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(mid);
    double kronrod = kKronrodW[7] * f0;
    double gauss = kGaussW[3] * f0;
    double resabs = kKronrodW[7] * std::abs(f0);

    double fv[7][2];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGkNodes[i];
        fv[i][0] = f(mid - dx);
        fv[i][1] = f(mid + dx);
        const double sum = fv[i][0] + fv[i][1];
        kronrod += kKronrodW[i] * sum;
        resabs += kKronrodW[i] * (std::abs(fv[i][0]) + std::abs(fv[i][1]));
        if (i % 2 == 1) gauss += kGaussW[i / 2] * sum;
    }

    // QUADPACK-style error estimate scaled by the variation of f on the panel
    const double mean = kronrod * 0.5;
    double resasc = kKronrodW[7] * std::abs(f0 - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kKronrodW[i] * (std::abs(fv[i][0] - mean) + std::abs(fv[i][1] - mean));
    resasc *= half;
    resabs *= half;

    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);

    return Panel{a, b, kronrod * half, err};
}

} // namespace detail

template <class F>
double integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(a < b)) throw DomainError("integrate_1d: requires a < b");

    std::priority_queue<detail::Panel> queue;
    detail::Panel first = detail::gk15(f, a, b);
    double total = first.integral;
    double total_err = first.error;
    double frozen_err = 0.0;
    queue.push(first);

    int panels = 1;
    const double min_width = 1e-15 * (std::abs(a) + std::abs(b) + 1.0);

    while (total_err + frozen_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (queue.empty())
            throw NonConvergence("integrate_1d: tolerance unreachable (roundoff-limited panels)");
        if (panels >= spec.max_subdivisions)
            throw NonConvergence("integrate_1d: max_subdivisions exhausted");

        const detail::Panel worst = queue.top();
        queue.pop();
        total -= worst.integral;
        total_err -= worst.error;

        const double mid = 0.5 * (worst.a + worst.b);
        if (mid - worst.a < min_width) {
            // cannot refine further; keep its contribution and error
            total += worst.integral;
            frozen_err += worst.error;
            continue;
        }

        const detail::Panel left = detail::gk15(f, worst.a, mid);
        const detail::Panel right = detail::gk15(f, mid, worst.b);
        total += left.integral + right.integral;
        total_err += left.error + right.error;
        queue.push(left);
        queue.push(right);
        ++panels;
    }
    return total;
}

// Integral over [0, inf) of an integrand decaying at least like exp(-decay_hint*r^2).
// The hint fixes the first truncation radius; further segments extend it until two
// consecutive segment contributions are negligible against the running estimate.
template <class F>
double integrate_semi_infinite(F&& f, const QuadratureSpec& spec, double decay_hint) {
    spec.validate();
    if (!(decay_hint > 0.0)) throw InvalidDecayHint("integrate_semi_infinite: decay_hint must be > 0");

    // exp(-hint*r0^2) ~ 1e-17
    double r0 = std::sqrt(39.0 / decay_hint);
    double total = integrate_1d(f, 0.0, r0, spec);

    int quiet = 0;
    double lo = r0;
    for (int k = 0; k < 64 && quiet < 2; ++k) {
        const double hi = lo * 1.6;
        const double seg = integrate_1d(f, lo, hi, spec);
        total += seg;
        const double target = 0.25 * std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        quiet = (std::abs(seg) <= target) ? quiet + 1 : 0;
        lo = hi;
    }
    if (quiet < 2) throw NonConvergence("integrate_semi_infinite: tail failed to decay");
    return total;
}

namespace detail {

// Shared tail-extension helper for integrands whose decay scale is known to the
// caller but is not of exp(-h r^2) form (e.g. Fermi factors in u).
template <class F>
double integrate_with_tail(F&& f, double r0, const QuadratureSpec& spec) {
    double total = integrate_1d(f, 0.0, r0, spec);
    int quiet = 0;
    double lo = r0;
    for (int k = 0; k < 64 && quiet < 2; ++k) {
        const double hi = lo * 1.6;
        const double seg = integrate_1d(f, lo, hi, spec);
        total += seg;
        const double target = 0.25 * std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        quiet = (std::abs(seg) <= target) ? quiet + 1 : 0;
        lo = hi;
    }
    if (quiet < 2) throw NonConvergence("integrate_with_tail: tail failed to decay");
    return total;
}

} // namespace detail

} // namespace fdeq
