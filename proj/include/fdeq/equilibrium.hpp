#pragma once

// Moment-based classification of equilibria. The ratio M2 / M0^{(n+2)/n} is
// compared against the dimensional threshold c_n: strictly above means a unique
// Fermi-Dirac density (Regime I), at the threshold means a ball indicator
// (Regime II), below means no admissible density exists.

#include <cmath>
#include <utility>
#include <variant>

#include "fdeq/density.hpp"
#include "fdeq/fermi.hpp"
#include "fdeq/root_finding.hpp"

namespace fdeq {

struct RegimeI {
    double a = 0.0;
    double b = 0.0;
};

struct RegimeII {
    double radius = 0.0;
};

struct Infeasible {};

struct Classification {
    std::variant<RegimeI, RegimeII, Infeasible> regime;
    double ratio = 0.0;
    double threshold = 0.0;

    bool is_fermi_dirac() const { return std::holds_alternative<RegimeI>(regime); }
    bool is_ball() const { return std::holds_alternative<RegimeII>(regime); }
    bool is_infeasible() const { return std::holds_alternative<Infeasible>(regime); }
};

// Solves P(1/a) = |S^{n-1}|^{2/n} * M2 / M0^{(n+2)/n} for a (unique by the
// strict monotonicity of P), then b from the mass equation.
inline std::pair<double, double> invert_parameters(const Moments& m,
                                                   const QuadratureSpec& spec = {}) {
    const int n = m.dim;
    require_dimension(n);
    if (!(m.m0 > 0.0) || !(m.m2 > 0.0)) throw DomainError("invert_parameters: moments must be > 0");

    const double area = sphere_area(n);
    const double ratio = m.ratio();
    const double c = moment_ratio_threshold(n);
    if (ratio < c * (1.0 - 1e-12))
        throw InfeasibleMoments("invert_parameters: moment ratio below the admissible threshold");

    const double target = std::pow(area, 2.0 / n) * ratio;
    const double t = bisect_monotone([&](double x) { return fermi_P(x, n, spec); }, target, 1e-8, 1e8);
    const double a = 1.0 / t;
    const double b = std::pow(fermi_I(n - 1, t, spec) * area / m.m0, 2.0 / n);
    return {a, b};
}

// Regime II radius from the mass equation M0 = |S^{n-1}| R^n / n.
inline BallDensity ball_from_mass(double m0, int n, Vec center = {}) {
    require_dimension(n);
    if (!(m0 > 0.0)) throw InvalidMass("ball_from_mass: mass must be > 0");
    if (center.empty()) center = zeros(n);
    const double radius = std::pow(n * m0 / sphere_area(n), 1.0 / n);
    return make_ball(radius, std::move(center), n);
}

// tol is relative on |ratio - threshold|: the dichotomy is exact in real
// arithmetic, so numerics need a band around the threshold.
inline Classification classify(const Moments& m, double tol = 1e-9,
                               const QuadratureSpec& spec = {}) {
    const int n = m.dim;
    require_dimension(n);
    if (!(m.m0 > 0.0) || !(m.m2 > 0.0)) throw DomainError("classify: moments must be > 0");

    Classification cls;
    cls.ratio = m.ratio();
    cls.threshold = moment_ratio_threshold(n);

    if (cls.ratio > cls.threshold * (1.0 + tol)) {
        const auto [a, b] = invert_parameters(m, spec);
        cls.regime = RegimeI{a, b};
    } else if (cls.ratio >= cls.threshold * (1.0 - tol)) {
        cls.regime = RegimeII{std::pow(n * m.m0 / sphere_area(n), 1.0 / n)};
    } else {
        cls.regime = Infeasible{};
    }
    return cls;
}

struct VerificationReport {
    double entropy_value = 0.0;
    bool entropy_pass = false;
    double ratio = 0.0;
    double threshold = 0.0;
    bool ratio_pass = false;
    double form_residual = 0.0; // max pointwise gap (I) / symmetric-difference mass (II)
    bool form_pass = false;

    bool pass() const { return entropy_pass && ratio_pass && form_pass; }
};

// Checks the three equivalent legs of whichever regime the classification
// claims: entropy sign, moment ratio, and the functional form itself. A density
// can match a regime's moment ratio while failing the form leg; that is how
// non-equilibrium indicators (e.g. annuli) are exposed.
inline VerificationReport verify_classification(const Density& f, const Classification& cls,
                                                const QuadratureSpec& spec = {},
                                                double ratio_tol = 1e-9, double form_tol = 1e-6) {
    const int n = dimension(f);
    const Moments m = compute_moments(f, spec);
    VerificationReport rep;
    rep.entropy_value = entropy(f, spec);
    rep.ratio = m.ratio();
    rep.threshold = moment_ratio_threshold(n);

    const double entropy_tol = 1e-8 * (1.0 + m.m0);
    const double r_cover = mass_radius(f, 0.9999, spec);
    constexpr int kNodes = 256;

    if (cls.is_fermi_dirac()) {
        const auto& reg = std::get<RegimeI>(cls.regime);
        rep.entropy_pass = rep.entropy_value > entropy_tol;
        rep.ratio_pass = rep.ratio > rep.threshold * (1.0 + ratio_tol);
        const Density model = make_fermi_dirac(reg.a, reg.b, density_center(f), n);
        double worst = 0.0;
        for (int i = 0; i < kNodes; ++i) {
            const double r = r_cover * i / (kNodes - 1);
            worst = std::max(worst, std::abs(radial_value(f, r) - radial_value(model, r)));
        }
        rep.form_residual = worst;
        rep.form_pass = worst <= form_tol;
    } else if (cls.is_ball()) {
        const double radius = std::get<RegimeII>(cls.regime).radius;
        rep.entropy_pass = rep.entropy_value <= entropy_tol;
        rep.ratio_pass = std::abs(rep.ratio - rep.threshold) <= rep.threshold * ratio_tol;
        // symmetric-difference mass against the claimed ball
        const double r_hi = std::max(r_cover, radius) * 1.25;
        auto gap = [&](double r) {
            const double ind = r <= radius ? 1.0 : 0.0;
            return std::pow(r, n - 1) * std::abs(radial_value(f, r) - ind);
        };
        rep.form_residual = sphere_area(n) * integrate_1d(gap, 0.0, r_hi, spec);
        rep.form_pass = rep.form_residual <= form_tol * m.m0;
    } else {
        rep.entropy_pass = false;
        rep.ratio_pass = false;
        rep.form_residual = std::numeric_limits<double>::infinity();
        rep.form_pass = false;
    }
    return rep;
}

} // namespace fdeq
