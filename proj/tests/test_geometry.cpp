#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fdeq/geometry.hpp"
#include "test_support.hpp"

using namespace fdeq;
using test_support::close_rel;

TEST_CASE("shape oracles: membership and validated boundary samplers") {
    const ShapeOracle ball = make_ball_shape(1.0, {}, 2);
    CHECK(ball.contains(Vec{0.5, 0.5}));
    CHECK_FALSE(ball.contains(Vec{1.1, 0.0}));

    const ShapeOracle ann = make_annulus_shape(0.5, 2);
    CHECK(ann.contains(Vec{0.7, 0.0}));
    CHECK_FALSE(ann.contains(Vec{0.3, 0.0}));
    CHECK_FALSE(ann.contains(Vec{1.2, 0.0}));

    const ShapeOracle reuleaux = make_reuleaux_shape();
    CHECK(reuleaux.contains(Vec{0.0, 0.0}));
    // boundary samples lie on the set with the stated outward direction
    for (std::uint64_t i = 0; i < 32; ++i) {
        const auto bp = reuleaux.boundary_sample(5, i);
        CHECK(reuleaux.contains(bp.point));
        CHECK_FALSE(reuleaux.contains(axpy(bp.point, 1e-6, bp.outward)));
    }
}

TEST_CASE("mid-sphere identity holds to rounding") {
    double worst = 0.0;
    for (int n : {2, 5}) {
        for (std::uint64_t i = 0; i < 500000; ++i) {
            SampleStream s(900 + n, i);
            const Vec x = test_support::random_point(s, n, 2.0);
            const Vec y = test_support::random_point(s, n, 2.0);
            const Vec x0 = test_support::random_point(s, n, 2.0);
            const Vec sigma = s.direction(n);
            worst = std::max(worst, midsphere_identity_residual(x, y, x0, sigma));
        }
    }
    CHECK(worst <= 1e-12);
    // x = y: both candidates coincide with the midpoint
    const Vec p{0.3, -0.4};
    CHECK(midsphere_identity_residual(p, p, Vec{1.0, 1.0}, Vec{0.0, 1.0}) <= 1e-15);
}

TEST_CASE("balls pass the mid-sphere condition on sampled triples") {
    for (int n : {2, 3}) {
        const ShapeOracle ball = make_ball_shape(1.0, {}, n);
        const auto rep = check_midsphere_condition(ball, McConfig{31, 10000, 1});
        CHECK(rep.pass);
        CHECK(rep.failure_count == 0);
    }
}

TEST_CASE("the Reuleaux triangle fails: targeted witness and random search") {
    const ShapeOracle reuleaux = make_reuleaux_shape();
    const double h = std::sqrt(3.0) / 2.0;
    // a vertex and the midpoint of the opposite arc: a diameter pair
    const Vec a{0.0, 2.0 * h / 3.0};
    const Vec b{0.0, 2.0 * h / 3.0 - 1.0};
    const Vec sigma{1.0, 0.0}; // perpendicular to a - b
    Vec cp, cm;
    CHECK_FALSE(midsphere_pair_meets(reuleaux, a, b, sigma, 1e-9, cp, cm));
    // both candidates sit strictly outside
    CHECK(reuleaux.exterior_distance(cp) > 0.05);
    CHECK(reuleaux.exterior_distance(cm) > 0.05);

    const auto rep = check_midsphere_condition(reuleaux, McConfig{7, 100000, 1});
    CHECK_FALSE(rep.pass);
    CHECK(rep.failure_count >= 1);
    CHECK(!rep.failures.empty());
}

TEST_CASE("sphere fractions: ball saturates, annulus does not") {
    McConfig mc{5, 20000, 1};
    const ShapeOracle ball = make_ball_shape(1.0, {}, 2);
    const auto full = sphere_fraction(ball, Vec{0.3, 0.0}, Vec{-0.2, 0.1}, mc);
    CHECK(full.fraction == 1.0);
    CHECK(full.std_error == 0.0);

    const ShapeOracle ann = make_annulus_shape(0.5, 2);
    // orthogonal outer/inner pair: the worst configuration
    const auto part = sphere_fraction(ann, Vec{1.0, 0.0}, Vec{0.0, 0.5}, mc);
    CHECK(part.fraction < 1.0);
    CHECK(part.fraction > 0.2);

    // both candidate spheres entirely outside: zero fraction
    const ShapeOracle small_ball = make_ball_shape(0.1, {}, 2);
    const auto none = sphere_fraction(small_ball, Vec{5.0, 0.0}, Vec{6.0, 0.0}, mc);
    CHECK(none.fraction == 0.0);

    CHECK_THROWS_AS(sphere_fraction(ball, Vec{1.0, 0.0}, Vec{1.0, 0.0}, mc), DegeneratePair);
}

TEST_CASE("annulus lambda bound: closed forms and limits") {
    // n = 2: arcsin(x) / (pi/2) with x = (1-eps^2)/(1+eps^2)
    CHECK(close_rel(annulus_lambda_lower_bound(0.5, 2), std::asin(0.6) / (std::numbers::pi / 2.0),
                    1e-10));
    // n = 3: the integrand is 1, so the bound is x itself
    CHECK(close_rel(annulus_lambda_lower_bound(0.5, 3), 0.6, 1e-12));
    // eps -> 0 gives 1
    CHECK(annulus_lambda_lower_bound(1e-4, 2) > 0.999);
    CHECK_THROWS_AS(annulus_lambda_lower_bound(0.0, 2), DomainError);
}

TEST_CASE("lambda estimates respect the closed-form bound") {
    {
        const ShapeOracle ball = make_ball_shape(1.0, {}, 2);
        const auto est = lambda_estimate(ball, McConfig{3, 40, 1}, 2000);
        CHECK(est.lambda_hat == 1.0);
        CHECK(est.std_error == 0.0);
    }
    {
        const ShapeOracle ann = make_annulus_shape(0.5, 2);
        const auto est = lambda_estimate(ann, McConfig{3, 150, 1}, 8000);
        const double bound = annulus_lambda_lower_bound(0.5, 2);
        CHECK(est.lambda_hat >= bound - 3.0 * est.std_error);
        CHECK(est.lambda_hat < 1.0);
    }
}

TEST_CASE("reduction identity: two independent evaluation routes agree") {
    QuadratureSpec spec;
    McConfig mc{21, 400000, 2};
    const Vec v{0.4, 0.0};
    {
        // alpha = collision kernel, beta = Fermi-Dirac, gamma = Gaussian
        const Density beta = make_fermi_dirac(1.0, 1.0, {}, 2);
        auto alpha = [](double c) { return 1.0 - c * c; };
        auto gamma = [](double r) { return std::exp(-r * r); };
        const auto sides = reduction_identity_check(alpha, beta, gamma, 6.0, v, spec, mc);
        CHECK(std::abs(sides.lhs - sides.rhs) <= 3.0 * sides.mc_std_error);
    }
    {
        // zero gamma
        const Density beta = make_fermi_dirac(1.0, 1.0, {}, 2);
        const auto sides = reduction_identity_check([](double c) { return 1.0 - c * c; }, beta,
                                                    [](double) { return 0.0; }, 1.0, v, spec, mc);
        CHECK(sides.lhs == 0.0);
        CHECK(sides.rhs == 0.0);
    }
    {
        // indicator gamma with a smooth alpha that vanishes at cos = -1
        const Density beta = make_ball(1.0, {}, 2);
        auto alpha = [](double c) { return (1.0 + c) * (1.0 + c) / 4.0 * (1.0 - c); };
        auto gamma = [](double r) { return r <= 1.0 ? 1.0 : 0.0; };
        const auto sides = reduction_identity_check(alpha, beta, gamma, 1.0, v, spec, mc);
        CHECK(std::abs(sides.lhs - sides.rhs) <= 3.0 * sides.mc_std_error);
    }
    {
        // three dimensions
        const Density beta = make_fermi_dirac(1.0, 1.0, {}, 3);
        auto alpha = [](double c) { return 1.0 - c * c; };
        auto gamma = [](double r) { return std::exp(-r * r); };
        const auto sides =
            reduction_identity_check(alpha, beta, gamma, 5.0, Vec{0.3, 0.2, 0.0}, spec, mc);
        CHECK(std::abs(sides.lhs - sides.rhs) <= 3.0 * sides.mc_std_error);
    }
}

TEST_CASE("ball-average bound: tight for constants in 2-d, strict in 3-d") {
    QuadratureSpec spec;
    McConfig mc{31, 300000, 2};
    {
        // constant 1 inside a huge ball: equality in 2-d
        const Density big = make_ball(50.0, {}, 2);
        const auto sides = ball_average_bound_check(big, Vec{0.0, 0.0}, 1.0, spec, mc);
        CHECK(sides.lhs >= sides.rhs - 3.0 * sides.mc_std_error);
        CHECK(std::abs(sides.lhs - sides.rhs) <= 5.0 * sides.mc_std_error);
        CHECK(close_rel(sides.lhs, std::numbers::pi, 1e-9));
    }
    {
        // strict gap in 3-d: |S^2|/3 vs |S^2|^2 int sin^2 / (16 |S^1|)
        const Density big = make_ball(50.0, {}, 3);
        const auto sides = ball_average_bound_check(big, Vec{0.0, 0.0, 0.0}, 1.0, spec, mc);
        CHECK(sides.lhs > sides.rhs + 10.0 * sides.mc_std_error);
    }
    {
        const Density fd = make_fermi_dirac(1.0, 1.0, {}, 2);
        SampleStream s(87, 0);
        for (int k = 0; k < 3; ++k) {
            const Vec v = test_support::random_point(s, 2, 1.0);
            const double r = s.next_uniform(0.2, 1.5);
            const auto sides = ball_average_bound_check(fd, v, r, spec, mc);
            CHECK(sides.lhs >= sides.rhs - 3.0 * sides.mc_std_error);
        }
    }
    {
        // zero density: 0 >= 0
        const Density zero = make_radial_grid({0.0, 1.0}, {0.0, 0.0}, {}, 2);
        McConfig tiny{1, 1000, 1};
        const auto sides = ball_average_bound_check(zero, Vec{0.2, 0.0}, 0.5, spec, tiny);
        CHECK(sides.lhs == 0.0);
        CHECK(sides.rhs == 0.0);
    }
}
