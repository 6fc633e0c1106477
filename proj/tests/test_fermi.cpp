#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fdeq/fermi.hpp"
#include "test_support.hpp"

using namespace fdeq;
using test_support::close_rel;

namespace {
// closed form from the substitution u = r^2
double fermi_I1_closed(double t) { return 0.5 * std::log1p(1.0 / t); }
} // namespace

TEST_CASE("fermi_I matches its closed form at s = 1") {
    CHECK(fermi_I(1.0, 1.0) == Catch::Approx(0.5 * std::numbers::ln2).epsilon(1e-10));
    for (double t : {0.1, 0.5, 2.0, 10.0, 100.0})
        CHECK(close_rel(fermi_I(1.0, t), fermi_I1_closed(t), 1e-10));
    // t I_1(t) -> 1/2 for large t
    CHECK(std::abs(1e6 * fermi_I(1.0, 1e6) - 0.5) <= 1e-6);
    CHECK(fermi_I(3.0, 0.7) > 0.0);
    CHECK_THROWS_AS(fermi_I(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(fermi_I(-1.0, 1.0), DomainError);
}

TEST_CASE("integration by parts ties I_s to J_{s+2}") {
    for (double s : {1.0, 2.0, 3.0, 4.0, 5.0})
        for (double t : {0.1, 1.0, 10.0}) {
            const double lhs = fermi_I(s, t);
            const double rhs = 2.0 * t / (s + 1.0) * fermi_J(s + 2.0, t);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * lhs);
        }
}

TEST_CASE("fermi_J is the negative t-derivative of fermi_I") {
    const double h = 1e-5;
    for (double s : {1.0, 3.0})
        for (double t : {0.5, 1.0, 4.0}) {
            const double fd = -(fermi_I(s, t + h) - fermi_I(s, t - h)) / (2.0 * h);
            CHECK(close_rel(fd, fermi_J(s, t), 1e-6));
        }
    CHECK(fermi_J(2.0, 3.0) > 0.0);
}

TEST_CASE("Cauchy-Schwarz chain for J orders") {
    for (int n = 2; n <= 5; ++n)
        for (double t : {0.05, 0.3, 1.0, 7.0, 60.0}) {
            const double mid = fermi_J(n + 1, t);
            CHECK(mid * mid < fermi_J(n - 1, t) * fermi_J(n + 3, t));
        }
}

TEST_CASE("P is strictly increasing with the documented limits") {
    for (int n = 2; n <= 5; ++n) {
        double prev = fermi_P(0.5, n);
        const double p1 = fermi_P(1.0, n);
        const double p2 = fermi_P(2.0, n);
        CHECK(p1 > prev);
        CHECK(p2 > p1);
        prev = p2;
    }
    // divergence: P(t) grows at least like t^{2/n}
    CHECK(fermi_P(1e6, 2) > 1e3 * fermi_P(1.0, 2));
    // small-t limit, n = 2: n^{(n+2)/n} / (n+2) = 4/4 = 1
    CHECK(std::abs(fermi_P_small_t_limit(2) - 1.0) <= 1e-8);
    for (int n = 2; n <= 6; ++n) {
        const double formula = std::pow(double(n), (n + 2.0) / n) / (n + 2.0);
        CHECK(close_rel(fermi_P_small_t_limit(n), formula, 1e-6));
    }
}

TEST_CASE("threshold equals the extrapolated small-t limit of P") {
    CHECK(moment_ratio_threshold(2) == Catch::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-13));
    const double t3 = 3.0 / 5.0 * std::pow(3.0 / (4.0 * std::numbers::pi), 2.0 / 3.0);
    CHECK(moment_ratio_threshold(3) == Catch::Approx(t3).epsilon(1e-13));
    CHECK(moment_ratio_threshold(3) == Catch::Approx(0.2309008389).epsilon(1e-9));
    for (int n = 2; n <= 6; ++n) {
        const double extr = fermi_P_small_t_limit(n) / std::pow(sphere_area(n), 2.0 / n);
        CHECK(close_rel(extr, moment_ratio_threshold(n), 1e-6));
    }
}

TEST_CASE("K integrals: positivity, large-rho limit, and the P identity") {
    CHECK(fermi_K(2.0, 50.0) > 0.0);
    CHECK(std::abs(fermi_K(2.0, 50.0) - 0.5) <= 2e-2);
    // K_s(rho) -> 2/(s+2)
    CHECK(std::abs(fermi_K(3.0, 4000.0) - 0.4) <= 1e-5);
    // P(e^-rho) = 2^{2/n} K_n(rho) / K_{n-2}(rho)^{(n+2)/n}
    const int n = 3;
    const double rho = 5.0;
    const double lhs = fermi_P(std::exp(-rho), n);
    const double rhs = std::pow(2.0, 2.0 / n) * fermi_K(n, rho) /
                       std::pow(fermi_K(n - 2, rho), (n + 2.0) / n);
    CHECK(close_rel(lhs, rhs, 1e-8));
}

TEST_CASE("closed-form Fermi-Dirac moments stay positive and scale in b") {
    const double m0 = fermi_dirac_moment(0, 1.0, 1.0, 3);
    const double m0_hot = fermi_dirac_moment(0, 1.0, 4.0, 3);
    CHECK(m0 > 0.0);
    // mass scales like b^{-n/2}
    CHECK(close_rel(m0_hot, m0 * std::pow(4.0, -1.5), 1e-10));
}
