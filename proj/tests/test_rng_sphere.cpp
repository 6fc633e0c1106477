#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fdeq/mc.hpp"
#include "fdeq/sphere.hpp"
#include "test_support.hpp"

using namespace fdeq;

TEST_CASE("sample streams are deterministic per (seed, index)") {
    for (std::uint64_t i : {0ull, 1ull, 77ull, 123456ull}) {
        SampleStream a(9, i), b(9, i);
        for (int k = 0; k < 16; ++k) CHECK(a.next_u64() == b.next_u64());
    }
    SampleStream a(9, 5), b(10, 5);
    CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("sphere directions replay identically and have unit norm") {
    SphereSampler sampler(2, 321);
    for (std::uint64_t i = 0; i < 64; ++i) {
        const Vec u = sampler(i);
        const Vec w = sampler(i);
        CHECK(u == w);
        CHECK(std::abs(norm(u) - 1.0) <= 1e-12);
    }
}

TEST_CASE("Monte-Carlo reduction is independent of the worker count") {
    auto run = [](unsigned workers) {
        McConfig mc{2024, 100000, workers};
        return mc_estimate(mc, 2, [](SampleStream& s, std::span<double> out) {
            out[0] = s.next_normal();
            out[1] = s.next_unit();
        });
    };
    const auto one = run(1);
    const auto three = run(3);
    const auto eight = run(8);
    for (int j = 0; j < 2; ++j) {
        CHECK(one.components[j].mean == three.components[j].mean);
        CHECK(one.components[j].mean == eight.components[j].mean);
        CHECK(one.components[j].std_error == three.components[j].std_error);
    }
}

TEST_CASE("uniform sphere sampling has the right low moments") {
    const std::uint64_t n_samples = 1'000'000;
    McConfig mc{7, n_samples, 2};
    auto batch = mc_estimate(mc, 4, [](SampleStream& s, std::span<double> out) {
        Vec sigma(3);
        s.fill_direction(sigma);
        out[0] = sigma[0];
        out[1] = sigma[1];
        out[2] = sigma[2];
        out[3] = sigma[0] * sigma[0];
    });
    const double clt = 3.0 / std::sqrt(static_cast<double>(n_samples));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(batch.components[j].mean) <= clt);
    CHECK(std::abs(batch.components[3].mean - 1.0 / 3.0) <= 5e-3);
}

TEST_CASE("zonal sphere integrals hit closed forms") {
    for (int n = 2; n <= 6; ++n) {
        const double area = sphere_zonal_integral([](double) { return 1.0; }, n);
        CHECK(std::abs(area - sphere_area(n)) <= 1e-10 * sphere_area(n));
    }
    // <omega, sigma>^2 over S^2
    const double second = sphere_zonal_integral([](double c) { return c * c; }, 3);
    CHECK(second == Catch::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-12));
    CHECK(sphere_area(2) == Catch::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
    CHECK(sphere_area(3) == Catch::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
    CHECK(sphere_measure(0) == Catch::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(sphere_measure(-1), InvalidDimension);
    CHECK_THROWS_AS(sphere_area(1), InvalidDimension);
}

TEST_CASE("general sphere integrals by Monte Carlo") {
    McConfig mc{11, 200000, 2};
    const auto est = sphere_integral_mc([](const Vec& s) { return s[0] * s[0]; }, 3, mc);
    CHECK(std::abs(est.mean - 4.0 * std::numbers::pi / 3.0) <= 4.0 * est.std_error);
}
