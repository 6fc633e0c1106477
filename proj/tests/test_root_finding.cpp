#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fdeq/rng.hpp"
#include "fdeq/root_finding.hpp"

using namespace fdeq;

TEST_CASE("bisect_monotone recovers known roots") {
    const double r1 = bisect_monotone([](double x) { return std::exp(x); }, std::numbers::e, 0.1, 1.0);
    CHECK(std::abs(r1 - 1.0) <= 1e-12);

    const double r2 = bisect_monotone([](double x) { return x * x * x; }, 8.0, 1.0, 2.0);
    CHECK(std::abs(r2 - 2.0) <= 1e-11);
}

TEST_CASE("bisect_monotone expands the bracket when needed") {
    const double r = bisect_monotone([](double x) { return std::log(x); }, 12.0, 0.5, 1.0);
    CHECK(std::abs(r - std::exp(12.0)) <= 1e-10 * std::exp(12.0));
}

TEST_CASE("bisect_monotone fails honestly outside the range") {
    // g(x) = x on (0, inf) never reaches -1
    CHECK_THROWS_AS(bisect_monotone([](double x) { return x; }, -1.0, 0.5, 1.0), BracketFailure);
    CHECK_THROWS_AS(bisect_monotone([](double x) { return x; }, 1.0, 2.0, 1.0), DomainError);
}

TEST_CASE("bisect_monotone round-trips g(x0) for random increasing g") {
    SampleStream s(5150, 0);
    for (int trial = 0; trial < 40; ++trial) {
        const double a = s.next_uniform(0.1, 3.0);
        const double b = s.next_uniform(0.0, 2.0);
        const double c = s.next_uniform(0.0, 1.0);
        auto g = [=](double x) { return a * x + b * x * x * x + c * std::atan(x); };
        const double x0 = s.next_uniform(0.05, 20.0);
        const double root = bisect_monotone(g, g(x0), 0.5, 1.5);
        CHECK(std::abs(root - x0) <= 1e-10 * std::max(1.0, x0));
    }
}
