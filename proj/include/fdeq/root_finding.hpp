#pragma once

// Bracketed bisection for strictly increasing functions on (0, inf).

#include <cmath>
#include <string>

#include "fdeq/errors.hpp"

namespace fdeq {

// Solves g(x) = target for strictly increasing g on (0, inf). The seed bracket
// is expanded geometrically (at most 2^200 in each direction) until it encloses
// the target, then bisected to relative width 1e-12.
template <class G>
double bisect_monotone(G&& g, double target, double lo_seed, double hi_seed) {
    if (!(lo_seed > 0.0) || !(hi_seed > lo_seed))
        throw DomainError("bisect_monotone: seed bracket must satisfy 0 < lo < hi");

    double lo = lo_seed;
    double hi = hi_seed;
    double g_lo = g(lo);
    double g_hi = g(hi);

    int steps = 0;
    while (g_lo > target) {
        if (++steps > 200)
            throw BracketFailure("bisect_monotone: target below the range of g");
        lo *= 0.5;
        g_lo = g(lo);
    }
    steps = 0;
    while (g_hi < target) {
        if (++steps > 200)
            throw BracketFailure("bisect_monotone: target above the range of g");
        hi *= 2.0;
        g_hi = g(hi);
    }

    for (int it = 0; it < 2000 && (hi - lo) > 1e-12 * std::max(std::abs(lo), std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval at one ulp
        if (g(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace fdeq
