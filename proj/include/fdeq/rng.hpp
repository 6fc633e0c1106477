#pragma once

// Counter-based random numbers: every Monte-Carlo sample owns an independent
// draw stream keyed by (seed, sample index), so estimates cannot depend on how
// the index range is sharded across workers.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "fdeq/errors.hpp"
#include "fdeq/vec.hpp"

namespace fdeq {

// Reproducibility contract for every Monte-Carlo estimator.
struct McConfig {
    std::uint64_t seed = 0;
    std::uint64_t samples = 100000;
    unsigned workers = 1;

    void validate() const {
        if (samples < 1) throw DomainError("McConfig: samples must be >= 1");
        if (workers < 1) throw DomainError("McConfig: workers must be >= 1");
    }
};

namespace detail {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

} // namespace detail

class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t index)
        : state_(detail::mix64(detail::mix64(seed ^ 0x243f6a8885a308d3ULL) +
                               detail::kGamma * (index + 1))) {}

    std::uint64_t next_u64() {
        state_ += detail::kGamma;
        return detail::mix64(state_);
    }

    // uniform on (0, 1]
    double next_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // uniform on [lo, hi)
    double next_uniform(double lo, double hi) {
        const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    double next_normal() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    void fill_normal(Vec& out) {
        for (double& x : out) x = next_normal();
    }

    // uniform direction on S^{n-1}
    void fill_direction(Vec& out) {
        for (;;) {
            fill_normal(out);
            const double r = norm(out);
            if (r > 1e-12) {
                for (double& x : out) x /= r;
                return;
            }
        }
    }

    Vec direction(int n) {
        Vec d(static_cast<std::size_t>(n));
        fill_direction(d);
        return d;
    }

    // uniform point in the closed ball of given center and radius
    Vec ball_point(std::span<const double> center, double radius) {
        Vec d(center.size());
        fill_direction(d);
        const double u = next_unit();
        const double r = radius * std::pow(u, 1.0 / static_cast<double>(center.size()));
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = center[i] + r * d[i];
        return d;
    }

private:
    std::uint64_t state_;
};

inline Vec sphere_direction(int n, std::uint64_t seed, std::uint64_t index) {
    require_dimension(n);
    SampleStream s(seed, index);
    return s.direction(n);
}

// Deterministic stream view over sphere directions; index-addressable so the
// stream is identical no matter how callers shard it.
class SphereSampler {
public:
    SphereSampler(int n, std::uint64_t seed) : n_(n), seed_(seed) { require_dimension(n); }

    Vec operator()(std::uint64_t index) const { return sphere_direction(n_, seed_, index); }

    int dim() const { return n_; }

private:
    int n_;
    std::uint64_t seed_;
};

} // namespace fdeq
