#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fdeq/errors.hpp"

namespace fdeq {

// Velocity-space points are small runtime-dimensional vectors.
using Vec = std::vector<double>;

inline Vec zeros(int n) { return Vec(static_cast<std::size_t>(n), 0.0); }

inline Vec unit_axis(int n, int i) {
    Vec e = zeros(n);
    e[static_cast<std::size_t>(i)] = 1.0;
    return e;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double squared_norm(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

inline Vec add(std::span<const double> a, std::span<const double> b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(std::span<const double> a, std::span<const double> b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec scaled(std::span<const double> a, double c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

// r = a + c*b
inline Vec axpy(std::span<const double> a, double c, std::span<const double> b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
    return r;
}

inline void require_same_dim(std::span<const double> a, std::span<const double> b,
                             const char* what) {
    if (a.size() != b.size()) throw DimensionMismatch(std::string(what) + ": dimension mismatch");
}

inline void require_dimension(int n) {
    if (n < 2) throw InvalidDimension("dimension must be >= 2, got " + std::to_string(n));
}

} // namespace fdeq
