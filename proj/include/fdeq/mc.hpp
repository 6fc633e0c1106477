#pragma once

// Deterministic blocked Monte-Carlo driver. Samples are grouped into blocks of
// fixed size; block partial sums are accumulated in index order with Kahan
// compensation and reduced in block order, so the result is bit-identical for
// any worker count.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "fdeq/rng.hpp"

namespace fdeq {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

struct McBatch {
    std::vector<McEstimate> components;
    std::uint64_t samples = 0;

    const McEstimate& operator[](std::size_t i) const { return components[i]; }
};

namespace detail {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

inline constexpr std::uint64_t kMcBlock = 8192;

} // namespace detail

// fn(stream, out) fills `k` component values for one sample.
template <class Fn>
McBatch mc_estimate(const McConfig& mc, std::size_t k, Fn&& fn) {
    mc.validate();
    const std::uint64_t n = mc.samples;
    const std::uint64_t nblocks = (n + detail::kMcBlock - 1) / detail::kMcBlock;

    std::vector<double> block_sum(nblocks * k);
    std::vector<double> block_sumsq(nblocks * k);

    auto run_block = [&](std::uint64_t blk) {
        const std::uint64_t begin = blk * detail::kMcBlock;
        const std::uint64_t end = std::min(n, begin + detail::kMcBlock);
        std::vector<detail::KahanSum> s(k), s2(k);
        std::vector<double> out(k);
        for (std::uint64_t i = begin; i < end; ++i) {
            SampleStream stream(mc.seed, i);
            for (double& v : out) v = 0.0;
            fn(stream, std::span<double>(out));
            for (std::size_t j = 0; j < k; ++j) {
                s[j].add(out[j]);
                s2[j].add(out[j] * out[j]);
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            block_sum[blk * k + j] = s[j].sum;
            block_sumsq[blk * k + j] = s2[j].sum;
        }
    };

    const unsigned workers = std::min<std::uint64_t>(mc.workers, nblocks);
    if (workers <= 1) {
        for (std::uint64_t blk = 0; blk < nblocks; ++blk) run_block(blk);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::uint64_t blk = next.fetch_add(1);
                    if (blk >= nblocks) return;
                    run_block(blk);
                }
            });
        for (auto& t : pool) t.join();
    }

    McBatch batch;
    batch.samples = n;
    batch.components.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        detail::KahanSum s, s2;
        for (std::uint64_t blk = 0; blk < nblocks; ++blk) {
            s.add(block_sum[blk * k + j]);
            s2.add(block_sumsq[blk * k + j]);
        }
        const double nn = static_cast<double>(n);
        const double mean = s.sum / nn;
        double var = 0.0;
        if (n > 1) var = std::max(0.0, (s2.sum / nn - mean * mean) * nn / (nn - 1.0));
        batch.components[j] = {mean, std::sqrt(var / nn)};
    }
    return batch;
}

template <class Fn>
McEstimate mc_estimate_scalar(const McConfig& mc, Fn&& fn) {
    auto batch = mc_estimate(mc, 1, [&](SampleStream& s, std::span<double> out) { out[0] = fn(s); });
    return batch.components[0];
}

} // namespace fdeq
