#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include <omp.h>

namespace wsprox {

/**
 * Thread budget for the fork-join kernels.
 *
 * Every kernel partitions work by problem size only, never by thread count,
 * so results are bit-identical for any value of `threads`.
 */
struct Parallelism
{
    int threads = 1;
};

/// Thread count from WSPROX_THREADS, or 1 when unset or malformed.
int default_thread_count();

namespace par {

/// Block length of the two-level scans. Fixes the summation tree shape.
inline constexpr std::size_t kScanBlock = 4096;
/// Below this many elements a kernel never spawns tasks.
inline constexpr std::size_t kTaskGrain = std::size_t{1} << 15;
/// Leaf length of the pairwise reductions.
inline constexpr std::size_t kPairwiseLeaf = 64;

/// True when the caller runs inside a team that can execute tasks.
inline bool tasks_enabled() noexcept { return omp_in_parallel() != 0; }

/**
 * Runs `fn` once. With more than one thread, `fn` runs on a single member
 * of a fresh team so it may spawn tasks; otherwise it runs inline.
 */
template <class Fn>
void run(const Parallelism& p, Fn&& fn)
{
    if (p.threads <= 1 || tasks_enabled()) {
        fn();
        return;
    }
#pragma omp parallel num_threads(p.threads)
    {
#pragma omp single
        fn();
    }
}

/// Runs `left` and `right`, concurrently when `spawn` holds and a team exists.
template <class L, class R>
void fork_join(bool spawn, L&& left, R&& right)
{
    if (spawn && tasks_enabled()) {
#pragma omp task default(shared)
        left();
        right();
#pragma omp taskwait
    } else {
        left();
        right();
    }
}

/// Calls body(b) for b in [0, count), in parallel when `spawn` holds.
template <class Body>
void for_blocks(std::size_t count, bool spawn, Body&& body)
{
    if (spawn && count > 1 && tasks_enabled()) {
#pragma omp taskloop default(shared) grainsize(1)
        for (std::size_t b = 0; b < count; ++b)
            body(b);
    } else {
        for (std::size_t b = 0; b < count; ++b)
            body(b);
    }
}

/// Calls body(k) for k in [0, n), chunked by kScanBlock; tasks for large n.
template <class Body>
void for_range(std::size_t n, Body&& body)
{
    const std::size_t blocks = (n + kScanBlock - 1) / kScanBlock;
    for_blocks(blocks, n >= kTaskGrain, [&](std::size_t b) {
        const std::size_t hi = (b + 1) * kScanBlock < n ? (b + 1) * kScanBlock : n;
        for (std::size_t k = b * kScanBlock; k < hi; ++k)
            body(k);
    });
}

/**
 * Pairwise sum of term(k) over k in [lo, hi).
 *
 * The split points depend on the range only, so the rounding is the same
 * whether or not the halves run concurrently.
 */
template <class T, class Term>
T pairwise_reduce(std::size_t lo, std::size_t hi, const Term& term)
{
    const std::size_t n = hi - lo;
    if (n <= kPairwiseLeaf) {
        T acc{};
        for (std::size_t k = lo; k < hi; ++k)
            acc += term(k);
        return acc;
    }
    const std::size_t mid = lo + n / 2;
    T left{}, right{};
    fork_join(
        n >= kTaskGrain,
        [&] { left = pairwise_reduce<T>(lo, mid, term); },
        [&] { right = pairwise_reduce<T>(mid, hi, term); });
    return left + right;
}

inline double pairwise_sum(std::span<const double> values)
{
    return pairwise_reduce<double>(0, values.size(), [&](std::size_t k) { return values[k]; });
}

/**
 * Exclusive prefix sum with a fixed two-level shape: sequential running sums
 * inside blocks of kScanBlock, block offsets accumulated left to right.
 * Returns the grand total.
 */
double exclusive_scan(std::span<const double> in, std::span<double> out);
std::int64_t exclusive_scan(std::span<const std::int64_t> in, std::span<std::int64_t> out);

/// Stable ascending sort of `order` by keys[order[k]] (merge sort, tasked halves).
void stable_sort_by_key(std::span<const double> keys, std::span<std::size_t> order);

} // namespace par
} // namespace wsprox
