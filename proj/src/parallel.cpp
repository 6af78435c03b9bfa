#include "wsprox/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <vector>

namespace wsprox {

int default_thread_count()
{
    const char* env = std::getenv("WSPROX_THREADS");
    if (env == nullptr)
        return 1;
    int value = 0;
    const char* last = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, last, value);
    if (ec != std::errc{} || ptr != last || value < 1)
        return 1;
    return value;
}

namespace par {
namespace {

template <class T>
T blocked_exclusive_scan(std::span<const T> in, std::span<T> out)
{
    const std::size_t n = in.size();
    const std::size_t blocks = (n + kScanBlock - 1) / kScanBlock;
    std::vector<T> totals(blocks);
    const bool spawn = n >= kTaskGrain;

    for_blocks(blocks, spawn, [&](std::size_t b) {
        const std::size_t lo = b * kScanBlock;
        const std::size_t hi = std::min(n, lo + kScanBlock);
        T local{};
        for (std::size_t k = lo; k < hi; ++k) {
            out[k] = local;
            local += in[k];
        }
        totals[b] = local;
    });

    T offset{};
    for (std::size_t b = 0; b < blocks; ++b) {
        const T t = totals[b];
        totals[b] = offset;
        offset += t;
    }

    for_blocks(blocks, spawn, [&](std::size_t b) {
        if (b == 0)
            return;
        const std::size_t lo = b * kScanBlock;
        const std::size_t hi = std::min(n, lo + kScanBlock);
        const T base = totals[b];
        for (std::size_t k = lo; k < hi; ++k)
            out[k] = base + out[k];
    });
    return offset;
}

void merge_sort(std::span<const double> keys, std::span<std::size_t> order, std::span<std::size_t> buf)
{
    const std::size_t n = order.size();
    const auto less = [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; };
    if (n <= 2048) {
        std::stable_sort(order.begin(), order.end(), less);
        return;
    }
    const std::size_t mid = n / 2;
    fork_join(
        n >= kTaskGrain,
        [&] { merge_sort(keys, order.first(mid), buf.first(mid)); },
        [&] { merge_sort(keys, order.subspan(mid), buf.subspan(mid)); });
    std::merge(order.begin(), order.begin() + mid, order.begin() + mid, order.end(), buf.begin(), less);
    std::copy(buf.begin(), buf.begin() + n, order.begin());
}

} // namespace

double exclusive_scan(std::span<const double> in, std::span<double> out)
{
    return blocked_exclusive_scan<double>(in, out);
}

std::int64_t exclusive_scan(std::span<const std::int64_t> in, std::span<std::int64_t> out)
{
    return blocked_exclusive_scan<std::int64_t>(in, out);
}

void stable_sort_by_key(std::span<const double> keys, std::span<std::size_t> order)
{
    std::vector<std::size_t> buf(order.size());
    merge_sort(keys, order, buf);
}

} // namespace par
} // namespace wsprox
