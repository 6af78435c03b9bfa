#include "wsprox/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wsprox/error.hpp"

namespace wsprox {
namespace {

std::vector<double> sorted_copy(std::span<const double> values, Parallelism par)
{
    std::vector<double> x(values.begin(), values.end());
    if (par.threads <= 1) {
        std::sort(x.begin(), x.end());
        return x;
    }
    const SortPermutation perm = stable_sort_permutation(values, par);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = values[perm.indices[i]];
    return x;
}

// Sum over i of sum_{j<i} (x_i - x_j) for sorted x, written as the running
// form (i-1) x_i - s_i. Values are shifted by x_0 (R is translation invariant).
double pair_sum_fast(const std::vector<double>& x)
{
    const double base = x.front();
    double prefix = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i] - base;
        total += static_cast<double>(i) * xi - prefix;
        prefix += xi;
    }
    return total;
}

double pair_sum_parallel(const std::vector<double>& x)
{
    const std::size_t d = x.size();
    const double base = x.front();
    std::vector<double> shifted(d), prefix(d);
    par::for_blocks((d + par::kScanBlock - 1) / par::kScanBlock, d >= par::kTaskGrain, [&](std::size_t b) {
        const std::size_t hi = std::min(d, (b + 1) * par::kScanBlock);
        for (std::size_t k = b * par::kScanBlock; k < hi; ++k)
            shifted[k] = x[k] - base;
    });
    par::exclusive_scan(shifted, prefix);
    return par::pairwise_reduce<double>(0, d, [&](std::size_t i) {
        return static_cast<double>(i) * shifted[i] - prefix[i];
    });
}

double pair_sum_naive(const std::vector<double>& x)
{
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            total += std::abs(x[i] - x[j]);
    }
    return total;
}

} // namespace

double eval_R(const WeightVector& w, EvalMode mode, Parallelism par)
{
    const std::size_t d = w.size();
    if (d == 1)
        return 0.0;

    double pairs = 0.0;
    switch (mode) {
    case EvalMode::naive:
        pairs = pair_sum_naive(sorted_copy(w.values(), {}));
        break;
    case EvalMode::fast:
        pairs = pair_sum_fast(sorted_copy(w.values(), {}));
        break;
    case EvalMode::parallel:
        par::run(par, [&] { pairs = pair_sum_parallel(sorted_copy(w.values(), par)); });
        break;
    }
    return pairs / static_cast<double>(d - 1);
}

std::vector<double> sorted_subgradient_coefficients(std::size_t d)
{
    if (d < 2)
        throw DomainError("subgradient coefficients need d >= 2, got d = " + std::to_string(d));
    std::vector<double> c(d);
    const double denom = static_cast<double>(d - 1);
    // 0-based k: (2(k+1) - d - 1) = 2k + 1 - d. Symmetric, so the sum cancels pairwise.
    for (std::size_t k = 0; k < d; ++k)
        c[k] = (2.0 * static_cast<double>(k) + 1.0 - static_cast<double>(d)) / denom;
    return c;
}

SortPermutation stable_sort_permutation(std::span<const double> values, Parallelism par)
{
    SortPermutation perm;
    perm.indices.resize(values.size());
    std::iota(perm.indices.begin(), perm.indices.end(), std::size_t{0});
    par::run(par, [&] { par::stable_sort_by_key(values, perm.indices); });
    return perm;
}

std::vector<double> subgradient_R(const WeightVector& w)
{
    const std::size_t d = w.size();
    const std::vector<double> c = sorted_subgradient_coefficients(d);
    const SortPermutation perm = stable_sort_permutation(w.values());
    std::vector<double> g(d);
    for (std::size_t k = 0; k < d; ++k)
        g[perm.indices[k]] = c[k];
    return g;
}

WeightMetrics metrics(const WeightVector& w, double zero_tol)
{
    if (!(zero_tol >= 0.0))
        throw DomainError("zero_tol must be >= 0");

    std::vector<double> nonzero;
    nonzero.reserve(w.size());
    for (double x : w) {
        if (std::abs(x) > zero_tol)
            nonzero.push_back(x);
    }

    WeightMetrics out;
    out.nonzero = nonzero.size();
    out.sparsity = static_cast<double>(w.size() - nonzero.size()) / static_cast<double>(w.size());
    if (nonzero.empty())
        return out;

    out.distinct_nonzero = count_distinct(nonzero);
    out.distinct_ratio = static_cast<double>(out.distinct_nonzero) / static_cast<double>(out.nonzero);
    out.weight_sharing = 1.0 - out.distinct_ratio;
    return out;
}

std::size_t count_distinct(std::span<const double> values)
{
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    // -0.0 == 0.0, so signed zeros land in one class.
    return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

} // namespace wsprox
