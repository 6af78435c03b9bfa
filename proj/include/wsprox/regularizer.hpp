#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wsprox/parallel.hpp"
#include "wsprox/types.hpp"

namespace wsprox {

/// Evaluation strategy for the weight-sharing penalty.
enum class EvalMode
{
    naive,    ///< O(d^2) double loop over sorted values
    fast,     ///< sort + running prefix sum, O(d log d)
    parallel, ///< parallel sort, blocked scan, pairwise reduction
};

/**
 * Weight-sharing penalty: mean absolute pairwise difference scaled by
 * 1/(d-1). Returns 0 for d == 1.
 *
 * All modes canonicalize by sorting first, so permuting `w` never changes
 * the result.
 */
double eval_R(const WeightVector& w, EvalMode mode = EvalMode::fast, Parallelism par = {});

/// c_i = (2i - d - 1)/(d - 1) for sorted positions i = 1..d. Requires d >= 2.
std::vector<double> sorted_subgradient_coefficients(std::size_t d);

/// Stable ascending sort permutation of `values` (sorted position -> index).
SortPermutation stable_sort_permutation(std::span<const double> values, Parallelism par = {});

/// Canonical subgradient: the gradient of the hyperplane active for the
/// stable sort order. Requires d >= 2.
std::vector<double> subgradient_R(const WeightVector& w);

struct WeightMetrics
{
    double sparsity = 0.0;            ///< fraction with |w_i| <= zero_tol
    double weight_sharing = 0.0;      ///< 1 - distinct_nonzero / nonzero
    double distinct_ratio = 0.0;      ///< distinct_nonzero / nonzero (0 when no nonzero)
    std::size_t distinct_nonzero = 0; ///< exact-equality classes among nonzero entries
    std::size_t nonzero = 0;
};

WeightMetrics metrics(const WeightVector& w, double zero_tol = 0.0);

/// Number of exact-equality classes among all entries (zeros included).
std::size_t count_distinct(std::span<const double> values);

} // namespace wsprox
