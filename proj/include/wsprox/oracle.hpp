#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsprox/types.hpp"

namespace wsprox::oracle {

/// Largest input accepted by isotonic_partition (2^(d-1) candidates).
inline constexpr std::size_t kMaxPartitionSize = 20;

/**
 * Brute-force weighted isotonic regression: tries every split of the indices
 * into contiguous blocks, keeps the splits whose block means are
 * nondecreasing, and returns the one with the smallest weighted squared
 * error. `mass` may be empty (unit masses).
 */
std::vector<double> isotonic_partition(std::span<const double> y, std::span<const std::int64_t> mass = {});

/// alpha*R(u) + beta*|u|_1 + 0.5*|u - w|^2
double prox_objective(std::span<const double> u, std::span<const double> w, double alpha, double beta);

/**
 * Subgradient descent on prox_objective with step 1/t and t-weighted iterate
 * averaging. Error is O(1/iters); use it as a bound check. `seed` jitters the
 * starting point around w. alpha = beta = 0 returns w exactly.
 */
std::vector<double> prox_numeric(std::span<const double> w, double alpha, double beta, std::int64_t iters,
                                 std::uint64_t seed);

} // namespace wsprox::oracle
