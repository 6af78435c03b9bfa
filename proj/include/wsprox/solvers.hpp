#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wsprox/parallel.hpp"
#include "wsprox/particles.hpp"
#include "wsprox/types.hpp"

namespace wsprox {

// Collision solvers. Each one resolves every collision of `ps` in place and
// leaves the system in canonical form: one particle per final cluster at the
// cluster's leftmost index, holes elsewhere, destinations strictly increasing
// from cluster to cluster. Systems that already contain holes are accepted.

/// Sequential pool-adjacent-violators with a block stack. O(n).
SolverStats solve_pava(ParticleSystem& ps);

/// Rounds of simultaneous adjacent merges until a round merges nothing.
SolverStats solve_imminent(ParticleSystem& ps, Parallelism par = {});

/// Repeatedly merges the leftmost particle with its rightmost collision.
SolverStats solve_end(ParticleSystem& ps, Parallelism par = {});

/// Divide and conquer over padded halves with a binary search for the
/// single chain of collisions that crosses each midline.
SolverStats solve_search(ParticleSystem& ps, Parallelism par = {});

SolverStats solve(ParticleSystem& ps, Algorithm algo, Parallelism par = {});

struct IsotonicResult
{
    ClusterSolution clusters;
    SolverStats stats;
};

/**
 * Weighted isotonic regression: minimizes sum m_i (y_i - x_i)^2 subject to
 * x nondecreasing. `mass` may be empty (unit masses); otherwise it must be
 * positive and as long as `y`.
 */
IsotonicResult isotonic_solve(std::span<const double> y, std::span<const std::int64_t> mass, Algorithm algo,
                              Parallelism par = {});

std::vector<double> isotonic_fit(std::span<const double> y, std::span<const std::int64_t> mass = {},
                                 Algorithm algo = Algorithm::pava, Parallelism par = {});

struct Certificate
{
    bool ok = true;
    std::string diagnostic; ///< names the first violated condition, empty when ok

    explicit operator bool() const noexcept { return ok; }
};

/**
 * Checks that `fit` is the isotonic regression of (y, mass) without
 * re-solving. Blocks are maximal runs of equal fit values.
 *   (a) each block value is the mass-weighted mean of y over the block;
 *   (b) every adjacent pair inside a block collides:
 *       max_{j<=i} avg(y[j..i]) >= min_{j>=i+1} avg(y[i+1..j]);
 *   (c) no adjacent pair across a block boundary collides.
 * Comparisons are relative to `tol`. O(n^2).
 */
Certificate verify_solution(std::span<const double> y, std::span<const std::int64_t> mass,
                            std::span<const double> fit, double tol);

} // namespace wsprox
