#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wsprox/parallel.hpp"
#include "wsprox/types.hpp"

namespace wsprox {

/**
 * Sticky particles on a line.
 *
 * Index order is spatial order. A particle with mass zero is a hole left
 * behind by a merge (or right padding); its position and velocity are never
 * read. After a merge the surviving particle sits at the leftmost index of
 * its cluster, so a cluster spans its head up to the next particle.
 *
 * `destination(i) = x[i] + v[i]` is where particle i ends up after one time
 * unit if nothing else hits it.
 */
struct ParticleSystem
{
    std::vector<double> x;
    std::vector<double> v;
    std::vector<std::int64_t> m;

    ParticleSystem() = default;
    ParticleSystem(std::vector<double> x_, std::vector<double> v_, std::vector<std::int64_t> m_);

    /// Unit masses, zero velocities: the isotonic regression setup.
    static ParticleSystem at_rest(std::span<const double> y);

    std::size_t size() const noexcept { return x.size(); }
    bool is_hole(std::size_t i) const noexcept { return m[i] == 0; }
    double destination(std::size_t i) const noexcept { return x[i] + v[i]; }

    std::int64_t total_mass() const;
    /// Sum of m_i (x_i + v_i) over particles.
    double total_destination_moment() const;
    /// Sum of m_i v_i over particles.
    double total_momentum() const;

    /// Appends zero-mass entries on the right up to the next power of two.
    void pad_to_power_of_two();
    void truncate(std::size_t n);
};

/// Counters describing one solver run.
struct SolverStats
{
    std::int64_t rounds = 0;          ///< imminent: rounds executed, including the final no-merge round
    std::int64_t merging_rounds = 0;  ///< imminent: rounds that merged at least one pair
    std::int64_t clusters = 0;        ///< end: iterations (one per final cluster)
    std::int64_t recursion_depth = 0; ///< search: ceil(log2 n_padded)
    std::int64_t probes_per_merge_max = 0; ///< search: rightmost-collision calls in the busiest merge
    std::int64_t total_work_ops = 0;  ///< elements visited by the solver kernels
    std::chrono::duration<double> wall_time{0.0};
};

/// Sorts `w` and sets up unit particles moving along -alpha * grad R.
/// Requires d >= 2.
std::pair<ParticleSystem, SortPermutation> init_particles(const WeightVector& w, double alpha,
                                                          Parallelism par = {});

/**
 * Rightmost collision of the particle at `i` when it is treated as the
 * leftmost particle: argmin over k in [i, limit] of the mass-weighted mean
 * destination of particles i..k. Holes are skipped. Ties resolve to the
 * largest k, so grazing contacts merge.
 *
 * Throws PreconditionError if `i` is a hole or `limit` is out of range.
 */
std::size_t rightmost_collision(const ParticleSystem& ps, std::size_t i, std::size_t limit,
                                std::int64_t* work = nullptr);

/**
 * Merges every particle in [i, j] into index i: mass-weighted mean position
 * and velocity, summed mass; the rest of the range becomes holes.
 */
void perform_collisions(ParticleSystem& ps, std::size_t i, std::size_t j);

/// One final cluster of a solved system.
struct Cluster
{
    std::size_t start = 0; ///< index of the head in sorted order
    std::size_t size = 0;  ///< number of indices spanned (head plus trailing holes)
    std::int64_t mass = 0;
    double value = 0.0;    ///< shared final value
    bool zeroed = false;   ///< set by the l1 step of the composite prox
};

struct ClusterSolution
{
    std::vector<Cluster> blocks;
    std::vector<double> per_index_value;
};

/// Reads the clusters of a solved system; the value of a cluster is the
/// destination of its head. Throws PreconditionError if index 0 is a hole.
ClusterSolution extract_clusters(const ParticleSystem& ps);

} // namespace wsprox
