#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "wsprox/types.hpp"

namespace wsprox {

/**
 * Staircase input that forces the imminent-collisions solver into one merge
 * per round: ceil(d/2) values descending linearly from 1 to (about) 0,
 * followed by eps, 2 eps, ..., floor(d/2) eps. Requires d >= 3 and
 * 0 < eps < 1/d.
 */
std::vector<double> gen_adversarial_staircase(std::size_t d, double eps);

/// Default eps for staircase benchmarks. Small enough that every particle
/// ends in one cluster.
double staircase_default_eps(std::size_t d);

enum class Distribution
{
    uniform,
    gaussian,
    presorted,
    adversarial,
    clustered,
};

const char* to_string(Distribution dist) noexcept;
Distribution parse_distribution(std::string_view name);

/// Benchmark input of length d; depends only on (dist, d, seed).
std::vector<double> make_input(Distribution dist, std::size_t d, std::uint64_t seed);

struct BenchSpec
{
    std::vector<std::size_t> sizes;
    std::vector<Distribution> distributions;
    std::vector<Algorithm> algos;
    std::vector<int> thread_counts{1};
    int repeats = 1;
    std::uint64_t seed = 0;
};

struct BenchRow
{
    std::size_t d = 0;
    Distribution distribution = Distribution::uniform;
    Algorithm algo = Algorithm::pava;
    int threads = 1;
    int repeat = 0;
    double wall_time = 0.0; ///< seconds
    std::int64_t rounds = 0;
    std::int64_t clusters = 0;
    std::int64_t recursion_depth = 0;
    std::int64_t max_probes = 0;
};

/// Solves isotonic problems (zero velocities) for every combination in `spec`.
std::vector<BenchRow> run_benchmark(const BenchSpec& spec);

inline constexpr const char* kBenchCsvHeader =
    "d,distribution,algo,threads,repeat,wall_time,rounds,clusters,recursion_depth,max_probes";

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

} // namespace wsprox
