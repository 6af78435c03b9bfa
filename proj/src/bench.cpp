#include "wsprox/bench.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wsprox/error.hpp"
#include "wsprox/solvers.hpp"

namespace wsprox {

std::vector<double> gen_adversarial_staircase(std::size_t d, double eps)
{
    if (d < 3)
        throw DomainError("staircase needs d >= 3");
    if (!(eps > 0.0 && eps < 1.0 / static_cast<double>(d)))
        throw DomainError("staircase needs 0 < eps < 1/d");

    const std::size_t left = (d + 1) / 2;
    std::vector<double> y(d);
    for (std::size_t i = 0; i < left; ++i)
        y[i] = 1.0 - 2.0 * static_cast<double>(i) / static_cast<double>(d - 1);
    for (std::size_t i = left; i < d; ++i)
        y[i] = static_cast<double>(i - left + 1) * eps;
    return y;
}

double staircase_default_eps(std::size_t d)
{
    const double dd = static_cast<double>(d);
    return 1.0 / (dd * dd);
}

const char* to_string(Distribution dist) noexcept
{
    switch (dist) {
    case Distribution::uniform: return "uniform";
    case Distribution::gaussian: return "gaussian";
    case Distribution::presorted: return "presorted";
    case Distribution::adversarial: return "adversarial";
    case Distribution::clustered: return "clustered";
    }
    return "?";
}

Distribution parse_distribution(std::string_view name)
{
    for (Distribution d : {Distribution::uniform, Distribution::gaussian, Distribution::presorted,
                           Distribution::adversarial, Distribution::clustered}) {
        if (name == to_string(d))
            return d;
    }
    throw DomainError("unknown distribution '" + std::string(name) + "'");
}

std::vector<double> make_input(Distribution dist, std::size_t d, std::uint64_t seed)
{
    std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(d) * 0x9E3779B97F4A7C15ull) ^
                        (static_cast<std::uint64_t>(dist) << 56));
    std::vector<double> y(d);
    switch (dist) {
    case Distribution::uniform: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& v : y)
            v = u(rng);
        break;
    }
    case Distribution::gaussian: {
        std::normal_distribution<double> g(0.0, 1.0);
        for (double& v : y)
            v = g(rng);
        break;
    }
    case Distribution::presorted:
        for (std::size_t i = 0; i < d; ++i)
            y[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(d);
        break;
    case Distribution::adversarial:
        y = gen_adversarial_staircase(d, staircase_default_eps(d));
        break;
    case Distribution::clustered: {
        const auto levels = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
        std::uniform_int_distribution<std::size_t> pick(0, levels - 1);
        std::normal_distribution<double> noise(0.0, 0.01);
        for (double& v : y)
            v = static_cast<double>(pick(rng)) / static_cast<double>(levels) + noise(rng);
        break;
    }
    }
    return y;
}

std::vector<BenchRow> run_benchmark(const BenchSpec& spec)
{
    if (spec.repeats < 1)
        throw DomainError("bench: repeats must be >= 1");
    for (int t : spec.thread_counts) {
        if (t < 1)
            throw DomainError("bench: thread counts must be >= 1");
    }

    std::vector<BenchRow> rows;
    for (std::size_t d : spec.sizes) {
        for (Distribution dist : spec.distributions) {
            const std::vector<double> y = make_input(dist, d, spec.seed);
            for (Algorithm algo : spec.algos) {
                for (int threads : spec.thread_counts) {
                    for (int r = 0; r < spec.repeats; ++r) {
                        ParticleSystem ps = ParticleSystem::at_rest(y);
                        const SolverStats s = solve(ps, algo, Parallelism{threads});
                        rows.push_back(BenchRow{d, dist, algo, threads, r, s.wall_time.count(), s.rounds,
                                                s.clusters, s.recursion_depth, s.probes_per_merge_max});
                    }
                }
            }
        }
    }
    return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows)
{
    os << kBenchCsvHeader << '\n';
    for (const BenchRow& r : rows) {
        os << r.d << ',' << to_string(r.distribution) << ',' << to_string(r.algo) << ',' << r.threads << ','
           << r.repeat << ',' << r.wall_time << ',' << r.rounds << ',' << r.clusters << ',' << r.recursion_depth
           << ',' << r.max_probes << '\n';
    }
}

} // namespace wsprox
