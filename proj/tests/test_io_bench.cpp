#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wsprox/bench.hpp"
#include "wsprox/error.hpp"
#include "wsprox/io.hpp"
#include "wsprox/oracle.hpp"

using namespace wsprox;

TEST_CASE("text round trip is exact")
{
    const std::vector<double> v{0.1, -1e-300, 3.0, 1.0 / 3.0, 6.02214076e23, -0.0};
    std::stringstream ss;
    io::write_text(ss, v);
    const std::vector<double> back = io::read_vector(ss);
    CHECK(back == v);
}

TEST_CASE("binary round trip is exact")
{
    const std::vector<double> v{0.1, -2.5, std::numeric_limits<double>::denorm_min(), 1e308};
    std::stringstream ss;
    io::write_binary(ss, v);
    const std::string bytes = ss.str();
    REQUIRE(bytes.size() == 16 + 8 * v.size());
    CHECK(bytes.substr(0, 8) == "WSPROXF8");
    CHECK(static_cast<unsigned char>(bytes[8]) == 4);
    std::istringstream in(bytes);
    CHECK(io::read_vector(in) == v);
}

TEST_CASE("text parsing skips comments and blanks")
{
    std::istringstream in("# header\n1.5\n\n  -2 \n# more\n3e-1\n");
    CHECK(io::read_vector(in) == std::vector<double>{1.5, -2.0, 0.3});
}

TEST_CASE("malformed input is rejected")
{
    std::istringstream words("1\nabc\n");
    CHECK_THROWS_AS(io::read_vector(words), InvalidInput);
    std::istringstream nan("1\nnan\n");
    CHECK_THROWS_AS(io::read_vector(nan), InvalidInput);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(io::read_vector(empty), InvalidInput);
    std::istringstream trailing("1.0x\n");
    CHECK_THROWS_AS(io::read_vector(trailing), InvalidInput);
    std::istringstream truncated(std::string("WSPROXF8") + std::string(8, '\0').replace(0, 1, 1, '\3'));
    CHECK_THROWS_AS(io::read_vector(truncated), InvalidInput);
    CHECK_THROWS_AS(io::read_vector_file("/nonexistent/path/to/vector.txt"), InvalidInput);
}

TEST_CASE("prox result JSON schema")
{
    const ProxResult r = prox_composite(WeightVector{0, 1, 5}, ProxParams{1.0, 0.0, 0.0});
    const nlohmann::json j = io::prox_result_json(r, false);
    REQUIRE(j.contains("values"));
    REQUIRE(j.contains("clusters"));
    REQUIRE(j.contains("stats"));
    CHECK(j["values"].size() == 3);
    for (const auto& c : j["clusters"]) {
        CHECK(c.contains("start"));
        CHECK(c.contains("size"));
        CHECK(c.contains("value"));
        CHECK(c.contains("zeroed"));
    }
    CHECK_FALSE(j["stats"].contains("wall_time"));
    CHECK(io::prox_result_json(r, true)["stats"].contains("wall_time"));
    for (const char* key : {"rounds", "merging_rounds", "clusters", "recursion_depth", "probes_per_merge_max"})
        CHECK(j["stats"].contains(key));
}

TEST_CASE("gen_adversarial_staircase examples")
{
    const std::vector<double> five = gen_adversarial_staircase(5, 0.01);
    const std::vector<double> expected{1, 0.5, 0, 0.01, 0.02};
    REQUIRE(five.size() == 5);
    for (std::size_t k = 0; k < 5; ++k)
        CHECK(five[k] == doctest::Approx(expected[k]).epsilon(1e-15));
    CHECK(gen_adversarial_staircase(3, 0.1) == std::vector<double>{1, 0, 0.1});
    CHECK(gen_adversarial_staircase(4, 0.1).size() == 4);
    CHECK_THROWS_AS(gen_adversarial_staircase(2, 0.1), DomainError);
    CHECK_THROWS_AS(gen_adversarial_staircase(5, 0.0), DomainError);
    CHECK_THROWS_AS(gen_adversarial_staircase(5, 0.2), DomainError);
}

TEST_CASE("staircase collapses to one block at the mean")
{
    for (std::size_t d = 3; d <= 20; ++d) {
        const std::vector<double> y = gen_adversarial_staircase(d, staircase_default_eps(d));
        const std::vector<double> fit = oracle::isotonic_partition(y);
        const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(d);
        for (double f : fit)
            CHECK(f == doctest::Approx(mean).epsilon(1e-12));
    }
    // A coarse tail rises above the pooled head and splits off.
    const std::vector<double> coarse = gen_adversarial_staircase(20, 0.049);
    const std::vector<double> fit = oracle::isotonic_partition(coarse);
    CHECK(fit.front() < fit.back());
}

TEST_CASE("make_input is deterministic")
{
    for (Distribution d : {Distribution::uniform, Distribution::gaussian, Distribution::presorted,
                           Distribution::adversarial, Distribution::clustered}) {
        CAPTURE(to_string(d));
        const auto a = make_input(d, 257, 3);
        CHECK(a.size() == 257);
        CHECK(a == make_input(d, 257, 3));
        CHECK(parse_distribution(to_string(d)) == d);
    }
    const auto sorted = make_input(Distribution::presorted, 100, 1);
    CHECK(std::is_sorted(sorted.begin(), sorted.end()));
    CHECK_THROWS_AS(parse_distribution("zipf"), DomainError);
}

TEST_CASE("run_benchmark examples")
{
    BenchSpec spec;
    spec.sizes = {4096};
    spec.distributions = {Distribution::adversarial};
    spec.algos = {Algorithm::imminent};
    const auto rows = run_benchmark(spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rounds >= 2047);

    BenchSpec s2;
    s2.sizes = {1024, 300};
    s2.distributions = {Distribution::uniform, Distribution::presorted};
    s2.algos = {Algorithm::search, Algorithm::end};
    s2.thread_counts = {1, 2};
    s2.repeats = 2;
    const auto r2 = run_benchmark(s2);
    CHECK(r2.size() == 2 * 2 * 2 * 2 * 2);
    for (const BenchRow& r : r2) {
        if (r.algo == Algorithm::search && r.d == 1024)
            CHECK(r.recursion_depth == 10);
        if (r.algo == Algorithm::end && r.distribution == Distribution::presorted)
            CHECK(r.clusters == static_cast<std::int64_t>(r.d));
        CHECK(r.wall_time >= 0.0);
    }

    std::ostringstream csv;
    write_bench_csv(csv, rows);
    const std::string text = csv.str();
    CHECK(text.rfind(std::string(kBenchCsvHeader) + "\n", 0) == 0);
    CHECK(text.find("\n4096,adversarial,imminent,1,0,") != std::string::npos);

    BenchSpec bad = spec;
    bad.repeats = 0;
    CHECK_THROWS_AS(run_benchmark(bad), DomainError);
    CHECK_THROWS_AS(parse_algorithm("quick"), DomainError);
}
