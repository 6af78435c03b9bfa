#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wsprox/parallel.hpp"

namespace wsprox {

/// Isotonic solver under test: (y, masses or empty) -> per-index fit.
using IsotonicSolverFn = std::function<std::vector<double>(std::span<const double>, std::span<const std::int64_t>)>;

struct NamedSolver
{
    std::string name;
    IsotonicSolverFn fn;
};

/// The four built-in collision solvers wrapped as isotonic solvers.
std::vector<NamedSolver> builtin_solvers(Parallelism par = {});

/**
 * Random test vector of length d drawn from a mix of uniform, gaussian,
 * few-level (many exact duplicates), sorted and reversed inputs.
 */
std::vector<double> random_test_vector(std::mt19937_64& rng, std::size_t d);

struct SelftestOptions
{
    std::uint64_t seed = 20240101;
    std::size_t oracle_instances = 2000;   ///< random isotonic problems, d in [1, 12]
    std::size_t property_instances = 200;  ///< random prox problems per property
    Parallelism par{};
    std::vector<NamedSolver> solvers;      ///< empty: builtin_solvers(par)
};

struct SelftestCase
{
    std::string name;
    bool passed = true;
    std::string detail;
};

struct SelftestReport
{
    std::vector<SelftestCase> cases;

    bool passed() const;
};

SelftestReport run_selftest(const SelftestOptions& opts = {});
void print_report(std::ostream& os, const SelftestReport& report);

} // namespace wsprox
