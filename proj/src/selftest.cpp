#include "wsprox/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "wsprox/oracle.hpp"
#include "wsprox/prox.hpp"
#include "wsprox/solvers.hpp"

namespace wsprox {
namespace {

constexpr double kCounterexample[] = {0.7, 1.0, 0.9, 0.99};
constexpr double kCounterexampleFit[] = {0.7, 0.95, 0.95, 0.99};

double max_rel_diff(std::span<const double> a, std::span<const double> b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
    return worst;
}

std::string fmt(std::span<const double> v)
{
    std::ostringstream os;
    os.precision(12);
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? ", " : "") << v[i];
    os << ']';
    return os.str();
}

// Checks one solver output: certificate first, so a broken solver is
// reported by the condition it violates.
std::string check_fit(std::span<const double> y, std::span<const double> fit, std::span<const double> expected,
                      double tol)
{
    if (fit.size() != y.size())
        return "output length " + std::to_string(fit.size()) + " != " + std::to_string(y.size());
    const Certificate cert = verify_solution(y, {}, fit, tol);
    if (!cert)
        return "certificate failed on y=" + fmt(y) + ": " + cert.diagnostic;
    if (max_rel_diff(fit, expected) > tol)
        return "y=" + fmt(y) + " fit=" + fmt(fit) + " expected=" + fmt(expected);
    return {};
}

void add(SelftestReport& report, std::string name, const std::string& failure)
{
    report.cases.push_back(SelftestCase{std::move(name), failure.empty(), failure});
}

} // namespace

std::vector<NamedSolver> builtin_solvers(Parallelism par)
{
    std::vector<NamedSolver> out;
    for (Algorithm a : kAllAlgorithms) {
        out.push_back({to_string(a), [a, par](std::span<const double> y, std::span<const std::int64_t> m) {
                           return isotonic_fit(y, m, a, par);
                       }});
    }
    return out;
}

std::vector<double> random_test_vector(std::mt19937_64& rng, std::size_t d)
{
    std::vector<double> y(d);
    std::uniform_int_distribution<int> kind(0, 4);
    switch (kind(rng)) {
    case 0: {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (double& v : y)
            v = u(rng);
        break;
    }
    case 1: {
        std::normal_distribution<double> g(0.0, 2.0);
        for (double& v : y)
            v = g(rng);
        break;
    }
    case 2: {
        std::uniform_int_distribution<int> level(-3, 3);
        for (double& v : y)
            v = 0.5 * level(rng);
        break;
    }
    case 3: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& v : y)
            v = u(rng);
        std::sort(y.begin(), y.end());
        break;
    }
    default: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& v : y)
            v = u(rng);
        std::sort(y.begin(), y.end(), std::greater<>());
        break;
    }
    }
    return y;
}

bool SelftestReport::passed() const
{
    return std::all_of(cases.begin(), cases.end(), [](const SelftestCase& c) { return c.passed; });
}

SelftestReport run_selftest(const SelftestOptions& opts)
{
    const std::vector<NamedSolver> solvers = opts.solvers.empty() ? builtin_solvers(opts.par) : opts.solvers;
    SelftestReport report;

    for (const NamedSolver& s : solvers) {
        const std::vector<double> fit = s.fn(kCounterexample, {});
        std::string failure = check_fit(kCounterexample, fit, kCounterexampleFit, 1e-12);
        if (!failure.empty())
            failure += " (expected [0.7, 0.95, 0.95, 0.99])";
        add(report, "counterexample[" + s.name + "] expects [0.7, 0.95, 0.95, 0.99]", failure);
    }
    {
        const double third = (1.0 + 0.9 + 0.99) / 3.0;
        const double wrong[] = {0.7, third, third, third};
        const Certificate cert = verify_solution(kCounterexample, {}, wrong, 1e-9);
        add(report, "counterexample-rejects-three-way-average",
            cert ? "certificate accepted [0.7, 0.9633, 0.9633, 0.9633]" : std::string{});
    }

    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> dim(1, 12);
    std::vector<std::vector<double>> instances(opts.oracle_instances);
    for (auto& y : instances)
        y = random_test_vector(rng, dim(rng));
    for (const NamedSolver& s : solvers) {
        std::string failure;
        for (const auto& y : instances) {
            failure = check_fit(y, s.fn(y, {}), oracle::isotonic_partition(y), 1e-9);
            if (!failure.empty())
                break;
        }
        add(report, "oracle-equivalence[" + s.name + "] " + std::to_string(instances.size()) + " instances", failure);
    }

    std::uniform_int_distribution<std::size_t> pdim(1, 64);
    std::uniform_real_distribution<double> coef(0.0, 2.0);
    for (Algorithm a : kAllAlgorithms) {
        std::string failure;
        for (std::size_t t = 0; t < opts.property_instances && failure.empty(); ++t) {
            const WeightVector w(random_test_vector(rng, pdim(rng)));
            const double alpha = coef(rng);
            const std::vector<double> out = prox_R(w, alpha, {a, opts.par});
            const Certificate cert = verify_prox_optimality(w, out, alpha, 1e-9);
            if (!cert)
                failure = "alpha=" + std::to_string(alpha) + " w=" + fmt(w.values()) + ": " + cert.diagnostic;
        }
        add(report, std::string("prox-optimality[") + to_string(a) + "]", failure);
    }

    {
        std::string failure;
        for (std::size_t t = 0; t < opts.property_instances && failure.empty(); ++t) {
            const WeightVector w(random_test_vector(rng, pdim(rng)));
            const double alpha = coef(rng), beta = coef(rng);
            const auto composite = prox_composite(w, {alpha, beta, 0.0, 1.0}, {Algorithm::search, opts.par}).values;
            const auto chained = prox_l1(WeightVector(prox_R(w, alpha, {Algorithm::search, opts.par})), beta);
            if (max_rel_diff(composite, chained) > 1e-12)
                failure = "composite " + fmt(composite) + " != chained " + fmt(chained);
        }
        add(report, "composition prox(aR + b l1) = prox_l1(prox_R)", failure);
    }

    {
        std::string failure;
        for (std::size_t t = 0; t < opts.property_instances && failure.empty(); ++t) {
            const WeightVector w(random_test_vector(rng, pdim(rng)));
            const double beta = coef(rng);
            const auto hard = prox_composite(w, {0.0, beta, 1.0, 1.0}, {Algorithm::search, opts.par}).values;
            const auto soft = prox_composite(w, {0.0, beta, 0.0, 1.0}, {Algorithm::search, opts.par}).values;
            const auto expected_soft = prox_l1(w, beta);
            for (std::size_t i = 0; i < w.size() && failure.empty(); ++i) {
                const double expected_hard = std::abs(w[i]) > beta ? w[i] : 0.0;
                if (hard[i] != expected_hard)
                    failure = "rho=1 gave " + std::to_string(hard[i]) + " for w=" + std::to_string(w[i]);
                else if (soft[i] != expected_soft[i])
                    failure = "rho=0 gave " + std::to_string(soft[i]) + " for w=" + std::to_string(w[i]);
            }
        }
        add(report, "rewinding limits (hard / soft thresholding)", failure);
    }

    {
        std::string failure;
        for (std::size_t t = 0; t < opts.property_instances && failure.empty(); ++t) {
            const WeightVector w(random_test_vector(rng, pdim(rng)));
            const double alpha = coef(rng);
            const auto out = prox_R(w, alpha, {Algorithm::search, opts.par});
            const double in_sum = std::accumulate(w.begin(), w.end(), 0.0);
            const double out_sum = std::accumulate(out.begin(), out.end(), 0.0);
            if (std::abs(in_sum - out_sum) > 1e-9 * std::max(1.0, std::abs(in_sum)))
                failure = "sum changed from " + std::to_string(in_sum) + " to " + std::to_string(out_sum);
            for (std::size_t i = 0; i < w.size() && failure.empty(); ++i) {
                for (std::size_t j = 0; j < w.size() && failure.empty(); ++j) {
                    if (w[i] <= w[j] && out[i] > out[j])
                        failure = "order of indices " + std::to_string(i) + ", " + std::to_string(j) + " flipped";
                    if (w[i] == w[j] && out[i] != out[j])
                        failure = "tie at indices " + std::to_string(i) + ", " + std::to_string(j) + " broken";
                }
            }
        }
        add(report, "invariants (mean, order, ties)", failure);
    }
    return report;
}

void print_report(std::ostream& os, const SelftestReport& report)
{
    std::size_t failed = 0;
    for (const SelftestCase& c : report.cases) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.passed) {
            os << "\n     " << c.detail;
            ++failed;
        }
        os << '\n';
    }
    os << report.cases.size() - failed << '/' << report.cases.size() << " suites passed\n";
}

} // namespace wsprox
