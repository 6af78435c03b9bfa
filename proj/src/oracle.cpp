#include "wsprox/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "wsprox/error.hpp"

namespace wsprox::oracle {

std::vector<double> isotonic_partition(std::span<const double> y, std::span<const std::int64_t> mass)
{
    const std::size_t d = y.size();
    if (d == 0)
        throw DomainError("isotonic_partition: empty input");
    if (d > kMaxPartitionSize)
        throw DomainError("isotonic_partition: d = " + std::to_string(d) + " exceeds " +
                          std::to_string(kMaxPartitionSize));
    if (!mass.empty() && mass.size() != d)
        throw DomainError("isotonic_partition: mass length differs from y");
    const auto m = [&](std::size_t k) { return mass.empty() ? 1.0 : static_cast<double>(mass[k]); };

    std::vector<double> best, fit(d);
    double best_err = std::numeric_limits<double>::infinity();

    // Bit k of `cuts` set means a block boundary between k and k+1.
    const std::uint32_t candidates = std::uint32_t{1} << (d - 1);
    for (std::uint32_t cuts = 0; cuts < candidates; ++cuts) {
        bool feasible = true;
        double prev = -std::numeric_limits<double>::infinity();
        std::size_t s = 0;
        for (std::size_t k = 0; k < d && feasible; ++k) {
            const bool boundary = k + 1 == d || ((cuts >> k) & 1u);
            if (!boundary)
                continue;
            double sum = 0.0, mass_sum = 0.0;
            for (std::size_t t = s; t <= k; ++t) {
                sum += m(t) * y[t];
                mass_sum += m(t);
            }
            const double mean = sum / mass_sum;
            if (mean < prev)
                feasible = false;
            prev = mean;
            std::fill(fit.begin() + static_cast<std::ptrdiff_t>(s), fit.begin() + static_cast<std::ptrdiff_t>(k) + 1,
                      mean);
            s = k + 1;
        }
        if (!feasible)
            continue;
        double err = 0.0;
        for (std::size_t k = 0; k < d; ++k)
            err += m(k) * (y[k] - fit[k]) * (y[k] - fit[k]);
        if (err < best_err) {
            best_err = err;
            best = fit;
        }
    }
    return best;
}

double prox_objective(std::span<const double> u, std::span<const double> w, double alpha, double beta)
{
    const std::size_t d = u.size();
    double pairs = 0.0, l1 = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < i; ++j)
            pairs += std::abs(u[i] - u[j]);
        l1 += std::abs(u[i]);
        sq += (u[i] - w[i]) * (u[i] - w[i]);
    }
    const double r = d > 1 ? pairs / static_cast<double>(d - 1) : 0.0;
    return alpha * r + beta * l1 + 0.5 * sq;
}

std::vector<double> prox_numeric(std::span<const double> w, double alpha, double beta, std::int64_t iters,
                                 std::uint64_t seed)
{
    if (!(alpha >= 0.0) || !(beta >= 0.0))
        throw DomainError("prox_numeric: alpha and beta must be >= 0");
    if (iters < 1)
        throw DomainError("prox_numeric: iters must be positive");
    require_finite(w, "prox_numeric input");
    const std::size_t d = w.size();
    std::vector<double> u(w.begin(), w.end());
    if (alpha == 0.0 && beta == 0.0)
        return u;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    for (double& x : u)
        x += 0.1 * (alpha + beta) * jitter(rng);

    // The objective is 1-strongly convex: step 1/t with t-weighted averaging.
    std::vector<double> g(d), avg(d, 0.0);
    const double inv = d > 1 ? 1.0 / static_cast<double>(d - 1) : 0.0;
    for (std::int64_t t = 1; t <= iters; ++t) {
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                s += static_cast<double>((u[i] > u[j]) - (u[i] < u[j]));
            const double l1 = static_cast<double>((u[i] > 0.0) - (u[i] < 0.0));
            g[i] = alpha * inv * s + beta * l1 + (u[i] - w[i]);
        }
        const double step = 1.0 / static_cast<double>(t);
        for (std::size_t i = 0; i < d; ++i)
            u[i] -= step * g[i];
        const double weight = 2.0 / static_cast<double>(t + 1);
        for (std::size_t i = 0; i < d; ++i)
            avg[i] += weight * (u[i] - avg[i]);
    }
    return avg;
}

} // namespace wsprox::oracle
