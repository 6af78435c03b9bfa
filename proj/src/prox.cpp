#include "wsprox/prox.hpp"

#include <cmath>
#include <numeric>

#include "wsprox/error.hpp"
#include "wsprox/regularizer.hpp"

namespace wsprox {
namespace {

double sign(double x) noexcept
{
    return static_cast<double>((x > 0.0) - (x < 0.0));
}

} // namespace

std::vector<double> prox_l1(const WeightVector& w, double beta)
{
    if (!(beta >= 0.0))
        throw DomainError("beta must be >= 0");
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = w[i];
        out[i] = x > beta ? x - beta : (x < -beta ? x + beta : 0.0);
    }
    return out;
}

ProxResult prox_composite(const WeightVector& w, const ProxParams& p, const ProxOptions& opts)
{
    p.validate();
    const std::size_t d = w.size();

    ProxResult res;
    ParticleSystem ps;
    if (d == 1) {
        // R vanishes; only the l1 and rewinding steps apply.
        ps = ParticleSystem::at_rest(w.values());
        res.permutation.indices = {0};
    } else {
        auto [sys, perm] = init_particles(w, p.alpha, opts.par);
        ps = std::move(sys);
        res.permutation = std::move(perm);
        res.stats = solve(ps, opts.algo, opts.par);
    }

    res.clusters = extract_clusters(ps);
    const double keep = (1.0 - p.rho) * opts.displacement_scale;
    for (Cluster& c : res.clusters.blocks) {
        double x = ps.x[c.start];
        double v = ps.v[c.start];
        const double y = x + v;
        // The flag uses the open dead zone; a cluster landing exactly on
        // +-beta still goes to 0, so rho = 1 is exactly w * 1{|w| > beta}.
        c.zeroed = std::abs(y) < p.beta;
        v -= p.beta * sign(y);
        if (p.beta > 0.0 && std::abs(y) <= p.beta) {
            x = 0.0;
            v = 0.0;
        }
        c.value = x + keep * v;
        for (std::size_t k = c.start; k < c.start + c.size; ++k)
            res.clusters.per_index_value[k] = c.value;
    }

    res.values.resize(d);
    for (std::size_t k = 0; k < d; ++k)
        res.values[res.permutation.indices[k]] = res.clusters.per_index_value[k];
    return res;
}

std::vector<double> prox_R(const WeightVector& w, double alpha, const ProxOptions& opts)
{
    return prox_composite(w, ProxParams{alpha, 0.0, 0.0, 1.0}, opts).values;
}

Certificate verify_prox_optimality(const WeightVector& w_in, std::span<const double> w_out, double alpha,
                                   double tol)
{
    const std::size_t d = w_in.size();
    if (w_out.size() != d)
        throw DomainError("verify_prox_optimality: length mismatch");
    if (d == 1) {
        if (std::abs(w_out[0] - w_in[0]) <= tol * (1.0 + std::abs(w_in[0])))
            return {};
        return {false, "d = 1: prox of R is the identity"};
    }

    const SortPermutation perm = stable_sort_permutation(w_in.values());
    const std::vector<double> c = sorted_subgradient_coefficients(d);
    std::vector<double> y(d), fit(d);
    for (std::size_t k = 0; k < d; ++k) {
        y[k] = w_in[perm.indices[k]] - alpha * c[k];
        fit[k] = w_out[perm.indices[k]];
    }
    return verify_solution(y, {}, fit, tol);
}

} // namespace wsprox
