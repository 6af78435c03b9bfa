#pragma once

#include <vector>

#include "wsprox/parallel.hpp"
#include "wsprox/particles.hpp"
#include "wsprox/solvers.hpp"
#include "wsprox/types.hpp"

namespace wsprox {

/// Soft thresholding, elementwise.
std::vector<double> prox_l1(const WeightVector& w, double beta);

struct ProxOptions
{
    Algorithm algo = Algorithm::search;
    Parallelism par{};
    /// Multiplies the residual displacement before rewinding. The optimizer's
    /// lr_in_v variant passes the learning rate here; 1 gives the plain prox.
    double displacement_scale = 1.0;
};

struct ProxResult
{
    std::vector<double> values;   ///< in the caller's order
    ClusterSolution clusters;     ///< in sorted order; values are final outputs
    SortPermutation permutation;
    SolverStats stats;
};

/**
 * Proximal step for alpha*R + beta*l1 with rewinding rho.
 *
 * Weights are sorted and sent along -alpha * grad R, collisions are resolved,
 * clusters whose destination lands in [-beta, beta] (beta > 0) are set to 0
 * (flagged `zeroed` only strictly inside),
 * and the remaining displacement v (after l1 shrinkage) is scaled by
 * (1 - rho) before being added to the cluster's starting centre of mass.
 * With rho = 0 the result is prox_{beta l1}(prox_{alpha R}(w)). `p.eta` is
 * not used here.
 */
ProxResult prox_composite(const WeightVector& w, const ProxParams& p, const ProxOptions& opts = {});

/// prox of alpha*R alone.
std::vector<double> prox_R(const WeightVector& w, double alpha, const ProxOptions& opts = {});

/**
 * Certifies that `w_out` is the prox of alpha*R at `w_in`, by checking the
 * isotonic certificate on y = sorted(w_in) - alpha * coefficients.
 */
Certificate verify_prox_optimality(const WeightVector& w_in, std::span<const double> w_out, double alpha,
                                   double tol);

} // namespace wsprox
