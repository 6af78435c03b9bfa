#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wsprox/prox.hpp"
#include "wsprox/regularizer.hpp"
#include "wsprox/types.hpp"

namespace wsprox {

/// Differentiable part L of the training objective.
class SmoothLoss
{
public:
    virtual ~SmoothLoss() = default;
    virtual std::size_t dimension() const = 0;
    virtual double value(std::span<const double> w) const = 0;
    virtual void gradient(std::span<const double> w, std::span<double> grad) const = 0;
};

/// L(w) = |Xw - y|^2 / (2n)
class LeastSquaresLoss final : public SmoothLoss
{
public:
    LeastSquaresLoss(Eigen::MatrixXd design, Eigen::VectorXd targets);

    std::size_t dimension() const override { return static_cast<std::size_t>(design_.cols()); }
    double value(std::span<const double> w) const override;
    void gradient(std::span<const double> w, std::span<double> grad) const override;

    /// Largest eigenvalue of X^T X / n, the Lipschitz constant of the gradient.
    double lipschitz() const;

private:
    Eigen::MatrixXd design_;
    Eigen::VectorXd targets_;
};

enum class LrSchedule
{
    constant,
    cosine, ///< eta_t = eta * (1 + cos(pi t / steps)) / 2
};

enum class ProxVariant
{
    scale_coefficients, ///< prox of (eta alpha) R + (eta beta) l1
    lr_in_v,            ///< prox of alpha R + beta l1, residual displacement scaled by eta
};

struct TrainConfig
{
    ProxParams params{};
    std::int64_t steps = 1;
    double momentum = 0.0; ///< heavy-ball on grad L, in [0, 1)
    LrSchedule lr_schedule = LrSchedule::constant;
    ProxVariant variant = ProxVariant::scale_coefficients;
    std::uint64_t seed = 0;
    ProxOptions prox{};

    void validate() const;
};

struct Trajectory
{
    /// objective[0] is at w0, objective[t] after step t; size steps + 1.
    std::vector<double> objective;
    std::vector<double> weights;
    WeightMetrics final_metrics;
    std::size_t cluster_count = 0; ///< distinct values among all final weights
};

/// L(w) + alpha R(w) + beta |w|_1
double composite_objective(const SmoothLoss& loss, std::span<const double> w, double alpha, double beta);

/// Learning rate at 0-based step t.
double learning_rate(const TrainConfig& cfg, std::int64_t t);

Trajectory proximal_gd(const SmoothLoss& loss, const WeightVector& w0, const TrainConfig& cfg);

/// Baseline: w -= eta (grad L + alpha subgrad R + beta sign(w)), no prox.
Trajectory subgradient_gd(const SmoothLoss& loss, const WeightVector& w0, const TrainConfig& cfg);

struct ClusteredRegression
{
    Eigen::MatrixXd design; ///< n x d, standard normal entries
    Eigen::VectorXd targets;
    std::vector<double> true_weights;
};

/**
 * Synthetic clustered-lasso data: floor(zero_fraction * d) trailing zeros;
 * the remaining weights split into k contiguous groups, each with its own
 * nonzero value. Deterministic for a given seed.
 */
ClusteredRegression gen_clustered_regression(std::size_t d, std::size_t k, std::size_t n, double noise_sigma,
                                             double zero_fraction, std::uint64_t seed);

/// True iff `estimate` ties exactly the same index pairs as `truth` and
/// zeroes exactly the same indices.
bool same_clusters(std::span<const double> estimate, std::span<const double> truth);

struct DemoReport
{
    double alpha = 0.0;
    double beta = 0.0;
    double final_objective = 0.0;
    std::size_t cluster_count = 0;
    WeightMetrics metrics;
    std::optional<bool> recovered; ///< set when true weights are known
    std::vector<double> weights;
};

/// Runs proximal_gd from zero on the least-squares loss of `data`.
DemoReport demo_clustered_lasso(const ClusteredRegression& data, const TrainConfig& cfg);

} // namespace wsprox
