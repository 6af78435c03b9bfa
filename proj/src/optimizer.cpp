#include "wsprox/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "wsprox/error.hpp"

namespace wsprox {

LeastSquaresLoss::LeastSquaresLoss(Eigen::MatrixXd design, Eigen::VectorXd targets)
    : design_(std::move(design)), targets_(std::move(targets))
{
    if (design_.rows() != targets_.size() || design_.rows() == 0)
        throw DomainError("least squares: design rows must match a non-empty target vector");
}

double LeastSquaresLoss::value(std::span<const double> w) const
{
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
    return 0.5 * (design_ * wv - targets_).squaredNorm() / static_cast<double>(design_.rows());
}

void LeastSquaresLoss::gradient(std::span<const double> w, std::span<double> grad) const
{
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
    Eigen::Map<Eigen::VectorXd> g(grad.data(), static_cast<Eigen::Index>(grad.size()));
    g.noalias() = design_.transpose() * (design_ * wv - targets_) / static_cast<double>(design_.rows());
}

double LeastSquaresLoss::lipschitz() const
{
    const Eigen::MatrixXd gram = design_.transpose() * design_ / static_cast<double>(design_.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
}

void TrainConfig::validate() const
{
    params.validate();
    if (steps < 1)
        throw DomainError("steps must be >= 1");
    if (!(momentum >= 0.0 && momentum < 1.0))
        throw DomainError("momentum must lie in [0, 1)");
}

double composite_objective(const SmoothLoss& loss, std::span<const double> w, double alpha, double beta)
{
    double l1 = 0.0;
    for (double x : w)
        l1 += std::abs(x);
    const WeightVector wv(std::vector<double>(w.begin(), w.end()));
    return loss.value(w) + alpha * eval_R(wv) + beta * l1;
}

double learning_rate(const TrainConfig& cfg, std::int64_t t)
{
    if (cfg.lr_schedule == LrSchedule::constant)
        return cfg.params.eta;
    const double phase = std::numbers::pi * static_cast<double>(t) / static_cast<double>(cfg.steps);
    return cfg.params.eta * 0.5 * (1.0 + std::cos(phase));
}

namespace {

void check_gradient(std::span<const double> g, std::int64_t step)
{
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!std::isfinite(g[i]))
            throw InvalidInput("non-finite gradient entry " + std::to_string(i) + " at step " +
                               std::to_string(step));
    }
}

void finish(Trajectory& traj)
{
    const WeightVector w(traj.weights);
    traj.final_metrics = metrics(w);
    traj.cluster_count = count_distinct(traj.weights);
}

// Shared driver: `update` maps (w, momentum-adjusted grad L, eta_t) to the next w.
template <class Update>
Trajectory descend(const SmoothLoss& loss, const WeightVector& w0, const TrainConfig& cfg, Update&& update)
{
    cfg.validate();
    const std::size_t d = w0.size();
    if (loss.dimension() != d)
        throw DomainError("loss dimension differs from w0");

    Trajectory traj;
    traj.weights = w0.vector();
    traj.objective.reserve(static_cast<std::size_t>(cfg.steps) + 1);
    traj.objective.push_back(composite_objective(loss, traj.weights, cfg.params.alpha, cfg.params.beta));

    std::vector<double> grad(d), velocity(d, 0.0);
    for (std::int64_t t = 0; t < cfg.steps; ++t) {
        loss.gradient(traj.weights, grad);
        check_gradient(grad, t);
        if (cfg.momentum > 0.0) {
            for (std::size_t i = 0; i < d; ++i)
                velocity[i] = cfg.momentum * velocity[i] + grad[i];
            grad = velocity;
        }
        traj.weights = update(traj.weights, grad, learning_rate(cfg, t));
        traj.objective.push_back(composite_objective(loss, traj.weights, cfg.params.alpha, cfg.params.beta));
    }
    finish(traj);
    return traj;
}

} // namespace

Trajectory proximal_gd(const SmoothLoss& loss, const WeightVector& w0, const TrainConfig& cfg)
{
    return descend(loss, w0, cfg, [&](const std::vector<double>& w, const std::vector<double>& g, double eta) {
        std::vector<double> u(w.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            u[i] = w[i] - eta * g[i];

        ProxParams p = cfg.params;
        ProxOptions opts = cfg.prox;
        if (cfg.variant == ProxVariant::scale_coefficients) {
            p.alpha *= eta;
            p.beta *= eta;
            opts.displacement_scale = 1.0;
        } else {
            opts.displacement_scale = eta;
        }
        return prox_composite(WeightVector(std::move(u)), p, opts).values;
    });
}

Trajectory subgradient_gd(const SmoothLoss& loss, const WeightVector& w0, const TrainConfig& cfg)
{
    const double alpha = cfg.params.alpha;
    const double beta = cfg.params.beta;
    return descend(loss, w0, cfg, [&](const std::vector<double>& w, const std::vector<double>& g, double eta) {
        const std::size_t d = w.size();
        std::vector<double> sub_r(d, 0.0);
        if (d >= 2 && alpha != 0.0)
            sub_r = subgradient_R(WeightVector(w));
        std::vector<double> next(d);
        for (std::size_t i = 0; i < d; ++i) {
            const double sign = static_cast<double>((w[i] > 0.0) - (w[i] < 0.0));
            next[i] = w[i] - eta * (g[i] + alpha * sub_r[i] + beta * sign);
        }
        return next;
    });
}

ClusteredRegression gen_clustered_regression(std::size_t d, std::size_t k, std::size_t n, double noise_sigma,
                                             double zero_fraction, std::uint64_t seed)
{
    if (d == 0 || n == 0)
        throw DomainError("clustered regression: d and n must be positive");
    if (!(zero_fraction >= 0.0 && zero_fraction < 1.0))
        throw DomainError("clustered regression: zero_fraction must lie in [0, 1)");
    if (!(noise_sigma >= 0.0))
        throw DomainError("clustered regression: noise_sigma must be >= 0");
    const auto zeros = static_cast<std::size_t>(std::floor(zero_fraction * static_cast<double>(d)));
    const std::size_t active = d - zeros;
    if (k < 1 || k > active)
        throw DomainError("clustered regression: need 1 <= k <= number of nonzero weights");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> magnitude(0.5, 3.0);
    std::bernoulli_distribution negative(0.5);
    std::normal_distribution<double> normal(0.0, 1.0);

    // Distinct nonzero cluster values, at least 0.25 apart.
    std::vector<double> values;
    while (values.size() < k) {
        const double cand = (negative(rng) ? -1.0 : 1.0) * magnitude(rng);
        const bool far = std::all_of(values.begin(), values.end(), [&](double v) { return std::abs(v - cand) >= 0.25; });
        if (far)
            values.push_back(cand);
    }

    ClusteredRegression out;
    out.true_weights.assign(d, 0.0);
    for (std::size_t i = 0; i < active; ++i)
        out.true_weights[i] = values[i * k / active];

    out.design.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index r = 0; r < out.design.rows(); ++r) {
        for (Eigen::Index c = 0; c < out.design.cols(); ++c)
            out.design(r, c) = normal(rng);
    }
    const Eigen::Map<const Eigen::VectorXd> w(out.true_weights.data(), static_cast<Eigen::Index>(d));
    out.targets = out.design * w;
    if (noise_sigma > 0.0) {
        for (Eigen::Index r = 0; r < out.targets.size(); ++r)
            out.targets(r) += noise_sigma * normal(rng);
    }
    return out;
}

bool same_clusters(std::span<const double> estimate, std::span<const double> truth)
{
    if (estimate.size() != truth.size())
        return false;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if ((estimate[i] == 0.0) != (truth[i] == 0.0))
            return false;
        for (std::size_t j = 0; j < i; ++j) {
            if ((estimate[i] == estimate[j]) != (truth[i] == truth[j]))
                return false;
        }
    }
    return true;
}

DemoReport demo_clustered_lasso(const ClusteredRegression& data, const TrainConfig& cfg)
{
    const LeastSquaresLoss loss(data.design, data.targets);
    const WeightVector w0(std::vector<double>(static_cast<std::size_t>(data.design.cols()), 0.0));
    const Trajectory traj = proximal_gd(loss, w0, cfg);

    DemoReport report;
    report.alpha = cfg.params.alpha;
    report.beta = cfg.params.beta;
    report.final_objective = traj.objective.back();
    report.cluster_count = traj.cluster_count;
    report.metrics = traj.final_metrics;
    if (!data.true_weights.empty())
        report.recovered = same_clusters(traj.weights, data.true_weights);
    report.weights = traj.weights;
    return report;
}

} // namespace wsprox
