// Acceptance suite: one PASS/FAIL line per criterion.
//
//   wsprox_acceptance            run everything
//   wsprox_acceptance --only X   run criterion X
//   wsprox_acceptance --list     print criterion names
//
// Exit status: 0 all passed, 1 a criterion failed, 77 the only failures are
// criteria this hardware cannot measure (reported as FAIL, skipped by ctest).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wsprox/bench.hpp"
#include "wsprox/optimizer.hpp"
#include "wsprox/oracle.hpp"
#include "wsprox/prox.hpp"
#include "wsprox/regularizer.hpp"
#include "wsprox/selftest.hpp"
#include "wsprox/solvers.hpp"

namespace {

using namespace wsprox;
using Clock = std::chrono::steady_clock;

struct Outcome
{
    bool pass = true;
    std::string detail;
    bool unmeasurable = false; ///< failed only because the hardware cannot show the effect
};

// Exit status ctest maps to "skipped".
constexpr int kExitUnmeasurable = 77;

struct Criterion
{
    const char* name;
    double budget_seconds; ///< wall-clock limit, 0 for none
    std::function<Outcome()> run;
};

// Accumulates a verdict and a short description.
class Verdict
{
public:
    void require(bool ok, const std::string& what)
    {
        if (!ok && pass_) {
            pass_ = false;
            first_failure_ = what;
        }
    }
    void note(const std::string& s)
    {
        if (!notes_.empty())
            notes_ += "; ";
        notes_ += s;
    }
    Outcome outcome() const
    {
        return {pass_, pass_ ? notes_ : first_failure_ + (notes_.empty() ? "" : " | " + notes_)};
    }

private:
    bool pass_ = true;
    std::string first_failure_;
    std::string notes_;
};

std::string sci(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

std::string fixed(double v, int digits = 3)
{
    std::ostringstream os;
    os.precision(digits);
    os << std::fixed << v;
    return os.str();
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double max_rel_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]) / std::max(1.0, std::abs(b[k])));
    return m;
}

std::vector<double> composite(const std::vector<double>& w, double alpha, double beta, double rho,
                              Algorithm algo = Algorithm::search)
{
    return prox_composite(WeightVector(w), ProxParams{alpha, beta, rho}, ProxOptions{algo}).values;
}

// ---------------------------------------------------------------------------

Outcome counterexample()
{
    const std::vector<double> y{0.7, 1.0, 0.9, 0.99};
    const std::vector<double> expected{0.7, 0.95, 0.95, 0.99};
    const double third = (1.0 + 0.9 + 0.99) / 3.0;
    const std::vector<double> flawed{0.7, third, third, third};

    Verdict v;
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (Algorithm a : kAllAlgorithms) {
        const double err = max_abs_diff(isotonic_fit(y, {}, a), expected);
        worst = std::max(worst, err);
        v.require(err <= 1e-12, std::string(to_string(a)) + " misses [0.7, 0.95, 0.95, 0.99] by " + sci(err));
    }
    const Certificate cert = verify_solution(y, {}, flawed, 1e-9);
    const double elapsed = seconds_since(t0);
    v.require(!cert, "certificate accepted the three-way average");
    v.require(elapsed < 1e-3, "took " + sci(elapsed) + " s, limit 1 ms");
    v.note("max error " + sci(worst) + " over 4 solvers");
    v.note("three-way average rejected: " + cert.diagnostic.substr(0, cert.diagnostic.find(':')));
    v.note(fixed(elapsed * 1e6, 1) + " us");
    return v.outcome();
}

Outcome oracle_equivalence()
{
    Verdict v;
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::size_t> dim(1, 12);
    std::uniform_real_distribution<double> coef(0.0, 2.0);
    const std::size_t instances = 10000;
    double worst = 0.0;
    std::size_t cert_fail = 0, prox_fail = 0;
    for (std::size_t t = 0; t < instances; ++t) {
        const std::vector<double> y = random_test_vector(rng, dim(rng));
        const std::vector<double> expected = oracle::isotonic_partition(y);
        for (Algorithm a : kAllAlgorithms) {
            const std::vector<double> fit = isotonic_fit(y, {}, a);
            const double err = max_rel_diff(fit, expected);
            worst = std::max(worst, err);
            v.require(err <= 1e-9, std::string(to_string(a)) + " differs from the oracle by " + sci(err));
            if (!verify_solution(y, {}, fit, 1e-9))
                ++cert_fail;
            const WeightVector w(y);
            const double alpha = coef(rng);
            if (!verify_prox_optimality(w, prox_R(w, alpha, ProxOptions{a}), alpha, 1e-9))
                ++prox_fail;
        }
    }
    v.require(cert_fail == 0, std::to_string(cert_fail) + " solver outputs failed the certificate");
    v.require(prox_fail == 0, std::to_string(prox_fail) + " prox_R outputs failed verify_prox_optimality");
    v.note(std::to_string(instances) + " instances x 4 solvers, max rel error " + sci(worst));
    v.note("prox certificates " + std::to_string(4 * instances - prox_fail) + "/" + std::to_string(4 * instances));
    return v.outcome();
}

Outcome composition()
{
    Verdict v;
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<std::size_t> dim(1, 256);
    std::uniform_real_distribution<double> coef(0.0, 2.0);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::vector<double> w = random_test_vector(rng, dim(rng));
        const double alpha = coef(rng), beta = coef(rng);
        const WeightVector wv(w);
        const std::vector<double> chained = prox_l1(WeightVector(prox_R(wv, alpha)), beta);
        worst = std::max(worst, max_abs_diff(composite(w, alpha, beta, 0.0), chained));
    }
    v.require(worst <= 1e-12, "max difference " + sci(worst) + " exceeds 1e-12");
    v.note("1000 vectors, d <= 256, max |composite - chained| " + sci(worst));
    return v.outcome();
}

Outcome rewinding()
{
    Verdict v;
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<std::size_t> dim(1, 256);
    std::uniform_real_distribution<double> coef(0.0, 2.0);
    std::size_t hard_bad = 0, soft_bad = 0, cases = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::vector<double> w = random_test_vector(rng, dim(rng));
        const double beta = coef(rng);
        std::vector<double> hard(w.size());
        for (std::size_t k = 0; k < w.size(); ++k)
            hard[k] = std::abs(w[k]) > beta ? w[k] : 0.0;
        const std::vector<double> soft = prox_l1(WeightVector(w), beta);
        for (Algorithm a : kAllAlgorithms) {
            hard_bad += composite(w, 0.0, beta, 1.0, a) != hard;
            soft_bad += composite(w, 0.0, beta, 0.0, a) != soft;
            ++cases;
        }
    }
    v.require(hard_bad == 0, std::to_string(hard_bad) + " rho=1 outputs differ from hard thresholding");
    v.require(soft_bad == 0, std::to_string(soft_bad) + " rho=0 outputs differ from soft thresholding");
    v.note(std::to_string(cases) + " exact comparisons per limit");
    return v.outcome();
}

Outcome invariants()
{
    Verdict v;
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> dim(1, 128);
    std::uniform_real_distribution<double> coef(0.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> g;
    const int n = 1000;
    int mean_bad = 0, order_bad = 0, perm_bad = 0, trans_bad = 0, homog_bad = 0, nonexp_bad = 0, tie_bad = 0;

    for (int t = 0; t < n; ++t) {
        const std::size_t d = dim(rng);
        const std::vector<double> w = random_test_vector(rng, d);
        const Algorithm algo = kAllAlgorithms[static_cast<std::size_t>(t) % 4];
        const double alpha = coef(rng), beta = coef(rng), rho = unit(rng);

        // Conservation of the sum (beta = 0, rho = 0).
        const std::vector<double> r = composite(w, alpha, 0.0, 0.0, algo);
        const double sw = std::accumulate(w.begin(), w.end(), 0.0);
        const double sr = std::accumulate(r.begin(), r.end(), 0.0);
        mean_bad += std::abs(sw - sr) > 1e-9;

        // Order preservation (rho = 0).
        const std::vector<double> out = composite(w, alpha, beta, 0.0, algo);
        bool ordered = true;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                ordered = ordered && !(w[i] <= w[j] && out[i] > out[j]);
        order_bad += !ordered;

        // Permutation equivariance, exact, with rewinding.
        std::vector<std::size_t> perm(d);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> pw(d);
        for (std::size_t k = 0; k < d; ++k)
            pw[k] = w[perm[k]];
        const std::vector<double> full = composite(w, alpha, beta, rho, algo);
        const std::vector<double> pfull = composite(pw, alpha, beta, rho, algo);
        bool equivariant = true;
        for (std::size_t k = 0; k < d; ++k)
            equivariant = equivariant && pfull[k] == full[perm[k]];
        perm_bad += !equivariant;

        // Translation equivariance (beta = 0).
        const double c = 5.0 * g(rng);
        std::vector<double> shifted = w;
        for (double& x : shifted)
            x += c;
        const std::vector<double> rs = composite(shifted, alpha, 0.0, 0.0, algo);
        double terr = 0.0;
        for (std::size_t k = 0; k < d; ++k)
            terr = std::max(terr, std::abs(rs[k] - (r[k] + c)));
        trans_bad += terr > 1e-10;

        // Positive homogeneity: prox_{aR}(c w) = c prox_{(a/c)R}(w).
        const double s = 0.1 + 10.0 * unit(rng);
        std::vector<double> scaled = w;
        for (double& x : scaled)
            x *= s;
        const std::vector<double> lhs = composite(scaled, alpha, 0.0, 0.0, algo);
        const std::vector<double> inner = composite(w, alpha / s, 0.0, 0.0, algo);
        double herr = 0.0;
        for (std::size_t k = 0; k < d; ++k)
            herr = std::max(herr, std::abs(lhs[k] - s * inner[k]) / std::max(1.0, std::abs(lhs[k])));
        homog_bad += herr > 1e-10;

        // Nonexpansiveness (rho = 0).
        std::vector<double> other = w;
        for (double& x : other)
            x += g(rng);
        const std::vector<double> oout = composite(other, alpha, beta, 0.0, algo);
        double din = 0.0, dout = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            din += (w[k] - other[k]) * (w[k] - other[k]);
            dout += (out[k] - oout[k]) * (out[k] - oout[k]);
        }
        nonexp_bad += std::sqrt(dout) > std::sqrt(din) + 1e-10;

        // Ties survive for every rho.
        bool ties = true;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                ties = ties && (w[i] != w[j] || full[i] == full[j]);
        tie_bad += !ties;
    }
    const auto report = [&](const char* name, int bad) {
        v.require(bad == 0, std::string(name) + " failed on " + std::to_string(bad) + "/" + std::to_string(n));
    };
    report("conservation", mean_bad);
    report("order preservation", order_bad);
    report("permutation equivariance", perm_bad);
    report("translation equivariance", trans_bad);
    report("positive homogeneity", homog_bad);
    report("nonexpansiveness", nonexp_bad);
    report("tie preservation", tie_bad);
    v.note("7 properties x " + std::to_string(n) + " instances");
    return v.outcome();
}

Outcome complexity()
{
    Verdict v;
    std::vector<double> per_d;
    std::ostringstream rounds_log, probes_log;
    std::int64_t prev = 0;
    for (int k = 10; k <= 16; ++k) {
        const std::size_t d = std::size_t{1} << k;
        const std::vector<double> y = gen_adversarial_staircase(d, staircase_default_eps(d));

        ParticleSystem imm = ParticleSystem::at_rest(y);
        const SolverStats si = solve_imminent(imm);
        const auto floor = static_cast<std::int64_t>(d / 2 - 2);
        v.require(si.merging_rounds >= floor,
                  "d=" + std::to_string(d) + ": " + std::to_string(si.merging_rounds) + " merging rounds < d/2-2");
        if (prev > 0) {
            const double ratio = static_cast<double>(si.merging_rounds) / static_cast<double>(prev);
            v.require(ratio > 1.8 && ratio < 2.2, "rounds ratio " + fixed(ratio) + " not linear at d=" + std::to_string(d));
        }
        prev = si.merging_rounds;
        per_d.push_back(static_cast<double>(si.merging_rounds) / static_cast<double>(d));
        rounds_log << (k == 10 ? "" : ",") << si.merging_rounds;

        ParticleSystem srch = ParticleSystem::at_rest(y);
        const SolverStats ss = solve_search(srch);
        v.require(ss.recursion_depth == k, "search depth " + std::to_string(ss.recursion_depth) + " != log2 d");
        v.require(ss.probes_per_merge_max <= k, "search probes " + std::to_string(ss.probes_per_merge_max) +
                                                     " > log2 d at d=" + std::to_string(d));
        probes_log << (k == 10 ? "" : ",") << ss.probes_per_merge_max;
        v.require(max_abs_diff(extract_clusters(imm).per_index_value, extract_clusters(srch).per_index_value) <= 1e-9,
                  "imminent and search disagree on the staircase");
    }
    const auto [lo, hi] = std::minmax_element(per_d.begin(), per_d.end());
    v.note("imminent merging rounds d=2^10..2^16: " + rounds_log.str() + " (rounds/d in [" + fixed(*lo) + ", " +
           fixed(*hi) + "])");
    v.note("search max probes per merge: " + probes_log.str());
    return v.outcome();
}

Outcome parallel_scaling()
{
    Verdict v;
    const std::size_t d = 10'000'000;
    const std::vector<double> y = make_input(Distribution::uniform, d, 7);

    const auto timed = [&](int threads, std::vector<double>& fit, SolverStats& stats) {
        double best = 1e300;
        for (int rep = 0; rep < 3; ++rep) {
            ParticleSystem ps = ParticleSystem::at_rest(y);
            const auto t0 = Clock::now();
            stats = solve_search(ps, Parallelism{threads});
            best = std::min(best, seconds_since(t0));
            if (rep == 0)
                fit = extract_clusters(ps).per_index_value;
        }
        return best;
    };
    std::vector<double> fit1, fit8;
    SolverStats s1, s8;
    const double t1 = timed(1, fit1, s1);
    const double t8 = timed(8, fit8, s8);
    const bool identical = fit1 == fit8 && s1.probes_per_merge_max == s8.probes_per_merge_max &&
                           s1.total_work_ops == s8.total_work_ops;
    v.require(identical, "outputs differ between 1 and 8 threads");
    v.require(t8 < t1, "8 threads not faster than 1 (" + fixed(t8) + " s vs " + fixed(t1) + " s, speedup " +
                           fixed(t1 / t8, 2) + "x on " + std::to_string(std::thread::hardware_concurrency()) +
                           " hardware thread(s))");
    v.note("1 thread " + fixed(t1) + " s, 8 threads " + fixed(t8) + " s, speedup " + fixed(t1 / t8, 2) + "x");
    v.note(std::string("bit-identical outputs: ") + (identical ? "yes" : "no"));
    v.note("hardware threads " + std::to_string(std::thread::hardware_concurrency()));
    Outcome o = v.outcome();
    // A single hardware thread cannot run 8 threads faster than 1.
    o.unmeasurable = !o.pass && identical && std::thread::hardware_concurrency() < 2;
    return o;
}

Outcome fast_eval()
{
    Verdict v;
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<std::size_t> dim(1, 2000);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const WeightVector w(random_test_vector(rng, dim(rng)));
        const double naive = eval_R(w, EvalMode::naive);
        const double fast = eval_R(w, EvalMode::fast);
        const double rel = std::abs(fast - naive) / std::max(std::abs(naive), 1e-300);
        worst = std::max(worst, naive == 0.0 ? std::abs(fast) : rel);
    }
    v.require(worst <= 1e-9, "max relative difference " + sci(worst));
    v.note("1000 trials, d <= 2000, max relative difference " + sci(worst));
    return v.outcome();
}

Outcome demo_trend()
{
    Verdict v;
    const ClusteredRegression data = gen_clustered_regression(50, 5, 200, 0.0, 0.0, 1);
    const LeastSquaresLoss loss(data.design, data.targets);
    const std::vector<double> sweep{0.01, 0.03, 0.1, 0.3, 1.0, 2.0, 3.0};

    TrainConfig cfg;
    cfg.steps = 2000;
    bool shares = false, recovers = false;
    double best_ws = 0.0, worst_sub_ws = 0.0;
    std::ostringstream log;
    for (double alpha : sweep) {
        cfg.params = ProxParams{alpha, 0.0, 0.98, 1.0 / loss.lipschitz()};
        const DemoReport r = demo_clustered_lasso(data, cfg);
        const Trajectory s = subgradient_gd(loss, WeightVector(std::vector<double>(50, 0.0)), cfg);
        shares = shares || r.metrics.weight_sharing > 0.9;
        recovers = recovers || (r.cluster_count == 5 && r.recovered.value_or(false));
        best_ws = std::max(best_ws, r.metrics.weight_sharing);
        worst_sub_ws = std::max(worst_sub_ws, s.final_metrics.weight_sharing);
        log << (alpha == sweep.front() ? "" : " ") << "a=" << alpha << ":" << r.cluster_count
            << (r.recovered.value_or(false) ? "*" : "") << "/" << fixed(r.metrics.weight_sharing, 2) << "|"
            << fixed(s.final_metrics.weight_sharing, 2);
    }
    v.require(shares, "no alpha gave proximal weight sharing > 0.9 (best " + fixed(best_ws) + ")");
    v.require(recovers, "no alpha recovered the 5 true clusters exactly");
    v.require(worst_sub_ws < 0.1, "subgradient weight sharing reached " + fixed(worst_sub_ws));
    v.note("clusters[*=exact]/prox ws|subgradient ws: " + log.str());
    return v.outcome();
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {"counterexample", 0.0, counterexample},
        {"oracle_equivalence", 60.0, oracle_equivalence},
        {"composition", 0.0, composition},
        {"rewinding", 0.0, rewinding},
        {"invariants", 0.0, invariants},
        {"complexity", 120.0, complexity},
        {"parallel_scaling", 0.0, parallel_scaling},
        {"fast_eval", 0.0, fast_eval},
        {"demo_trend", 120.0, demo_trend},
    };

    std::string only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = argv[++i];
        } else if (std::strcmp(argv[i], "--list") == 0) {
            for (const Criterion& c : criteria)
                std::cout << c.name << '\n';
            return 0;
        } else {
            std::cerr << "usage: " << argv[0] << " [--only NAME | --list]\n";
            return 1;
        }
    }

    int failed = 0, unmeasurable = 0, ran = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && only != c.name)
            continue;
        ++ran;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = seconds_since(t0);
        if (c.budget_seconds > 0.0 && elapsed > c.budget_seconds) {
            o.pass = false;
            o.detail = "over the " + fixed(c.budget_seconds, 0) + " s budget | " + o.detail;
        }
        failed += !o.pass && !o.unmeasurable;
        unmeasurable += !o.pass && o.unmeasurable;
        std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << " [" << fixed(elapsed, 2) << " s] " << o.detail
                  << std::endl;
    }
    if (ran == 0) {
        std::cerr << "unknown criterion '" << only << "'\n";
        return 1;
    }
    if (failed > 0)
        return 1;
    return unmeasurable > 0 ? kExitUnmeasurable : 0;
}
