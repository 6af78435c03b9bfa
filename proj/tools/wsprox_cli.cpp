// wsprox: command-line front end for the prox engine.
//
// Exit codes: 0 ok, 1 usage, 2 invalid input, 3 selftest failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsprox/bench.hpp"
#include "wsprox/error.hpp"
#include "wsprox/io.hpp"
#include "wsprox/optimizer.hpp"
#include "wsprox/prox.hpp"
#include "wsprox/selftest.hpp"
#include "wsprox/solvers.hpp"

namespace {

using namespace wsprox;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitSelftest = 3;

const std::vector<std::string> kAlgoNames{"pava", "imminent", "end", "search"};
const std::vector<std::string> kDistNames{"uniform", "gaussian", "presorted", "adversarial", "clustered"};

std::vector<double> read_input(const std::string& path)
{
    if (path == "-")
        return io::read_vector(std::cin);
    return io::read_vector_file(path);
}

// Writes `text` to `path`, or stdout for "-".
void emit(const std::string& path, const std::string& text)
{
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidInput("cannot write '" + path + "'");
    out << text;
}

std::string dump(const nlohmann::json& j)
{
    return j.dump(2) + "\n";
}

struct Common
{
    std::string input = "-";
    std::string output = "-";
    std::string algo = "search";
    int threads = default_thread_count();
    bool no_timing = false;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--input,-i", c.input, "input vector file (text or binary), - for stdin")->capture_default_str();
    cmd->add_option("--output,-o", c.output, "output file, - for stdout")->capture_default_str();
    cmd->add_option("--algo", c.algo, "collision solver")->check(CLI::IsMember(kAlgoNames))->capture_default_str();
    cmd->add_option("--threads", c.threads, "worker threads (default: WSPROX_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-timing", c.no_timing, "omit wall-clock fields so output is reproducible");
}

nlohmann::json metrics_json(const WeightMetrics& m)
{
    return {{"sparsity", m.sparsity},
            {"weight_sharing", m.weight_sharing},
            {"distinct_ratio", m.distinct_ratio},
            {"distinct_nonzero", m.distinct_nonzero},
            {"nonzero", m.nonzero}};
}

struct DemoArgs
{
    std::size_t d = 50;
    std::size_t k = 5;
    std::size_t n = 200;
    double noise = 0.0;
    double zero_fraction = 0.0;
    std::uint64_t seed = 1;
    std::int64_t steps = 2000;
    std::vector<double> alphas{0.01, 0.03, 0.1, 0.3, 1.0, 2.0, 3.0};
    double beta = 0.0;
    double rho = 0.98;
    double momentum = 0.0;
    std::string variant = "scale_coefficients";
    std::string schedule = "constant";
    bool baseline = true;
};

nlohmann::json run_demo(const DemoArgs& a, const Common& c)
{
    const ClusteredRegression data = gen_clustered_regression(a.d, a.k, a.n, a.noise, a.zero_fraction, a.seed);
    const LeastSquaresLoss loss(data.design, data.targets);
    const double eta = 1.0 / loss.lipschitz();

    TrainConfig cfg;
    cfg.steps = a.steps;
    cfg.momentum = a.momentum;
    cfg.seed = a.seed;
    cfg.variant = a.variant == "lr_in_v" ? ProxVariant::lr_in_v : ProxVariant::scale_coefficients;
    cfg.lr_schedule = a.schedule == "cosine" ? LrSchedule::cosine : LrSchedule::constant;
    cfg.prox = ProxOptions{parse_algorithm(c.algo), Parallelism{c.threads}};

    nlohmann::json runs = nlohmann::json::array();
    for (double alpha : a.alphas) {
        cfg.params = ProxParams{alpha, a.beta, a.rho, eta};
        const DemoReport r = demo_clustered_lasso(data, cfg);
        nlohmann::json row{{"method", "proximal_gd"},
                           {"alpha", r.alpha},
                           {"beta", r.beta},
                           {"final_objective", r.final_objective},
                           {"cluster_count", r.cluster_count},
                           {"metrics", metrics_json(r.metrics)},
                           {"recovered", r.recovered.value_or(false)},
                           {"weights", r.weights}};
        runs.push_back(std::move(row));
        if (a.baseline) {
            const Trajectory s = subgradient_gd(loss, WeightVector(std::vector<double>(a.d, 0.0)), cfg);
            runs.push_back({{"method", "subgradient_gd"},
                            {"alpha", alpha},
                            {"beta", a.beta},
                            {"final_objective", s.objective.back()},
                            {"cluster_count", s.cluster_count},
                            {"metrics", metrics_json(s.final_metrics)},
                            {"recovered", same_clusters(s.weights, data.true_weights)},
                            {"weights", s.weights}});
        }
    }
    return {{"d", a.d},   {"k", a.k},         {"n", a.n},         {"noise_sigma", a.noise},
            {"eta", eta}, {"steps", a.steps}, {"true_weights", data.true_weights}, {"runs", runs}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Proximal operators for the weight-sharing regularizer"};
    app.require_subcommand(1);

    Common common;

    double alpha = 0.0, beta = 0.0, rho = 0.0;
    CLI::App* prox = app.add_subcommand("prox", "prox of alpha*R + beta*l1 with rewinding rho");
    add_common(prox, common);
    prox->add_option("--alpha", alpha, "weight-sharing strength")->check(CLI::NonNegativeNumber);
    prox->add_option("--beta", beta, "l1 strength")->check(CLI::NonNegativeNumber);
    prox->add_option("--rho", rho, "rewinding in [0, 1]")->check(CLI::Range(0.0, 1.0));

    std::string mass_path;
    CLI::App* iso = app.add_subcommand("isotonic", "isotonic regression of the input vector");
    add_common(iso, common);
    iso->add_option("--mass", mass_path, "optional file of positive integer weights");

    std::vector<std::size_t> sizes{1024, 4096, 16384};
    std::vector<std::string> dists{"uniform", "adversarial"};
    std::vector<std::string> algos{"pava", "imminent", "end", "search"};
    std::vector<int> thread_counts{1};
    int repeats = 1;
    std::uint64_t bench_seed = 0;
    CLI::App* bench = app.add_subcommand("bench", "time the solvers, CSV output");
    bench->add_option("--sizes", sizes, "problem sizes")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--dist", dists, "input distributions")->check(CLI::IsMember(kDistNames))->capture_default_str();
    bench->add_option("--algo", algos, "solvers")->check(CLI::IsMember(kAlgoNames))->capture_default_str();
    bench->add_option("--threads", thread_counts, "thread counts")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--repeats", repeats, "repeats per configuration")->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_seed, "input seed");
    bench->add_option("--output,-o", common.output, "CSV file, - for stdout");

    DemoArgs demo_args;
    CLI::App* demo = app.add_subcommand("demo", "synthetic demonstrations");
    demo->require_subcommand(1);
    CLI::App* lasso = demo->add_subcommand("clustered-lasso", "least squares with grouped weights, alpha sweep");
    lasso->add_option("--d", demo_args.d, "weights")->check(CLI::PositiveNumber);
    lasso->add_option("--k", demo_args.k, "weight groups")->check(CLI::PositiveNumber);
    lasso->add_option("--n", demo_args.n, "samples")->check(CLI::PositiveNumber);
    lasso->add_option("--noise", demo_args.noise, "target noise sigma")->check(CLI::NonNegativeNumber);
    lasso->add_option("--zero-fraction", demo_args.zero_fraction, "fraction of true weights that are zero");
    lasso->add_option("--seed", demo_args.seed, "data seed");
    lasso->add_option("--steps", demo_args.steps, "iterations per alpha")->check(CLI::PositiveNumber);
    lasso->add_option("--alphas", demo_args.alphas, "alpha sweep")->capture_default_str();
    lasso->add_option("--beta", demo_args.beta, "l1 strength")->check(CLI::NonNegativeNumber);
    lasso->add_option("--rho", demo_args.rho, "rewinding")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    lasso->add_option("--momentum", demo_args.momentum, "heavy-ball momentum")->check(CLI::Range(0.0, 0.999));
    lasso->add_option("--variant", demo_args.variant, "how the step size enters the prox")
        ->check(CLI::IsMember({"scale_coefficients", "lr_in_v"}));
    lasso->add_option("--schedule", demo_args.schedule, "learning rate schedule")
        ->check(CLI::IsMember({"constant", "cosine"}));
    lasso->add_flag("!--no-baseline", demo_args.baseline, "skip the subgradient baseline");
    lasso->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);
    lasso->add_option("--output,-o", common.output, "JSON file, - for stdout");

    SelftestOptions st;
    CLI::App* selftest = app.add_subcommand("selftest", "oracle and invariant checks at desk scale");
    selftest->add_option("--seed", st.seed, "instance seed");
    selftest->add_option("--instances", st.oracle_instances, "oracle instances per solver");
    selftest->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);

    std::size_t gen_d = 0;
    std::optional<double> gen_eps;
    bool gen_binary = false;
    CLI::App* gen = app.add_subcommand("gen", "generate inputs");
    gen->require_subcommand(1);
    CLI::App* adversarial = gen->add_subcommand("adversarial", "staircase that slows the round-based solver");
    adversarial->add_option("--d", gen_d, "length, >= 3")->required();
    adversarial->add_option("--eps", gen_eps, "step of the rising tail (default 1/d^2)");
    adversarial->add_option("--output,-o", common.output, "output file, - for stdout");
    adversarial->add_flag("--binary", gen_binary, "write the binary format");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const Parallelism par{common.threads};
        if (*prox) {
            const WeightVector w(read_input(common.input));
            const ProxResult r =
                prox_composite(w, ProxParams{alpha, beta, rho}, ProxOptions{parse_algorithm(common.algo), par});
            emit(common.output, dump(io::prox_result_json(r, !common.no_timing)));
        } else if (*iso) {
            const std::vector<double> y = read_input(common.input);
            std::vector<std::int64_t> mass;
            if (!mass_path.empty()) {
                for (double m : io::read_vector_file(mass_path)) {
                    if (m != static_cast<double>(static_cast<std::int64_t>(m)))
                        throw InvalidInput("masses must be integers");
                    mass.push_back(static_cast<std::int64_t>(m));
                }
            }
            const IsotonicResult r = isotonic_solve(y, mass, parse_algorithm(common.algo), par);
            emit(common.output, dump(io::isotonic_result_json(r, !common.no_timing)));
        } else if (*bench) {
            BenchSpec spec;
            spec.sizes = sizes;
            for (const auto& d : dists)
                spec.distributions.push_back(parse_distribution(d));
            for (const auto& a : algos)
                spec.algos.push_back(parse_algorithm(a));
            spec.thread_counts = thread_counts;
            spec.repeats = repeats;
            spec.seed = bench_seed;
            std::ostringstream csv;
            write_bench_csv(csv, run_benchmark(spec));
            emit(common.output, csv.str());
        } else if (*lasso) {
            emit(common.output, dump(run_demo(demo_args, common)));
        } else if (*selftest) {
            st.par = par;
            const SelftestReport report = run_selftest(st);
            print_report(std::cout, report);
            return report.passed() ? kExitOk : kExitSelftest;
        } else if (*adversarial) {
            const std::vector<double> y = gen_adversarial_staircase(gen_d, gen_eps.value_or(staircase_default_eps(gen_d)));
            std::ostringstream os;
            if (gen_binary)
                io::write_binary(os, y);
            else
                io::write_text(os, y);
            emit(common.output, os.str());
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitOk;
}
