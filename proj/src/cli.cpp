#include "srcloc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "srcloc/evaluation.hpp"
#include "srcloc/formats.hpp"
#include "srcloc/localizer.hpp"
#include "srcloc/netrate.hpp"
#include "srcloc/numeric.hpp"
#include "srcloc/simulator.hpp"

namespace srcloc::cli {

namespace {

class ValueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw ValueError(what);
}

void write_output(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

struct SimulateArgs {
    std::string network, out;
    NodeId source = 0;
    double t_start = 0.0;
    double window = 0.0;
    std::size_t count = 1;
    std::uint64_t seed = 0;
    bool quiet = false;
};

int cmd_simulate(const SimulateArgs& a)
{
    require(a.window > 0.0 && std::isfinite(a.window), "--window must be positive");
    require(a.t_start >= 0.0 && std::isfinite(a.t_start), "--t-start must be non-negative");
    require(a.count >= 1, "--count must be at least 1");
    const Network network = read_network_file(a.network);
    require(a.source < network.size(), "--source " + std::to_string(a.source) + " is not a network node");

    CascadeFile file;
    file.nodes = NodeDictionary::numbered(network.size());
    file.window = a.window;
    std::size_t infected = 0;
    for (std::size_t c = 0; c < a.count; ++c) {
        const Cascade cascade = simulate_cascade(network, a.source, a.t_start, a.window, mix_seed(a.seed, c));
        auto inf = cascade.infections();
        file.records.push_back({"c" + std::to_string(c), {inf.begin(), inf.end()}});
        infected += cascade.infected_count();
    }
    std::ostringstream text;
    write_cascade_file(text, file);
    write_output(a.out, text.str());
    if (!a.quiet)
        std::cout << "simulated " << a.count << " cascade(s) from node " << a.source << ", mean size "
                  << static_cast<double>(infected) / static_cast<double>(a.count) << " of " << network.size()
                  << " nodes\n";
    return kSuccess;
}

struct InferArgs {
    std::string cascades, out;
    std::optional<double> window;
    SolverConfig solver;
    bool quiet = false;
};

int cmd_infer(const InferArgs& a)
{
    require(!a.window || (*a.window > 0.0 && std::isfinite(*a.window)), "--window must be positive");
    require(a.solver.step_size > 0.0, "--step must be positive");
    require(a.solver.max_iters >= 1, "--max-iters must be at least 1");
    require(a.solver.tolerance > 0.0, "--tol must be positive");
    require(a.solver.prune_threshold >= 0.0, "--prune must be non-negative");
    const CascadeFile file = read_cascade_file(a.cascades);
    const std::optional<double> window = a.window ? a.window : file.window;
    require(window.has_value(), "no --window given and the cascade file has no window directive");
    require(!file.records.empty(), "the cascade file contains no cascades");

    const std::vector<Cascade> cascades = file.cascades(window);
    const InferenceResult result = infer_network(cascades, file.nodes.size(), *window, a.solver);

    std::ostringstream text;
    text << "# loglik " << format_double(result.loglik) << '\n';
    text << "# iterations " << result.iterations << '\n';
    text << "# converged " << (result.converged ? "yes" : "no") << '\n';
    write_network_file(text, result.network);
    write_output(a.out, text.str());

    if (!result.converged)
        std::cerr << "warning: " << result.unconverged_nodes.size()
                  << " node(s) hit --max-iters; best iterate written\n";
    if (!a.quiet)
        std::cout << "inferred " << result.network.edge_count() << " edge(s) from " << cascades.size()
                  << " cascade(s): loglik " << format_double(result.loglik) << ", " << result.iterations
                  << " iteration(s) max per node, " << (result.converged ? "converged" : "NOT converged") << '\n';
    return kSuccess;
}

struct LocateArgs {
    std::string network, cascades, out;
    double fraction = 0.1;
    std::string regime = "random";
    std::size_t samples = 500;
    std::uint64_t seed = 0;
    std::size_t top = 10;
    std::optional<double> window;
    bool pre_observed = false;
    bool quiet = false;
};

int cmd_locate(const LocateArgs& a)
{
    require(a.fraction > 0.0 && a.fraction <= 1.0, "--observed-fraction must lie in (0, 1]");
    require(a.samples >= 1, "--samples must be at least 1");
    require(a.top >= 1, "--top must be at least 1");
    require(a.regime == "random" || a.regime == "final", "--regime must be random or final");
    require(!a.window || (*a.window > 0.0 && std::isfinite(*a.window)), "--window must be positive");
    const Regime regime = parse_regime(a.regime);

    const Network loaded = read_network_file(a.network);
    const CascadeFile file = read_cascade_file(a.cascades);
    if (file.records.empty())
        throw std::runtime_error("the cascade file contains no cascades");
    if (loaded.size() > file.nodes.size())
        throw std::runtime_error("network has " + std::to_string(loaded.size()) + " nodes but the cascade file declares " +
                                 std::to_string(file.nodes.size()));
    const Network network(file.nodes.size(), {loaded.edges().begin(), loaded.edges().end()});

    std::vector<PartialObservation> observations;
    if (a.pre_observed) {
        observations = file.observations();
    } else {
        const std::vector<Cascade> cascades = file.cascades(a.window);
        for (std::size_t c = 0; c < cascades.size(); ++c) {
            if (regime == Regime::random)
                observations.push_back(observe_random(cascades[c], network.size(), a.fraction, mix_seed(a.seed, c)));
            else
                observations.push_back(observe_final(cascades[c], network.size(), a.fraction));
        }
    }

    const Ranking ranking = rank_sources(network, observations, a.samples, a.seed);
    std::ostringstream text;
    write_ranking_file(text, ranking, file.nodes, observations.size(), a.top);
    write_output(a.out, text.str());

    if (!a.quiet) {
        std::cout << ranking.entries.size() << " candidate(s) over " << observations.size() << " cascade(s)\n";
        const std::size_t n = std::min(a.top, ranking.entries.size());
        for (std::size_t k = 0; k < n; ++k) {
            const CandidateScore& s = ranking.entries[k];
            std::cout << std::setw(4) << k + 1 << "  " << file.nodes.labels[s.candidate] << "  sse "
                      << format_double(s.sse) << "  coverage " << format_double(s.coverage) << '\n';
        }
    }
    return kSuccess;
}

struct EvaluateArgs {
    std::string config, out;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

int cmd_evaluate(const EvaluateArgs& a)
{
    TrialConfig config = read_trial_config(a.config);
    if (a.seed)
        config.master_seed = *a.seed;
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ValueError(e.what());
    }
    const ExperimentResult result = run_experiment(config);
    std::ostringstream text;
    write_report(text, result);
    write_output(a.out, text.str());

    if (!a.quiet) {
        std::cout << "trials: " << result.completed << " completed, " << result.skipped << " skipped\n";
        std::cout << "success probability: " << format_double(result.success_prob) << '\n';
        for (std::size_t i = 0; i < result.topk.size(); ++i)
            std::cout << "top-" << result.topk[i].first << ": " << format_double(result.topk[i].second)
                      << " (random guess " << format_double(result.baseline[i].second) << ")\n";
        if (result.start_time_mae)
            std::cout << "start-time MAE at the true source: " << format_double(*result.start_time_mae) << '\n';
        std::cout << std::fixed << std::setprecision(3) << "time (s): simulate " << result.timings.simulate
                  << ", infer " << result.timings.infer << ", localize " << result.timings.localize << '\n';
    }
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv)
{
    CLI::App app{"Source localization for partially observed information cascades", "srcloc"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate cascades from one source on a known network");
    simulate->add_option("--network", sim.network, "Network edge-list file")->required();
    simulate->add_option("--source", sim.source, "Source node id")->required();
    simulate->add_option("--t-start", sim.t_start, "Start time of every cascade");
    simulate->add_option("--window", sim.window, "Observation window length")->required();
    simulate->add_option("--count", sim.count, "Number of cascades");
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_option("--out", sim.out, "Output cascade file")->required();
    simulate->add_flag("--quiet", sim.quiet, "Suppress the summary");

    InferArgs inf;
    auto* infer = app.add_subcommand("infer", "Infer transmission rates from fully observed cascades");
    infer->add_option("--cascades", inf.cascades, "Cascade file")->required();
    infer->add_option("--window", inf.window, "Observation window (default: the file's window directive)");
    infer->add_option("--max-iters", inf.solver.max_iters, "Iteration cap per node");
    infer->add_option("--tol", inf.solver.tolerance, "Relative log-likelihood change for convergence");
    infer->add_option("--prune", inf.solver.prune_threshold, "Drop rates at or below this value");
    infer->add_option("--step", inf.solver.step_size, "Initial ascent step");
    infer->add_option("--out", inf.out, "Output network file")->required();
    infer->add_flag("--quiet", inf.quiet, "Suppress the convergence log");

    LocateArgs loc;
    auto* locate = app.add_subcommand("locate", "Rank candidate sources of a cascade set");
    locate->add_option("--network", loc.network, "Network edge-list file")->required();
    locate->add_option("--cascades", loc.cascades, "Cascade file")->required();
    auto* fraction = locate->add_option("--observed-fraction", loc.fraction, "Fraction of infected nodes observed");
    auto* regime = locate->add_option("--regime", loc.regime, "Observation regime: random or final");
    locate->add_option("--samples", loc.samples, "Monte-Carlo delay samples");
    locate->add_option("--seed", loc.seed, "Random seed");
    locate->add_option("--top", loc.top, "Number of candidates to write");
    locate->add_option("--window", loc.window, "Observation window (default: the file's window directive)");
    locate->add_option("--out", loc.out, "Output ranking file")->required();
    auto* pre = locate->add_flag("--pre-observed", loc.pre_observed, "Cascades already hold only observed nodes");
    pre->excludes(fraction)->excludes(regime);
    locate->add_flag("--quiet", loc.quiet, "Suppress the summary");

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Run synthetic localization trials");
    evaluate->add_option("--config", ev.config, "Trial configuration file")->required();
    evaluate->add_option("--seed", ev.seed, "Override experiment.master_seed");
    evaluate->add_option("--out", ev.out, "Output report file")->required();
    evaluate->add_flag("--quiet", ev.quiet, "Suppress the summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(sim);
        if (infer->parsed())
            return cmd_infer(inf);
        if (locate->parsed())
            return cmd_locate(loc);
        return cmd_evaluate(ev);
    } catch (const ValueError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidValue;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFileError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

int run(const std::vector<std::string>& args)
{
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& s : args)
        argv.push_back(s.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace srcloc::cli
