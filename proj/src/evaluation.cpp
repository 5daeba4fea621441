#include "srcloc/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "srcloc/localizer.hpp"
#include "srcloc/numeric.hpp"
#include "srcloc/simulator.hpp"

namespace srcloc {

namespace {

enum SeedTag : std::uint64_t {
    kNetworkTag = 1,
    kTrainTag,
    kTestTag,
    kObserveTag,
    kSampleTag,
    kChoiceTag,
};

constexpr std::size_t kSourceAttempts = 20;
constexpr std::size_t kCascadeRetries = 50;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

const char* regime_name(Regime regime)
{
    return regime == Regime::random ? "random" : "final";
}

Regime parse_regime(const std::string& name)
{
    if (name == "random")
        return Regime::random;
    if (name == "final")
        return Regime::final_nodes;
    throw std::invalid_argument("unknown observation regime '" + name + "' (expected random or final)");
}

void TrialConfig::validate() const
{
    if (n_nodes < 2)
        throw std::invalid_argument("n_nodes must be at least 2");
    if (!(edge_density > 0.0 && edge_density <= 1.0))
        throw std::invalid_argument("edge_density must lie in (0, 1]");
    if (!(rate_min > 0.0) || !(rate_max >= rate_min) || !std::isfinite(rate_max))
        throw std::invalid_argument("rate range must satisfy 0 < rate_min <= rate_max");
    if (!(window > 0.0) || !std::isfinite(window))
        throw std::invalid_argument("window must be positive");
    if (n_train_cascades < 1 || n_test_cascades_per_source < 1 || n_samples < 1 || n_trials < 1)
        throw std::invalid_argument("cascade, sample and trial counts must be at least 1");
    if (min_cascade_len < 2)
        throw std::invalid_argument("min_cascade_len must be at least 2 so a node can be observed");
    if (!(start_spread >= 0.0) || !std::isfinite(start_spread))
        throw std::invalid_argument("start_spread must be non-negative");
    if (!(observed_fraction > 0.0 && observed_fraction <= 1.0))
        throw std::invalid_argument("observed_fraction must lie in (0, 1]");
    if (k_list.empty() || std::find(k_list.begin(), k_list.end(), 0) != k_list.end())
        throw std::invalid_argument("k_list must contain positive values");
    solver.validate();
}

std::optional<double> TrialRow::start_time_error() const
{
    double total = 0.0;
    std::size_t n = 0;
    for (std::size_t c = 0; c < estimated_starts.size(); ++c) {
        if (estimated_starts[c]) {
            total += std::fabs(*estimated_starts[c] - true_starts[c]);
            ++n;
        }
    }
    if (n == 0)
        return std::nullopt;
    return total / static_cast<double>(n);
}

double success_probability(std::span<const std::optional<std::size_t>> ranks)
{
    return topk_success(ranks, 1);
}

double topk_success(std::span<const std::optional<std::size_t>> ranks, std::size_t k)
{
    if (ranks.empty())
        throw std::invalid_argument("no trials to score");
    if (k < 1)
        throw std::invalid_argument("k must be at least 1");
    const auto hits = std::count_if(ranks.begin(), ranks.end(),
                                    [k](const std::optional<std::size_t>& r) { return r && *r <= k; });
    return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

Network random_network(std::size_t n_nodes, double density, double rate_min, double rate_max,
                       std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> rate(rate_min, rate_max);
    std::vector<Edge> edges;
    for (NodeId src = 0; src < n_nodes; ++src) {
        for (NodeId dst = 0; dst < n_nodes; ++dst) {
            if (src == dst)
                continue;
            if (coin(rng) < density)
                edges.push_back({src, dst, rate_max > rate_min ? rate(rng) : rate_min});
        }
    }
    return Network(n_nodes, std::move(edges));
}

namespace {

TrialRow run_trial(const TrialConfig& cfg, std::size_t trial)
{
    TrialRow row;
    row.trial = trial;
    const std::uint64_t seed = mix_seed(cfg.master_seed, trial);
    std::mt19937_64 rng(mix_seed(seed, kChoiceTag));
    std::uniform_int_distribution<NodeId> pick_node(0, static_cast<NodeId>(cfg.n_nodes - 1));
    std::uniform_real_distribution<double> pick_start(0.0, cfg.start_spread);

    auto start = Clock::now();
    const Network truth = random_network(cfg.n_nodes, cfg.edge_density, cfg.rate_min, cfg.rate_max,
                                         mix_seed(seed, kNetworkTag));
    std::vector<Cascade> training;
    training.reserve(cfg.n_train_cascades);
    const std::uint64_t train_seed = mix_seed(seed, kTrainTag);
    for (std::size_t c = 0; c < cfg.n_train_cascades; ++c)
        training.push_back(simulate_cascade(truth, pick_node(rng), 0.0, cfg.window, mix_seed(train_seed, c)));

    // a source whose test cascades are all long enough
    const std::uint64_t test_seed = mix_seed(seed, kTestTag);
    std::uint64_t draw = 0;
    std::vector<Cascade> tests;
    for (std::size_t attempt = 0; attempt < kSourceAttempts && tests.size() < cfg.n_test_cascades_per_source;
         ++attempt) {
        tests.clear();
        row.true_starts.clear();
        row.true_source = pick_node(rng);
        while (tests.size() < cfg.n_test_cascades_per_source) {
            const double t0 = pick_start(rng);
            bool found = false;
            for (std::size_t retry = 0; retry < kCascadeRetries; ++retry) {
                Cascade c = simulate_cascade(truth, row.true_source, t0, cfg.window, mix_seed(test_seed, draw++));
                if (c.infected_count() >= cfg.min_cascade_len) {
                    tests.push_back(std::move(c));
                    row.true_starts.push_back(t0);
                    found = true;
                    break;
                }
            }
            if (!found)
                break;
        }
    }
    row.timings.simulate = seconds_since(start);
    if (tests.size() < cfg.n_test_cascades_per_source) {
        row.skipped = true;
        row.skip_reason = "no_long_cascades";
        row.true_starts.clear();
        return row;
    }

    start = Clock::now();
    const InferenceResult inferred = infer_network(training, cfg.n_nodes, cfg.window, cfg.solver);
    row.timings.infer = seconds_since(start);

    std::vector<PartialObservation> observations;
    const std::uint64_t observe_seed = mix_seed(seed, kObserveTag);
    for (std::size_t c = 0; c < tests.size(); ++c) {
        if (cfg.regime == Regime::random)
            observations.push_back(observe_random(tests[c], cfg.n_nodes, cfg.observed_fraction,
                                                  mix_seed(observe_seed, c)));
        else
            observations.push_back(observe_final(tests[c], cfg.n_nodes, cfg.observed_fraction));
    }

    if (candidate_pool(observations).empty()) {
        row.skipped = true;
        row.skip_reason = "no_candidates";
        return row;
    }
    start = Clock::now();
    const Ranking ranking = rank_sources(inferred.network, observations, cfg.n_samples, mix_seed(seed, kSampleTag));
    row.timings.localize = seconds_since(start);

    row.n_candidates = ranking.entries.size();
    row.rank = ranking.rank_of(row.true_source);
    if (const CandidateScore* score = ranking.find(row.true_source))
        row.estimated_starts = score->start_times;
    else
        row.estimated_starts.assign(tests.size(), std::nullopt);
    return row;
}

}  // namespace

ExperimentResult run_experiment(const TrialConfig& config)
{
    config.validate();
    ExperimentResult out;
    out.config = config;
    std::vector<std::optional<std::size_t>> ranks;
    std::vector<double> candidates;
    double error_total = 0.0;
    std::size_t error_count = 0;

    for (std::size_t t = 0; t < config.n_trials; ++t) {
        TrialRow row = run_trial(config, t);
        out.timings.simulate += row.timings.simulate;
        out.timings.infer += row.timings.infer;
        out.timings.localize += row.timings.localize;
        if (row.skipped) {
            ++out.skipped;
        } else {
            ++out.completed;
            ranks.push_back(row.rank);
            candidates.push_back(static_cast<double>(row.n_candidates));
            for (std::size_t c = 0; c < row.estimated_starts.size(); ++c) {
                if (row.estimated_starts[c]) {
                    error_total += std::fabs(*row.estimated_starts[c] - row.true_starts[c]);
                    ++error_count;
                }
            }
        }
        out.rows.push_back(std::move(row));
    }

    if (!ranks.empty()) {
        out.success_prob = success_probability(ranks);
        for (std::size_t k : config.k_list) {
            out.topk.emplace_back(k, topk_success(ranks, k));
            double base = 0.0;
            for (double h : candidates)
                base += std::min(1.0, static_cast<double>(k) / h);
            out.baseline.emplace_back(k, base / static_cast<double>(candidates.size()));
        }
        double total = 0.0;
        for (double h : candidates)
            total += h;
        out.mean_candidates = total / static_cast<double>(candidates.size());
    }
    if (error_count > 0)
        out.start_time_mae = error_total / static_cast<double>(error_count);
    return out;
}

}  // namespace srcloc
