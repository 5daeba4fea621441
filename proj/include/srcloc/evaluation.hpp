#pragma once

// Synthetic end-to-end trials: ground-truth network, rate inference from
// training cascades, observation of test cascades sharing one source, and
// ranking of the hidden candidates.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srcloc/model.hpp"
#include "srcloc/netrate.hpp"

namespace srcloc {

enum class Regime { random, final_nodes };

const char* regime_name(Regime regime);
Regime parse_regime(const std::string& name);

struct TrialConfig {
    std::size_t n_nodes = 64;
    double edge_density = 0.08;
    double rate_min = 0.5;
    double rate_max = 2.0;
    double window = 1.0;
    std::size_t n_train_cascades = 1000;
    std::size_t n_test_cascades_per_source = 8;
    std::size_t min_cascade_len = 27;
    double start_spread = 10.0;  // test cascades start uniformly in [0, start_spread)
    double observed_fraction = 0.1;
    Regime regime = Regime::random;
    std::size_t n_samples = 500;
    std::vector<std::size_t> k_list{1, 5, 10};
    std::size_t n_trials = 20;
    std::uint64_t master_seed = 1;
    SolverConfig solver;

    void validate() const;
};

struct StageTimings {
    double simulate = 0.0;
    double infer = 0.0;
    double localize = 0.0;
};

struct TrialRow {
    std::size_t trial = 0;
    bool skipped = false;
    std::string skip_reason;
    NodeId true_source = 0;
    std::optional<std::size_t> rank;  // empty: the source is not in the ranking
    std::size_t n_candidates = 0;
    std::vector<double> true_starts;
    std::vector<std::optional<double>> estimated_starts;  // at the true source
    StageTimings timings;

    /// Mean |estimated - true| start time over cascades where an estimate exists.
    std::optional<double> start_time_error() const;
};

struct ExperimentResult {
    TrialConfig config;
    std::vector<TrialRow> rows;
    std::size_t completed = 0;
    std::size_t skipped = 0;
    double success_prob = 0.0;
    std::vector<std::pair<std::size_t, double>> topk;      // (k, success) per config.k_list
    std::vector<std::pair<std::size_t, double>> baseline;  // (k, mean min(1, k / |H_C|))
    double mean_candidates = 0.0;
    std::optional<double> start_time_mae;  // over all estimated cascades
    StageTimings timings;                  // totals
};

/// Fraction of trials with the true source ranked first. Throws on empty input.
double success_probability(std::span<const std::optional<std::size_t>> ranks);
/// Fraction of trials with rank <= k; missing ranks count as failures.
double topk_success(std::span<const std::optional<std::size_t>> ranks, std::size_t k);

/// Directed pairs kept independently with probability `density`; rates
/// uniform in [rate_min, rate_max].
Network random_network(std::size_t n_nodes, double density, double rate_min, double rate_max,
                       std::uint64_t seed);

/// Deterministic in config.master_seed (apart from timings).
ExperimentResult run_experiment(const TrialConfig& config);

}  // namespace srcloc
