#pragma once

// Transmission-rate inference from fully observed cascades by maximizing the
// exponential survival likelihood. The objective separates over destination
// nodes, and each per-node problem is concave in that node's incoming rates.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "srcloc/model.hpp"

namespace srcloc {

/// Value returned by likelihood routines when some non-root infected node has
/// zero total incoming hazard.
inline constexpr double kImpossible = -std::numeric_limits<double>::infinity();

inline bool is_impossible(double loglik) { return loglik == kImpossible; }

/// Non-negative rates over a candidate edge set, grouped by destination.
/// Pairs outside the candidate set are structurally zero.
class RateMatrix {
public:
    explicit RateMatrix(std::size_t n_nodes = 0) : parents_(n_nodes), rates_(n_nodes) {}

    /// Candidate pairs (j, i) with t_j < t_i in at least one cascade.
    static RateMatrix from_cascades(std::span<const Cascade> cascades, std::size_t n_nodes, double initial_rate);

    std::size_t size() const { return parents_.size(); }
    std::size_t candidate_count() const;

    std::span<const NodeId> parents(NodeId dst) const { return parents_[dst]; }
    std::span<double> rates(NodeId dst) { return rates_[dst]; }
    std::span<const double> rates(NodeId dst) const { return rates_[dst]; }

    bool is_candidate(NodeId src, NodeId dst) const;
    double get(NodeId src, NodeId dst) const;
    /// Throws std::out_of_range unless (src, dst) is a candidate.
    void set(NodeId src, NodeId dst, double value);
    /// Adds (src, dst) to the candidate set, keeping parents sorted.
    void add_candidate(NodeId src, NodeId dst, double value);

private:
    std::vector<std::vector<NodeId>> parents_;
    std::vector<std::vector<double>> rates_;
};

struct SolverConfig {
    double step_size = 1.0;       // initial ascent step
    std::size_t max_iters = 5000;
    double tolerance = 1e-10;     // relative log-likelihood change
    double prune_threshold = 1e-4;
    double initial_rate = 0.5;

    void validate() const;
};

/// Log-likelihood of one cascade. The earliest-infected node(s) have no
/// potential parents and contribute survival terms only.
double cascade_loglik(const RateMatrix& alpha, const Cascade& cascade, double window);

double total_loglik(const RateMatrix& alpha, std::span<const Cascade> cascades, double window);

/// Gradient with the candidate structure of `alpha`. Throws std::domain_error
/// where the likelihood is impossible.
RateMatrix loglik_gradient(const RateMatrix& alpha, std::span<const Cascade> cascades, double window);

/// Compiled likelihood of one destination node's incoming rates:
///   L(a) = -linear . a + sum_r log(sum_{j in group r} a_j)
class DestinationProblem {
public:
    DestinationProblem(std::span<const Cascade> cascades, double window, NodeId node,
                       std::span<const NodeId> parents);

    NodeId node() const { return node_; }
    std::size_t dimension() const { return linear_.size(); }
    std::size_t group_count() const { return group_offsets_.size() - 1; }

    double value(std::span<const double> rates) const;
    void gradient(std::span<const double> rates, std::span<double> out) const;

private:
    NodeId node_;
    std::vector<double> linear_;
    std::vector<std::uint32_t> group_offsets_{0};
    std::vector<std::uint32_t> group_members_;
    mutable std::vector<double> scratch_;
};

struct NodeSolveResult {
    std::vector<double> rates;
    std::vector<double> trajectory;  // objective after each accepted step, starting at the initial point
    std::size_t iterations = 0;
    bool converged = false;
};

/// Projected gradient ascent (alpha >= 0) with Barzilai-Borwein trial steps
/// and Armijo backtracking, so the trajectory never decreases.
NodeSolveResult solve_destination(const DestinationProblem& problem, std::span<const double> initial,
                                  const SolverConfig& config);

struct InferenceResult {
    Network network;              // edges with rate > prune_threshold
    RateMatrix rates;             // unpruned optimum over the candidate set
    double loglik = 0.0;
    std::size_t iterations = 0;   // largest per-node iteration count
    bool converged = true;        // false: best iterate returned, some node hit max_iters
    std::vector<NodeId> unconverged_nodes;
};

InferenceResult infer_network(std::span<const Cascade> cascades, std::size_t n_nodes, double window,
                              const SolverConfig& config);

}  // namespace srcloc
