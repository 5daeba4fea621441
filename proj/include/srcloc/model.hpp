#pragma once

// Domain types shared by the whole pipeline: the diffusion network, cascades,
// partial observations, and the exponential transmission primitives.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace srcloc {

/// Dense node index in [0, n_nodes).
using NodeId = std::uint32_t;

struct Edge {
    NodeId src;
    NodeId dst;
    double rate;  // transmission rate, 1/time

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed network with a positive transmission rate on every edge.
///
/// Edges are stored sorted by (src, dst); edge indices refer to that order.
/// Construction rejects self-loops, duplicate pairs, out-of-range endpoints
/// and non-positive (or non-finite) rates with std::invalid_argument.
class Network {
public:
    Network() = default;
    Network(std::size_t n_nodes, std::vector<Edge> edges);

    std::size_t size() const { return n_nodes_; }
    std::size_t edge_count() const { return edges_.size(); }
    std::span<const Edge> edges() const { return edges_; }
    const Edge& edge(std::size_t index) const { return edges_[index]; }

    /// Indices of edges leaving `node` (contiguous, ascending dst).
    std::pair<std::size_t, std::size_t> out_range(NodeId node) const
    {
        return {out_offsets_[node], out_offsets_[node + 1]};
    }
    /// Indices of edges entering `node`, ascending src.
    std::span<const std::uint32_t> in_edges(NodeId node) const
    {
        return std::span<const std::uint32_t>(in_index_).subspan(
            in_offsets_[node], in_offsets_[node + 1] - in_offsets_[node]);
    }

    std::optional<std::size_t> find_edge(NodeId src, NodeId dst) const;
    bool contains(NodeId node) const { return node < n_nodes_; }

private:
    std::size_t n_nodes_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<std::size_t> in_offsets_{0};
    std::vector<std::uint32_t> in_index_;
};

struct Infection {
    NodeId node;
    double time;

    friend bool operator==(const Infection&, const Infection&) = default;
};

/// One propagation trace. Nodes absent from the trace are ignorant
/// (infection time is +inf). Infections are kept ascending by (time, node).
class Cascade {
public:
    Cascade(std::vector<Infection> infections, double window);

    std::span<const Infection> infections() const { return by_time_; }
    std::size_t infected_count() const { return by_time_.size(); }
    double window() const { return window_; }

    std::optional<double> time_of(NodeId node) const;
    bool is_infected(NodeId node) const { return time_of(node).has_value(); }

    /// Earliest-infected node; ties resolved towards the lowest id.
    NodeId source() const { return by_time_.front().node; }
    double start_time() const { return by_time_.front().time; }
    double last_time() const { return by_time_.back().time; }

private:
    std::vector<Infection> by_time_;
    std::vector<Infection> by_node_;
    double window_;
};

/// Observed infections of one cascade (ascending node id) and the hidden
/// complement over all network nodes.
class PartialObservation {
public:
    PartialObservation(std::size_t n_nodes, std::vector<Infection> observed);

    std::size_t network_size() const { return n_nodes_; }
    std::span<const Infection> observed() const { return observed_; }
    std::span<const NodeId> hidden() const { return hidden_; }
    std::size_t observed_count() const { return observed_.size(); }
    bool is_observed(NodeId node) const;

    std::vector<NodeId> observed_nodes() const;
    std::vector<double> observed_times() const;

private:
    std::size_t n_nodes_;
    std::vector<Infection> observed_;
    std::vector<NodeId> hidden_;
};

// Exponential transmission primitives. All throw std::domain_error on a
// negative delay or a non-positive rate.

double exp_density(double tau, double rate);
double exp_survival(double tau, double rate);
double exp_hazard(double rate);

enum class TransmissionKind { exponential };

/// Per-edge delay law. Only the exponential member is implemented.
struct TransmissionModel {
    TransmissionKind kind = TransmissionKind::exponential;

    double density(double tau, double rate) const;
    double survival(double tau, double rate) const;
    double hazard(double tau, double rate) const;
    /// Inverse-CDF draw from a uniform variate in (0, 1).
    double quantile_survival(double u, double rate) const;
};

}  // namespace srcloc
