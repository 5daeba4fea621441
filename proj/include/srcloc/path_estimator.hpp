#pragma once

// Monte-Carlo estimation of expected infection times. Each sample draws one
// delay per edge; a node's infection time under a sample is the shortest-path
// distance from the source in the delay-weighted graph.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "srcloc/model.hpp"

namespace srcloc {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Sampled delays are rounded to this grid so that any path sum is exact
/// in double precision regardless of the order of additions.
inline constexpr double kDelayQuantum = 0x1.0p-24;

/// One draw of per-edge delays, aligned with Network::edges().
struct DelaySample {
    std::vector<double> delays;
    std::uint64_t seed_index = 0;
};

/// Delay of edge (src, dst) depends only on (master_seed, sample_index, src,
/// dst), never on edge-list order.
DelaySample sample_delays(const Network& network, std::uint64_t master_seed, std::uint64_t sample_index);

/// Distances along directed edges from `root`; kUnreachable where no path.
std::vector<double> shortest_paths_from(const Network& network, std::span<const double> delays, NodeId root);

/// Distances along directed edges *to* `target` (Dijkstra on the reversed graph).
std::vector<double> shortest_paths_to(const Network& network, std::span<const double> delays, NodeId target);

/// Reusable Dijkstra buffers. Not thread-safe; use one per thread.
class DijkstraWorkspace {
public:
    enum class Direction { forward, reverse };

    /// Result view valid until the next call.
    std::span<const double> run(const Network& network, std::span<const double> delays, NodeId root,
                                Direction direction);

private:
    struct Entry {
        double dist;
        NodeId node;
        bool operator>(const Entry& o) const { return dist > o.dist || (dist == o.dist && node > o.node); }
    };
    std::vector<double> dist_;
    std::vector<Entry> heap_;
};

/// Per-sample distances from every candidate to every observed node,
/// row-major [candidate][observed].
std::vector<double> sample_candidate_distances(const Network& network, std::span<const double> delays,
                                               std::span<const NodeId> observed,
                                               std::span<const NodeId> candidates);

struct ExpectedDistances {
    std::vector<NodeId> candidates;
    std::vector<NodeId> observed;
    std::size_t n_samples = 0;
    std::vector<double> t_hat;             // [candidate][observed]; kUnreachable iff reach_count == 0
    std::vector<std::size_t> reach_count;  // [candidate][observed]

    std::size_t index(std::size_t candidate_slot, std::size_t observed_slot) const
    {
        return candidate_slot * observed.size() + observed_slot;
    }
    double mean(std::size_t candidate_slot, std::size_t observed_slot) const
    {
        return t_hat[index(candidate_slot, observed_slot)];
    }
    /// Slot of `node` in `candidates`, or -1.
    std::ptrdiff_t candidate_slot(NodeId node) const;
};

/// Expected candidate -> observed infection times over `n_samples` delay
/// draws, averaging only over samples in which the pair is connected.
/// Runs one reversed-graph Dijkstra per observed node per sample.
ExpectedDistances estimate_infection_times(const Network& network, std::span<const NodeId> observed,
                                           std::span<const NodeId> candidates, std::size_t n_samples,
                                           std::uint64_t master_seed);

}  // namespace srcloc
