#include "srcloc/path_estimator.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

#include "srcloc/numeric.hpp"

namespace srcloc {

namespace {

void check_delays(const Network& network, std::span<const double> delays)
{
    if (delays.size() != network.edge_count())
        throw std::invalid_argument("delay sample does not match the network's edge count");
}

void check_node(const Network& network, NodeId node, const char* what)
{
    if (!network.contains(node))
        throw std::invalid_argument(std::string(what) + " " + std::to_string(node) + " is not a network node");
}

}  // namespace

DelaySample sample_delays(const Network& network, std::uint64_t master_seed, std::uint64_t sample_index)
{
    const TransmissionModel model;
    const std::uint64_t stream = mix_seed(master_seed, sample_index);
    DelaySample sample;
    sample.seed_index = sample_index;
    sample.delays.resize(network.edge_count());
    for (std::size_t k = 0; k < network.edge_count(); ++k) {
        const Edge& e = network.edge(k);
        const std::uint64_t key = (static_cast<std::uint64_t>(e.src) << 32) | e.dst;
        const double raw = model.quantile_survival(unit_open(mix_seed(stream, key)), e.rate);
        sample.delays[k] = std::max(kDelayQuantum, std::round(raw / kDelayQuantum) * kDelayQuantum);
    }
    return sample;
}

std::span<const double> DijkstraWorkspace::run(const Network& network, std::span<const double> delays,
                                               NodeId root, Direction direction)
{
    check_delays(network, delays);
    check_node(network, root, "root");
    dist_.assign(network.size(), kUnreachable);
    heap_.clear();
    const auto cmp = std::greater<Entry>{};

    dist_[root] = 0.0;
    heap_.push_back({0.0, root});
    while (!heap_.empty()) {
        std::pop_heap(heap_.begin(), heap_.end(), cmp);
        const Entry top = heap_.back();
        heap_.pop_back();
        if (top.dist > dist_[top.node])
            continue;  // stale
        auto relax = [&](NodeId next, double w) {
            const double cand = top.dist + w;
            if (cand < dist_[next]) {
                dist_[next] = cand;
                heap_.push_back({cand, next});
                std::push_heap(heap_.begin(), heap_.end(), cmp);
            }
        };
        if (direction == Direction::forward) {
            const auto [first, last] = network.out_range(top.node);
            for (std::size_t k = first; k < last; ++k)
                relax(network.edge(k).dst, delays[k]);
        } else {
            for (std::uint32_t k : network.in_edges(top.node))
                relax(network.edge(k).src, delays[k]);
        }
    }
    return dist_;
}

std::vector<double> shortest_paths_from(const Network& network, std::span<const double> delays, NodeId root)
{
    DijkstraWorkspace ws;
    auto d = ws.run(network, delays, root, DijkstraWorkspace::Direction::forward);
    return {d.begin(), d.end()};
}

std::vector<double> shortest_paths_to(const Network& network, std::span<const double> delays, NodeId target)
{
    DijkstraWorkspace ws;
    auto d = ws.run(network, delays, target, DijkstraWorkspace::Direction::reverse);
    return {d.begin(), d.end()};
}

namespace {

void fill_candidate_distances(DijkstraWorkspace& ws, const Network& network, std::span<const double> delays,
                              std::span<const NodeId> observed, std::span<const NodeId> candidates,
                              std::vector<double>& out)
{
    const std::size_t n_obs = observed.size();
    out.resize(candidates.size() * n_obs);
    for (std::size_t o = 0; o < n_obs; ++o) {
        auto dist = ws.run(network, delays, observed[o], DijkstraWorkspace::Direction::reverse);
        for (std::size_t c = 0; c < candidates.size(); ++c)
            out[c * n_obs + o] = dist[candidates[c]];
    }
}

}  // namespace

std::vector<double> sample_candidate_distances(const Network& network, std::span<const double> delays,
                                               std::span<const NodeId> observed,
                                               std::span<const NodeId> candidates)
{
    for (NodeId c : candidates)
        check_node(network, c, "candidate");
    DijkstraWorkspace ws;
    std::vector<double> out;
    fill_candidate_distances(ws, network, delays, observed, candidates, out);
    return out;
}

std::ptrdiff_t ExpectedDistances::candidate_slot(NodeId node) const
{
    auto it = std::lower_bound(candidates.begin(), candidates.end(), node);
    if (it == candidates.end() || *it != node)
        return -1;
    return it - candidates.begin();
}

ExpectedDistances estimate_infection_times(const Network& network, std::span<const NodeId> observed,
                                           std::span<const NodeId> candidates, std::size_t n_samples,
                                           std::uint64_t master_seed)
{
    if (observed.empty())
        throw std::invalid_argument("no observed nodes to estimate infection times for");
    if (candidates.empty())
        throw std::invalid_argument("no candidate sources");
    if (n_samples == 0)
        throw std::invalid_argument("need at least one Monte-Carlo sample");

    ExpectedDistances out;
    out.candidates.assign(candidates.begin(), candidates.end());
    std::sort(out.candidates.begin(), out.candidates.end());
    if (std::adjacent_find(out.candidates.begin(), out.candidates.end()) != out.candidates.end())
        throw std::invalid_argument("duplicate candidate node");
    out.observed.assign(observed.begin(), observed.end());
    for (NodeId c : out.candidates)
        check_node(network, c, "candidate");
    for (NodeId o : out.observed) {
        check_node(network, o, "observed node");
        if (std::binary_search(out.candidates.begin(), out.candidates.end(), o))
            throw std::invalid_argument("node " + std::to_string(o) + " is both observed and a candidate");
    }
    out.n_samples = n_samples;

    const std::size_t n_pairs = out.candidates.size() * out.observed.size();
    std::vector<CompensatedSum> sums(n_pairs);
    out.reach_count.assign(n_pairs, 0);

    DijkstraWorkspace ws;
    std::vector<double> per_sample;
    for (std::size_t s = 0; s < n_samples; ++s) {
        const DelaySample sample = sample_delays(network, master_seed, s);
        fill_candidate_distances(ws, network, sample.delays, out.observed, out.candidates, per_sample);
        for (std::size_t p = 0; p < n_pairs; ++p) {
            if (per_sample[p] != kUnreachable) {
                sums[p].add(per_sample[p]);
                ++out.reach_count[p];
            }
        }
    }

    out.t_hat.resize(n_pairs);
    for (std::size_t p = 0; p < n_pairs; ++p)
        out.t_hat[p] = out.reach_count[p] > 0
                           ? sums[p].value() / static_cast<double>(out.reach_count[p])
                           : kUnreachable;
    return out;
}

}  // namespace srcloc
