#include "srcloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace srcloc {

namespace {

void check_rate(double rate)
{
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw std::domain_error("transmission rate must be positive and finite");
}

void check_delay(double tau)
{
    if (!(tau >= 0.0))
        throw std::domain_error("transmission delay must be non-negative");
}

}  // namespace

Network::Network(std::size_t n_nodes, std::vector<Edge> edges)
    : n_nodes_(n_nodes), edges_(std::move(edges))
{
    for (const Edge& e : edges_) {
        if (e.src >= n_nodes_ || e.dst >= n_nodes_)
            throw std::invalid_argument("edge " + std::to_string(e.src) + "->" +
                                        std::to_string(e.dst) + " references a node outside the network");
        if (e.src == e.dst)
            throw std::invalid_argument("self-loop on node " + std::to_string(e.src));
        if (!(e.rate > 0.0) || !std::isfinite(e.rate))
            throw std::invalid_argument("edge " + std::to_string(e.src) + "->" +
                                        std::to_string(e.dst) + " has a non-positive rate");
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    for (std::size_t k = 1; k < edges_.size(); ++k) {
        if (edges_[k].src == edges_[k - 1].src && edges_[k].dst == edges_[k - 1].dst)
            throw std::invalid_argument("duplicate edge " + std::to_string(edges_[k].src) + "->" +
                                        std::to_string(edges_[k].dst));
    }

    out_offsets_.assign(n_nodes_ + 1, 0);
    in_offsets_.assign(n_nodes_ + 1, 0);
    for (const Edge& e : edges_) {
        ++out_offsets_[e.src + 1];
        ++in_offsets_[e.dst + 1];
    }
    for (std::size_t v = 0; v < n_nodes_; ++v) {
        out_offsets_[v + 1] += out_offsets_[v];
        in_offsets_[v + 1] += in_offsets_[v];
    }
    in_index_.resize(edges_.size());
    std::vector<std::size_t> fill(in_offsets_.begin(), in_offsets_.end() - 1);
    // edges_ is sorted by src, so each in-list comes out ascending by src
    for (std::size_t k = 0; k < edges_.size(); ++k)
        in_index_[fill[edges_[k].dst]++] = static_cast<std::uint32_t>(k);
}

std::optional<std::size_t> Network::find_edge(NodeId src, NodeId dst) const
{
    if (src >= n_nodes_)
        return std::nullopt;
    auto first = edges_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[src]);
    auto last = edges_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[src + 1]);
    auto it = std::lower_bound(first, last, dst, [](const Edge& e, NodeId d) { return e.dst < d; });
    if (it == last || it->dst != dst)
        return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

Cascade::Cascade(std::vector<Infection> infections, double window)
    : by_time_(std::move(infections)), window_(window)
{
    if (!(window_ > 0.0) || !std::isfinite(window_))
        throw std::invalid_argument("cascade window must be positive");
    if (by_time_.empty())
        throw std::invalid_argument("cascade has no infected node");
    for (const Infection& inf : by_time_) {
        if (!std::isfinite(inf.time) || inf.time < 0.0)
            throw std::invalid_argument("infection time of node " + std::to_string(inf.node) +
                                        " must be finite and non-negative");
    }
    by_node_ = by_time_;
    std::sort(by_node_.begin(), by_node_.end(),
              [](const Infection& a, const Infection& b) { return a.node < b.node; });
    for (std::size_t k = 1; k < by_node_.size(); ++k) {
        if (by_node_[k].node == by_node_[k - 1].node)
            throw std::invalid_argument("node " + std::to_string(by_node_[k].node) +
                                        " infected twice in one cascade");
    }
    std::sort(by_time_.begin(), by_time_.end(), [](const Infection& a, const Infection& b) {
        return a.time != b.time ? a.time < b.time : a.node < b.node;
    });
}

std::optional<double> Cascade::time_of(NodeId node) const
{
    auto it = std::lower_bound(by_node_.begin(), by_node_.end(), node,
                               [](const Infection& a, NodeId n) { return a.node < n; });
    if (it == by_node_.end() || it->node != node)
        return std::nullopt;
    return it->time;
}

PartialObservation::PartialObservation(std::size_t n_nodes, std::vector<Infection> observed)
    : n_nodes_(n_nodes), observed_(std::move(observed))
{
    if (observed_.empty())
        throw std::invalid_argument("partial observation needs at least one observed node");
    std::sort(observed_.begin(), observed_.end(),
              [](const Infection& a, const Infection& b) { return a.node < b.node; });
    for (std::size_t k = 0; k < observed_.size(); ++k) {
        const Infection& inf = observed_[k];
        if (inf.node >= n_nodes_)
            throw std::invalid_argument("observed node " + std::to_string(inf.node) + " outside the network");
        if (!std::isfinite(inf.time))
            throw std::invalid_argument("observed time of node " + std::to_string(inf.node) + " is not finite");
        if (k > 0 && observed_[k - 1].node == inf.node)
            throw std::invalid_argument("node " + std::to_string(inf.node) + " observed twice");
    }
    hidden_.reserve(n_nodes_ - observed_.size());
    std::size_t next = 0;
    for (NodeId v = 0; v < n_nodes_; ++v) {
        if (next < observed_.size() && observed_[next].node == v)
            ++next;
        else
            hidden_.push_back(v);
    }
}

bool PartialObservation::is_observed(NodeId node) const
{
    return std::binary_search(observed_.begin(), observed_.end(), Infection{node, 0.0},
                              [](const Infection& a, const Infection& b) { return a.node < b.node; });
}

std::vector<NodeId> PartialObservation::observed_nodes() const
{
    std::vector<NodeId> out;
    out.reserve(observed_.size());
    for (const Infection& inf : observed_)
        out.push_back(inf.node);
    return out;
}

std::vector<double> PartialObservation::observed_times() const
{
    std::vector<double> out;
    out.reserve(observed_.size());
    for (const Infection& inf : observed_)
        out.push_back(inf.time);
    return out;
}

double exp_density(double tau, double rate)
{
    check_delay(tau);
    check_rate(rate);
    return rate * std::exp(-rate * tau);
}

double exp_survival(double tau, double rate)
{
    check_delay(tau);
    check_rate(rate);
    return std::exp(-rate * tau);
}

double exp_hazard(double rate)
{
    check_rate(rate);
    return rate;
}

double TransmissionModel::density(double tau, double rate) const
{
    switch (kind) {
    case TransmissionKind::exponential:
        return exp_density(tau, rate);
    }
    throw std::logic_error("unknown transmission model");
}

double TransmissionModel::survival(double tau, double rate) const
{
    switch (kind) {
    case TransmissionKind::exponential:
        return exp_survival(tau, rate);
    }
    throw std::logic_error("unknown transmission model");
}

double TransmissionModel::hazard(double tau, double rate) const
{
    switch (kind) {
    case TransmissionKind::exponential:
        check_delay(tau);
        return exp_hazard(rate);
    }
    throw std::logic_error("unknown transmission model");
}

double TransmissionModel::quantile_survival(double u, double rate) const
{
    check_rate(rate);
    if (!(u > 0.0 && u <= 1.0))
        throw std::domain_error("survival level must lie in (0, 1]");
    switch (kind) {
    case TransmissionKind::exponential:
        return -std::log(u) / rate;
    }
    throw std::logic_error("unknown transmission model");
}

}  // namespace srcloc
