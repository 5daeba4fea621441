#include "srcloc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "srcloc/path_estimator.hpp"

namespace srcloc {

Cascade cascade_from_delays(const Network& network, std::span<const double> delays, NodeId source,
                            double t_start, double window)
{
    if (!network.contains(source))
        throw std::invalid_argument("source " + std::to_string(source) + " is not a network node");
    if (!(window > 0.0) || !std::isfinite(window))
        throw std::invalid_argument("observation window must be positive");
    if (!(t_start >= 0.0) || !std::isfinite(t_start))
        throw std::invalid_argument("start time must be finite and non-negative");

    const std::vector<double> dist = shortest_paths_from(network, delays, source);
    std::vector<Infection> infections;
    for (NodeId v = 0; v < network.size(); ++v) {
        if (dist[v] <= window)
            infections.push_back({v, t_start + dist[v]});
    }
    return Cascade(std::move(infections), window);
}

Cascade simulate_cascade(const Network& network, NodeId source, double t_start, double window,
                         std::uint64_t seed)
{
    const DelaySample sample = sample_delays(network, seed, 0);
    return cascade_from_delays(network, sample.delays, source, t_start, window);
}

std::size_t observed_count(std::size_t infected, double fraction)
{
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("observed fraction must lie in (0, 1]");
    if (infected <= 1)
        throw std::invalid_argument("no observable nodes: only the source is infected");
    // slack keeps exact products such as 0.1 * 30 from rounding up to 4
    const double raw = fraction * static_cast<double>(infected);
    auto count = static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
    return std::clamp<std::size_t>(count, 1, infected - 1);
}

namespace {

std::vector<Infection> non_source_infections(const Cascade& cascade)
{
    auto all = cascade.infections();
    return {all.begin() + 1, all.end()};
}

}  // namespace

PartialObservation observe_random(const Cascade& cascade, std::size_t n_nodes, double fraction,
                                  std::uint64_t seed)
{
    const std::size_t k = observed_count(cascade.infected_count(), fraction);
    std::vector<Infection> pool = non_source_infections(cascade);
    std::mt19937_64 rng(seed);
    // partial Fisher-Yates
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(k);
    return PartialObservation(n_nodes, std::move(pool));
}

PartialObservation observe_final(const Cascade& cascade, std::size_t n_nodes, double fraction)
{
    const std::size_t k = observed_count(cascade.infected_count(), fraction);
    std::vector<Infection> pool = non_source_infections(cascade);
    return PartialObservation(n_nodes, std::vector<Infection>(pool.end() - static_cast<std::ptrdiff_t>(k), pool.end()));
}

}  // namespace srcloc
