#include "srcloc/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "srcloc/numeric.hpp"

namespace srcloc {

double estimate_start_time(std::span<const double> observed_times, std::span<const double> t_hat)
{
    if (observed_times.empty())
        throw std::invalid_argument("start time needs at least one observed node");
    if (observed_times.size() != t_hat.size())
        throw std::invalid_argument("observed times and estimated times differ in length");
    CompensatedSum real, est;
    for (std::size_t i = 0; i < t_hat.size(); ++i) {
        if (!std::isfinite(t_hat[i]))
            throw std::domain_error("candidate does not reach every observed node");
        real.add(observed_times[i]);
        est.add(t_hat[i]);
    }
    const auto k = static_cast<double>(t_hat.size());
    return real.value() / k - est.value() / k;
}

bool ranks_before(const CandidateScore& a, const CandidateScore& b)
{
    if (a.admissible_cascades != b.admissible_cascades)
        return a.admissible_cascades > b.admissible_cascades;
    if (a.sse != b.sse)
        return a.sse < b.sse;
    if (a.coverage != b.coverage)
        return a.coverage > b.coverage;
    return a.candidate < b.candidate;
}

std::optional<std::size_t> Ranking::rank_of(NodeId node) const
{
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].candidate == node)
            return k + 1;
    }
    return std::nullopt;
}

const CandidateScore* Ranking::find(NodeId node) const
{
    for (const CandidateScore& s : entries) {
        if (s.candidate == node)
            return &s;
    }
    return nullptr;
}

CandidateScore score_candidate(NodeId candidate, std::span<const CascadeEvidence> cascade_set)
{
    if (cascade_set.empty())
        throw std::invalid_argument("cannot score a candidate against an empty cascade set");

    CandidateScore score;
    score.candidate = candidate;
    score.start_times.resize(cascade_set.size());
    std::vector<double> contributions;
    std::size_t pairs = 0, reachable = 0;

    std::vector<double> times, t_hat;
    for (std::size_t c = 0; c < cascade_set.size(); ++c) {
        const auto& obs = cascade_set[c].observation;
        const auto& dist = cascade_set[c].distances;
        const std::ptrdiff_t slot = dist.candidate_slot(candidate);
        if (slot < 0)
            throw std::invalid_argument("candidate missing from the estimated distances");
        if (dist.observed.size() != obs.observed_count())
            throw std::invalid_argument("estimated distances do not match the observation");

        times.clear();
        t_hat.clear();
        bool admissible = true;
        for (std::size_t o = 0; o < obs.observed_count(); ++o) {
            if (dist.observed[o] != obs.observed()[o].node)
                throw std::invalid_argument("estimated distances do not match the observation");
            const double t = dist.mean(static_cast<std::size_t>(slot), o);
            ++pairs;
            if (t == kUnreachable) {
                admissible = false;
                continue;
            }
            ++reachable;
            times.push_back(obs.observed()[o].time);
            t_hat.push_back(t);
        }
        if (!admissible)
            continue;

        const double ts = estimate_start_time(times, t_hat);
        double rss = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double r = t_hat[i] + ts - times[i];
            rss += r * r;
        }
        score.start_times[c] = ts;
        contributions.push_back(rss);
        ++score.admissible_cascades;
    }
    // summing in sorted order keeps the score independent of cascade order
    std::sort(contributions.begin(), contributions.end());
    for (double v : contributions)
        score.sse += v;
    score.coverage = pairs == 0 ? 0.0 : static_cast<double>(reachable) / static_cast<double>(pairs);
    return score;
}

std::vector<NodeId> candidate_pool(std::span<const PartialObservation> cascade_set)
{
    if (cascade_set.empty())
        return {};
    const std::size_t n = cascade_set.front().network_size();
    std::vector<char> seen(n, 0);
    for (const PartialObservation& obs : cascade_set) {
        if (obs.network_size() != n)
            throw std::invalid_argument("observations disagree on the network size");
        for (const Infection& inf : obs.observed())
            seen[inf.node] = 1;
    }
    std::vector<NodeId> pool;
    for (NodeId v = 0; v < n; ++v) {
        if (!seen[v])
            pool.push_back(v);
    }
    return pool;
}

Ranking rank_sources(const Network& network, std::span<const PartialObservation> cascade_set,
                     std::size_t n_samples, std::uint64_t master_seed)
{
    if (cascade_set.empty())
        throw std::invalid_argument("cannot rank sources without cascades");
    for (const PartialObservation& obs : cascade_set) {
        if (obs.network_size() != network.size())
            throw std::invalid_argument("observation and network sizes differ");
    }
    const std::vector<NodeId> pool = candidate_pool(cascade_set);
    if (pool.empty())
        throw std::runtime_error("no candidate sources: every node is observed in some cascade");

    // every cascade sees the same delay draws, so the result cannot depend on
    // cascade order
    std::vector<ExpectedDistances> distances;
    distances.reserve(cascade_set.size());
    for (const PartialObservation& obs : cascade_set) {
        const std::vector<NodeId> observed = obs.observed_nodes();
        distances.push_back(estimate_infection_times(network, observed, pool, n_samples, master_seed));
    }
    std::vector<CascadeEvidence> evidence;
    evidence.reserve(cascade_set.size());
    for (std::size_t c = 0; c < cascade_set.size(); ++c)
        evidence.push_back({cascade_set[c], distances[c]});

    Ranking ranking;
    ranking.entries.reserve(pool.size());
    for (NodeId candidate : pool)
        ranking.entries.push_back(score_candidate(candidate, evidence));
    std::sort(ranking.entries.begin(), ranking.entries.end(), ranks_before);
    return ranking;
}

}  // namespace srcloc
