#pragma once

// Least-squares source ranking. For a candidate source, each cascade's start
// time is the shift that best aligns estimated and observed infection times;
// candidates are ranked by the residual sum of squares after that shift.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "srcloc/model.hpp"
#include "srcloc/path_estimator.hpp"

namespace srcloc {

/// mean(observed_times) - mean(t_hat): the exact minimizer over t_s of
/// sum_i (t_i - t_hat_i - t_s)^2. Throws std::domain_error if any t_hat is
/// not finite, std::invalid_argument on empty or mismatched input.
double estimate_start_time(std::span<const double> observed_times, std::span<const double> t_hat);

struct CandidateScore {
    NodeId candidate = 0;
    double sse = 0.0;
    /// Per cascade, in input order; empty where the candidate cannot reach
    /// every observed node of that cascade.
    std::vector<std::optional<double>> start_times;
    double coverage = 0.0;  // reachable (cascade, observed) pairs / all pairs
    std::size_t admissible_cascades = 0;
};

/// Ordered by admissible cascade count (desc), sse (asc), coverage (desc),
/// node id (asc).
struct Ranking {
    std::vector<CandidateScore> entries;

    /// 1-based position of `node`, if it is a candidate.
    std::optional<std::size_t> rank_of(NodeId node) const;
    const CandidateScore* find(NodeId node) const;
};

bool ranks_before(const CandidateScore& a, const CandidateScore& b);

struct CascadeEvidence {
    const PartialObservation& observation;
    const ExpectedDistances& distances;  // observed order must match observation.observed()
};

CandidateScore score_candidate(NodeId candidate, std::span<const CascadeEvidence> cascade_set);

/// Nodes observed in none of the cascades.
std::vector<NodeId> candidate_pool(std::span<const PartialObservation> cascade_set);

Ranking rank_sources(const Network& network, std::span<const PartialObservation> cascade_set,
                     std::size_t n_samples, std::uint64_t master_seed);

}  // namespace srcloc
