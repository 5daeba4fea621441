#pragma once

// Continuous-time independent cascade simulation and the two observation
// regimes (random subset, latest-infected subset).

#include <cstdint>
#include <span>

#include "srcloc/model.hpp"

namespace srcloc {

/// Cascade implied by a fixed delay draw: t_i = t_start + d(source, i),
/// keeping nodes with d <= window.
Cascade cascade_from_delays(const Network& network, std::span<const double> delays, NodeId source,
                            double t_start, double window);

/// Draws delays with sample_delays(network, seed, 0) and propagates them.
Cascade simulate_cascade(const Network& network, NodeId source, double t_start, double window,
                         std::uint64_t seed);

/// Number of observed nodes for a cascade of `infected` nodes: the ceiling
/// of fraction * infected, capped so the source stays hidden.
std::size_t observed_count(std::size_t infected, double fraction);

/// Uniformly samples observed_count() infected nodes, never the source.
PartialObservation observe_random(const Cascade& cascade, std::size_t n_nodes, double fraction,
                                  std::uint64_t seed);

/// Observes the latest-infected nodes; equal times are ordered by ascending
/// id, so among ties the highest ids are observed first.
PartialObservation observe_final(const Cascade& cascade, std::size_t n_nodes, double fraction);

}  // namespace srcloc
