#pragma once

#include <cstdint>

#include "wsan/recovery.hpp"
#include "wsan/topology.hpp"

namespace wsan {

// Aggregated outcome of one recovery run. Heartbeats and setup traffic are
// not part of exchanged_messages; only messages sent between detection and
// recovery completion count.
struct MetricSet {
  double total_distance = 0.0;           // sum over all relocation events
  std::uint32_t relocated_nodes = 0;     // distinct nodes that moved
  std::uint64_t exchanged_messages = 0;
  std::uint64_t extended_paths = 0;      // surviving ordered pairs whose hop count grew
  std::uint64_t paths_not_extended = 0;  // surviving ordered pairs whose hop count did not
  double max_node_distance = 0.0;        // largest cumulative travel of any single node
  // Largest distance from the failed actor's position to where an
  // inward-motion mover stopped. The per-node limit for that scheme is stated
  // in terms of where the mover ends, not how far it drove.
  double max_inward_end_dist = 0.0;
};

// Analytical worst-case limits for one scheme at deployment size n, range r.
struct BoundCheck {
  Strategy algorithm = Strategy::kRim;
  std::size_t n = 0;  // deployed node count, failed node included
  double r = 0.0;
  bool nodes_bound_ok = false;
  bool node_distance_bound_ok = false;
  bool total_distance_bound_ok = false;
  bool messages_within_bound = false;  // informational: the message limits
                                       // assume a worst-case chain deployment
  std::uint64_t node_limit = 0;
  double node_distance_limit = 0.0;
  double total_distance_limit = 0.0;
  std::uint64_t message_limit = 0;
};

MetricSet compute_metrics(const RecoveryReport& report);

BoundCheck check_bounds(const MetricSet& metrics, Strategy algorithm, std::size_t n, double r);

// Two batch means count as "equal performance" when their symmetric relative
// difference |a-b| / ((a+b)/2) stays within this tolerance. The comparison
// tables assert equality without giving numbers; the threshold is ours.
constexpr double kEqualMeansTolerance = 0.15;

double relative_gap(double a, double b);

}  // namespace wsan
