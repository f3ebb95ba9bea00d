#include "wsan/metrics.hpp"

#include <algorithm>
#include <map>

#include "wsan/error.hpp"
#include "wsan/geometry.hpp"

namespace wsan {

MetricSet compute_metrics(const RecoveryReport& report) {
  MetricSet m;
  m.exchanged_messages = report.messages.size();

  const Position failed_pos = report.pre_topology.node(report.failed).position;
  std::map<NodeId, double> travelled;
  for (const Relocation& rel : report.relocations) {
    const double d = distance(rel.from, rel.to);
    m.total_distance += d;
    travelled[rel.node] += d;
    if (rel.cause == MoveCause::kInwardMotion) {
      m.max_inward_end_dist = std::max(m.max_inward_end_dist, distance(rel.to, failed_pos));
    }
  }
  m.relocated_nodes = static_cast<std::uint32_t>(travelled.size());
  for (const auto& [_, d] : travelled) m.max_node_distance = std::max(m.max_node_distance, d);

  // Baseline hop counts come from the intact network; pairs that could only
  // reach each other through the failed actor still count, so a recovery has
  // to provide replacement routes of equal length to score zero here.
  const ShortestPathTable pre = shortest_path_table(report.pre_topology);
  const ShortestPathTable post = shortest_path_table(report.post_topology);
  for (NodeId u : report.post_topology.live_ids()) {
    for (NodeId v : report.post_topology.live_ids()) {
      if (u == v) continue;
      const std::uint32_t before = pre.hops(u, v);
      if (before == ShortestPathTable::kUnreachable) continue;
      const std::uint32_t after = post.hops(u, v);
      if (after == ShortestPathTable::kUnreachable || after > before) {
        ++m.extended_paths;
      } else {
        ++m.paths_not_extended;
      }
    }
  }
  return m;
}

BoundCheck check_bounds(const MetricSet& metrics, Strategy algorithm, std::size_t n, double r) {
  if (r <= 0.0) throw InvalidArgument("check_bounds: communication range must be positive");
  if (n < 2) throw InvalidArgument("check_bounds: deployment needs at least 2 nodes");
  const bool dara = algorithm == Strategy::kDara1c || algorithm == Strategy::kDara2c;
  if (dara && n < 4) {
    throw InvalidArgument("check_bounds: the dara limits are undefined for n < 4");
  }

  BoundCheck b;
  b.algorithm = algorithm;
  b.n = n;
  b.r = r;
  double node_distance_used = metrics.max_node_distance;
  switch (algorithm) {
    case Strategy::kRim:
      b.node_limit = n - 1;
      b.node_distance_limit = r / 2.0;
      b.total_distance_limit = (r / 2.0) * static_cast<double>(n - 1);
      b.message_limit = 2 * n - 1;
      node_distance_used = metrics.max_inward_end_dist;
      break;
    case Strategy::kLedir:
      b.node_limit = (n - 1) / 2;
      b.node_distance_limit = r;
      b.total_distance_limit = (r / 2.0) * static_cast<double>(n - 1);
      b.message_limit = (3 * (n - 1)) / 2;
      break;
    case Strategy::kDara1c:
    case Strategy::kDara2c:
      b.node_limit = n - 3;
      b.node_distance_limit = r;
      b.total_distance_limit = r * static_cast<double>(n - 3);
      b.message_limit = 5 * n - 3;
      break;
  }
  b.nodes_bound_ok = metrics.relocated_nodes <= b.node_limit;
  b.node_distance_bound_ok = node_distance_used <= b.node_distance_limit + kGeomEps;
  b.total_distance_bound_ok = metrics.total_distance <= b.total_distance_limit + kGeomEps;
  b.messages_within_bound = metrics.exchanged_messages <= b.message_limit;
  return b;
}

double relative_gap(double a, double b) {
  const double mid = (a + b) / 2.0;
  if (mid == 0.0) return 0.0;
  return std::abs(a - b) / mid;
}

}  // namespace wsan
