#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "wsan/geometry.hpp"

namespace wsan {

using NodeId = std::uint32_t;

struct Node {
  NodeId id = 0;
  Position position;
  bool alive = true;
};

// Immutable snapshot of the actor network. Adjacency is always derived from
// positions and the communication range (unit-disk rule, boundary counts as
// connected); nothing is cached across mutations.
class Topology {
 public:
  Topology() = default;
  // Validates: comm_range > 0, unique ids, finite positions.
  Topology(std::vector<Node> nodes, double comm_range);

  double comm_range() const { return comm_range_; }
  const std::vector<Node>& nodes() const { return nodes_; }  // sorted by id
  std::size_t size() const { return nodes_.size(); }

  bool contains(NodeId id) const;
  const Node& node(NodeId id) const;  // throws InvalidArgument on unknown id

  std::vector<NodeId> live_ids() const;
  std::size_t live_count() const;

  // Derived snapshots; the original is untouched.
  Topology with_position(NodeId id, const Position& p) const;
  Topology with_failed(NodeId id) const;

 private:
  std::vector<Node> nodes_;
  double comm_range_ = 0.0;
};

struct NeighborEntry {
  NodeId id = 0;
  Position position;
  std::uint32_t degree = 0;  // neighbor's live adjacency count at build time
};

using AdjacencyMap = std::map<NodeId, std::set<NodeId>>;

// Live-node adjacency under the unit-disk rule. Every live node appears as a
// key, isolated ones with an empty set.
AdjacencyMap adjacency(const Topology& topo);

// 1-hop table, or with hops=2 additionally the neighbors-of-neighbors
// (self excluded). Throws on unknown/dead node or hops outside {1, 2}.
std::vector<NeighborEntry> neighbor_table(const Topology& topo, NodeId node, int hops);

// Connected components of the live nodes, ordered by smallest member id.
std::vector<std::set<NodeId>> connected_components(const Topology& topo);

// Articulation points of the live subgraph (per component, Tarjan lowlink).
std::set<NodeId> articulation_points(const Topology& topo);

// True iff removing `node` increases the component count. Requires the live
// topology to be connected and the node to be alive.
bool is_cut_vertex(const Topology& topo, NodeId node);

// Components of the live nodes with `failed` excluded.
std::vector<std::set<NodeId>> blocks_after_removal(const Topology& topo, NodeId failed);

// Block with the fewest nodes; ties go to the block containing the smallest
// id. Throws on an empty list.
std::set<NodeId> smallest_block(const std::vector<std::set<NodeId>>& blocks);

// All-pairs hop counts over live nodes (BFS per source).
class ShortestPathTable {
 public:
  static constexpr std::uint32_t kUnreachable = 0xffffffffu;

  ShortestPathTable() = default;
  ShortestPathTable(std::vector<NodeId> ids, std::vector<std::uint32_t> hops);

  const std::vector<NodeId>& ids() const { return ids_; }
  // Hop count between live nodes i and j; kUnreachable across components.
  std::uint32_t hops(NodeId i, NodeId j) const;
  bool reachable(NodeId i, NodeId j) const { return hops(i, j) != kUnreachable; }

 private:
  std::size_t index_of(NodeId id) const;

  std::vector<NodeId> ids_;              // sorted
  std::vector<std::uint32_t> hops_;      // row-major ids_.size()^2
};

ShortestPathTable shortest_path_table(const Topology& topo);

// Connected with no cut vertex. Requires at least 3 live nodes.
bool is_biconnected(const Topology& topo);

// Mean live-node degree, 2|E|/n; zero for n = 0.
double average_degree(const Topology& topo);

}  // namespace wsan
