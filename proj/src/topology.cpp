#include "wsan/topology.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "wsan/error.hpp"

namespace wsan {

namespace {

std::string id_str(NodeId id) { return std::to_string(id); }

}  // namespace

Topology::Topology(std::vector<Node> nodes, double comm_range)
    : nodes_(std::move(nodes)), comm_range_(comm_range) {
  if (!(comm_range_ > 0.0)) {
    throw InvalidArgument("topology: communication range must be positive");
  }
  std::sort(nodes_.begin(), nodes_.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!is_finite(nodes_[i].position)) {
      throw InvalidArgument("topology: non-finite position for node " + id_str(nodes_[i].id));
    }
    if (i > 0 && nodes_[i].id == nodes_[i - 1].id) {
      throw InvalidArgument("topology: duplicate node id " + id_str(nodes_[i].id));
    }
  }
}

bool Topology::contains(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, NodeId v) { return n.id < v; });
  return it != nodes_.end() && it->id == id;
}

const Node& Topology::node(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, NodeId v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) {
    throw InvalidArgument("unknown node id " + id_str(id));
  }
  return *it;
}

std::vector<NodeId> Topology::live_ids() const {
  std::vector<NodeId> ids;
  ids.reserve(nodes_.size());
  for (const Node& n : nodes_) {
    if (n.alive) ids.push_back(n.id);
  }
  return ids;
}

std::size_t Topology::live_count() const {
  std::size_t c = 0;
  for (const Node& n : nodes_) c += n.alive ? 1 : 0;
  return c;
}

Topology Topology::with_position(NodeId id, const Position& p) const {
  node(id);  // existence check
  Topology copy = *this;
  for (Node& n : copy.nodes_) {
    if (n.id == id) n.position = p;
  }
  return copy;
}

Topology Topology::with_failed(NodeId id) const {
  node(id);
  Topology copy = *this;
  for (Node& n : copy.nodes_) {
    if (n.id == id) n.alive = false;
  }
  return copy;
}

AdjacencyMap adjacency(const Topology& topo) {
  AdjacencyMap adj;
  const auto& nodes = topo.nodes();
  for (const Node& n : nodes) {
    if (n.alive) adj[n.id];
  }
  const double r = topo.comm_range();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].alive) continue;
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (!nodes[j].alive) continue;
      if (distance(nodes[i].position, nodes[j].position) <= r) {
        adj[nodes[i].id].insert(nodes[j].id);
        adj[nodes[j].id].insert(nodes[i].id);
      }
    }
  }
  return adj;
}

std::vector<NeighborEntry> neighbor_table(const Topology& topo, NodeId node, int hops) {
  if (hops != 1 && hops != 2) {
    throw InvalidArgument("neighbor_table: hops must be 1 or 2");
  }
  const Node& self = topo.node(node);
  if (!self.alive) {
    throw InvalidArgument("neighbor_table: node " + id_str(node) + " is not alive");
  }
  const AdjacencyMap adj = adjacency(topo);
  std::set<NodeId> reach = adj.at(node);
  if (hops == 2) {
    for (NodeId n1 : adj.at(node)) {
      for (NodeId n2 : adj.at(n1)) {
        if (n2 != node) reach.insert(n2);
      }
    }
  }
  std::vector<NeighborEntry> table;
  table.reserve(reach.size());
  for (NodeId id : reach) {
    table.push_back(NeighborEntry{id, topo.node(id).position,
                                  static_cast<std::uint32_t>(adj.at(id).size())});
  }
  return table;
}

namespace {

std::vector<std::set<NodeId>> components_of(const AdjacencyMap& adj) {
  std::vector<std::set<NodeId>> comps;
  std::set<NodeId> seen;
  for (const auto& [start, _] : adj) {
    if (seen.count(start)) continue;
    std::set<NodeId> comp;
    std::deque<NodeId> queue{start};
    seen.insert(start);
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      comp.insert(u);
      for (NodeId v : adj.at(u)) {
        if (seen.insert(v).second) queue.push_back(v);
      }
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace

std::vector<std::set<NodeId>> connected_components(const Topology& topo) {
  return components_of(adjacency(topo));
}

std::set<NodeId> articulation_points(const Topology& topo) {
  const AdjacencyMap adj = adjacency(topo);
  std::map<NodeId, int> pre;
  std::map<NodeId, int> low;
  std::set<NodeId> cut;
  int counter = 0;

  // Iterative lowlink DFS; recursion would overflow on long paths.
  struct Frame {
    NodeId v;
    NodeId parent;
    std::set<NodeId>::const_iterator next;
    int children = 0;
  };

  for (const auto& [root, _] : adj) {
    if (pre.count(root)) continue;
    std::vector<Frame> stack;
    pre[root] = low[root] = counter++;
    stack.push_back({root, root, adj.at(root).begin(), 0});
    int root_children = 0;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next != adj.at(f.v).end()) {
        NodeId w = *f.next++;
        if (!pre.count(w)) {
          pre[w] = low[w] = counter++;
          if (f.v == root) ++root_children;
          ++f.children;
          stack.push_back({w, f.v, adj.at(w).begin(), 0});
        } else if (w != f.parent) {
          low[f.v] = std::min(low[f.v], pre[w]);
        }
      } else {
        NodeId v = f.v;
        NodeId parent = f.parent;
        stack.pop_back();
        if (!stack.empty()) {
          low[parent] = std::min(low[parent], low[v]);
          if (parent != root && low[v] >= pre[parent]) cut.insert(parent);
        }
      }
    }
    if (root_children >= 2) cut.insert(root);
  }
  return cut;
}

bool is_cut_vertex(const Topology& topo, NodeId node) {
  const Node& n = topo.node(node);
  if (!n.alive) {
    throw InvalidArgument("is_cut_vertex: node " + id_str(node) + " is not alive");
  }
  if (connected_components(topo).size() != 1) {
    throw InvalidArgument("is_cut_vertex: live topology is not connected");
  }
  return articulation_points(topo).count(node) > 0;
}

std::vector<std::set<NodeId>> blocks_after_removal(const Topology& topo, NodeId failed) {
  topo.node(failed);  // existence check
  AdjacencyMap adj = adjacency(topo);
  if (adj.count(failed)) {
    for (NodeId v : adj.at(failed)) adj.at(v).erase(failed);
    adj.erase(failed);
  }
  return components_of(adj);
}

std::set<NodeId> smallest_block(const std::vector<std::set<NodeId>>& blocks) {
  if (blocks.empty()) {
    throw InvalidArgument("smallest_block: empty block list");
  }
  const std::set<NodeId>* best = nullptr;
  for (const auto& b : blocks) {
    if (best == nullptr || b.size() < best->size() ||
        (b.size() == best->size() && *b.begin() < *best->begin())) {
      best = &b;
    }
  }
  return *best;
}

ShortestPathTable::ShortestPathTable(std::vector<NodeId> ids, std::vector<std::uint32_t> hops)
    : ids_(std::move(ids)), hops_(std::move(hops)) {}

std::size_t ShortestPathTable::index_of(NodeId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) {
    throw InvalidArgument("shortest path table: unknown node id " + id_str(id));
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

std::uint32_t ShortestPathTable::hops(NodeId i, NodeId j) const {
  return hops_[index_of(i) * ids_.size() + index_of(j)];
}

ShortestPathTable shortest_path_table(const Topology& topo) {
  const AdjacencyMap adj = adjacency(topo);
  std::vector<NodeId> ids;
  ids.reserve(adj.size());
  for (const auto& [id, _] : adj) ids.push_back(id);

  const std::size_t n = ids.size();
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[ids[i]] = i;

  std::vector<std::uint32_t> hops(n * n, ShortestPathTable::kUnreachable);
  for (std::size_t s = 0; s < n; ++s) {
    hops[s * n + s] = 0;
    std::deque<NodeId> queue{ids[s]};
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      const std::uint32_t du = hops[s * n + index[u]];
      for (NodeId v : adj.at(u)) {
        std::uint32_t& dv = hops[s * n + index[v]];
        if (dv == ShortestPathTable::kUnreachable) {
          dv = du + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return ShortestPathTable(std::move(ids), std::move(hops));
}

bool is_biconnected(const Topology& topo) {
  if (topo.live_count() < 3) {
    throw InvalidArgument("is_biconnected: needs at least 3 live nodes");
  }
  if (connected_components(topo).size() != 1) return false;
  return articulation_points(topo).empty();
}

double average_degree(const Topology& topo) {
  const std::size_t n = topo.live_count();
  if (n == 0) return 0.0;
  std::size_t degree_sum = 0;
  for (const auto& [_, neighbors] : adjacency(topo)) degree_sum += neighbors.size();
  return static_cast<double>(degree_sum) / static_cast<double>(n);
}

}  // namespace wsan
