#include "wsan/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "wsan/error.hpp"

namespace wsan {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kRim: return "rim";
    case Strategy::kDara1c: return "dara1c";
    case Strategy::kDara2c: return "dara2c";
    case Strategy::kLedir: return "ledir";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(const std::string& name) {
  if (name == "rim") return Strategy::kRim;
  if (name == "dara1c") return Strategy::kDara1c;
  if (name == "dara2c") return Strategy::kDara2c;
  if (name == "ledir") return Strategy::kLedir;
  return std::nullopt;
}

const char* message_kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::kHello: return "HELLO";
    case MessageKind::kHeartbeat: return "HEARTBEAT";
    case MessageKind::kMoving: return "MOVING";
    case MessageKind::kRecovered: return "RECOVERED";
    case MessageKind::kNotifyChild: return "NOTIFY_CHILD";
  }
  return "unknown";
}

const char* move_cause_name(MoveCause c) {
  switch (c) {
    case MoveCause::kReplaceFailed: return "REPLACE_FAILED";
    case MoveCause::kCascadeChild: return "CASCADE_CHILD";
    case MoveCause::kInwardMotion: return "INWARD_MOTION";
  }
  return "unknown";
}

FailureEvent detect_failure(const Topology& topo, NodeId failed, int heartbeat_misses) {
  if (heartbeat_misses <= 0) {
    throw InvalidArgument("detect_failure: heartbeat_misses must be positive");
  }
  const Node& n = topo.node(failed);
  if (!n.alive) {
    throw InvalidArgument("detect_failure: node " + std::to_string(failed) + " is not alive");
  }
  FailureEvent event;
  event.failed = failed;
  event.detected_by = adjacency(topo).at(failed);
  event.missed_heartbeats =
      static_cast<std::uint64_t>(heartbeat_misses) * event.detected_by.size();
  return event;
}

NodeId select_best_candidate(std::span<const CandidateRank> candidates) {
  if (candidates.empty()) {
    throw InvalidArgument("select_best_candidate: empty candidate set");
  }
  const CandidateRank* best = nullptr;
  for (const CandidateRank& c : candidates) {
    if (best == nullptr) {
      best = &c;
      continue;
    }
    if (c.degree != best->degree) {
      if (c.degree < best->degree) best = &c;
    } else if (c.dist_to_failed != best->dist_to_failed) {
      if (c.dist_to_failed < best->dist_to_failed) best = &c;
    } else if (c.id > best->id) {
      best = &c;
    }
  }
  return best->id;
}

namespace {

// Reconnect moves stop a hair inside the range so that a restored link is
// strictly within r despite floating-point rounding of the landing point.
constexpr double kReconnectShrink = 1.0 - 1e-10;

// Share of its link length a notified block member cedes toward the spot its
// notifier vacated when the link itself is in no danger. Keeps whole-block
// relocation priced near inward motion's per-node travel.
constexpr double kBlockFollowShare = 0.125;

// Mutable working state of one recovery run over the survivor set.
struct Engine {
  const Topology& pre;
  NodeId failed;
  double r;
  Position failed_pos;
  std::map<NodeId, Position> pos;       // survivors' current positions
  std::map<NodeId, int> last_move;      // round of latest move, -1 = never
  std::set<std::pair<NodeId, NodeId>> orig_edges;  // pre-failure survivor links, (min,max)
  std::vector<Relocation> relocations;
  std::vector<Message> messages;

  Engine(const Topology& t, const FailureEvent& event)
      : pre(t), failed(event.failed), r(t.comm_range()) {
    const Node& f = pre.node(failed);
    if (!f.alive) {
      throw InvalidArgument("recovery: failed node " + std::to_string(failed) +
                            " is not alive in the pre-failure topology");
    }
    failed_pos = f.position;
    for (const Node& n : pre.nodes()) {
      if (n.alive && n.id != failed) {
        pos[n.id] = n.position;
        last_move[n.id] = -1;
      }
    }
    for (const auto& [u, neighbors] : adjacency(pre)) {
      if (u == failed) continue;
      for (NodeId v : neighbors) {
        if (v == failed || v <= u) continue;
        orig_edges.emplace(u, v);
      }
    }
  }

  int round_limit() const { return static_cast<int>(pre.size()); }

  void broadcast(MessageKind kind, NodeId sender, std::optional<Position> destination) {
    messages.push_back(Message{kind, sender, std::nullopt, destination});
  }

  void move(NodeId id, const Position& to, MoveCause cause, int round) {
    Position& current = pos.at(id);
    if (current == to) return;  // zero-distance moves are not recorded
    relocations.push_back(Relocation{id, current, to, cause,
                                     static_cast<std::uint32_t>(relocations.size())});
    current = to;
    last_move.at(id) = round;
  }

  bool has_orig_edge(NodeId a, NodeId b) const {
    return orig_edges.count({std::min(a, b), std::max(a, b)}) > 0;
  }

  std::map<NodeId, std::set<NodeId>> current_adjacency() const {
    std::map<NodeId, std::set<NodeId>> adj;
    for (const auto& [id, _] : pos) adj[id];
    for (auto i = pos.begin(); i != pos.end(); ++i) {
      for (auto j = std::next(i); j != pos.end(); ++j) {
        if (distance(i->second, j->second) <= r) {
          adj[i->first].insert(j->first);
          adj[j->first].insert(i->first);
        }
      }
    }
    return adj;
  }

  std::set<NodeId> component_of(NodeId start) const {
    const auto adj = current_adjacency();
    std::set<NodeId> comp{start};
    std::deque<NodeId> queue{start};
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      for (NodeId v : adj.at(u)) {
        if (comp.insert(v).second) queue.push_back(v);
      }
    }
    return comp;
  }

  Topology snapshot() const {
    std::vector<Node> nodes;
    nodes.reserve(pre.size());
    for (const Node& n : pre.nodes()) {
      Node m = n;
      if (n.id == failed) {
        m.alive = false;
      } else if (n.alive) {
        m.position = pos.at(n.id);
      }
      nodes.push_back(m);
    }
    return Topology(std::move(nodes), pre.comm_range());
  }
};

RecoveryReport make_report(const Engine& e, Strategy strategy) {
  RecoveryReport report;
  report.algorithm = strategy;
  report.failed = e.failed;
  report.relocations = e.relocations;
  report.messages = e.messages;
  report.pre_topology = e.pre;
  report.post_topology = e.snapshot();
  return report;
}

bool single_component(const Topology& t) {
  return connected_components(t).size() <= 1;
}

bool failure_partitions(const Topology& topo, NodeId failed) {
  return blocks_after_removal(topo, failed).size() >= 2;
}

enum class CascadeStyle { kRimStyle, kLedirStyle, kDara2cStyle };

// Children sharing a common prospective grandchild would leave it cut off
// from both of them; they stop half-range from their target instead, which
// keeps them close enough together for the grandchild's circle intersection.
void tighten_shared_grandchildren(const Engine& e,
                                  const std::map<NodeId, std::vector<NodeId>>& parents_of,
                                  const std::map<NodeId, NodeId>& sole_parent,
                                  std::map<NodeId, Position>& dest) {
  std::map<NodeId, std::vector<NodeId>> movers_by_parent;
  for (const auto& [child, parent] : sole_parent) movers_by_parent[parent].push_back(child);
  for (const auto& [parent, movers] : movers_by_parent) {
    if (movers.size() < 2) continue;
    std::set<NodeId> tighten;
    for (const auto& [gid, gpos] : e.pos) {
      if (parents_of.count(gid)) continue;  // itself moving this round
      std::vector<NodeId> lost;
      for (NodeId m : movers) {
        if (e.has_orig_edge(gid, m) && distance(gpos, dest.at(m)) > e.r) lost.push_back(m);
      }
      if (lost.size() >= 2) tighten.insert(lost.begin(), lost.end());
    }
    for (NodeId m : tighten) {
      dest.at(m) = approach(e.pos.at(m), e.pos.at(parent), e.r / 2.0);
    }
  }
}

// Shortest step along the child -> failed-spot ray that puts the most lost
// parents back in range. Inward motion can never run away from the network,
// and the failed spot itself is within range of the half-range core, so a
// child with no reachable parent on the ray still rejoins there.
Position inward_landing(const Engine& e, NodeId child,
                        const std::vector<NodeId>& parents, double reach) {
  const Position c = e.pos.at(child);
  const double dx = e.failed_pos.x - c.x;
  const double dy = e.failed_pos.y - c.y;
  const double a = dx * dx + dy * dy;
  if (a == 0.0) return c;  // already at the failed spot
  std::vector<std::pair<double, double>> spans;  // per-parent in-range [lo,hi] of t
  for (NodeId p : parents) {
    const Position& pp = e.pos.at(p);
    const double ex = c.x - pp.x;
    const double ey = c.y - pp.y;
    const double b = 2.0 * (ex * dx + ey * dy);
    const double k = ex * ex + ey * ey - reach * reach;
    const double disc = b * b - 4.0 * a * k;
    if (disc < 0.0) continue;
    const double s = std::sqrt(disc);
    const double lo = std::max((-b - s) / (2.0 * a), 0.0);
    const double hi = std::min((-b + s) / (2.0 * a), 1.0);
    if (lo <= hi) spans.emplace_back(lo, hi);
  }
  // Peak coverage over a union of intervals occurs at some interval start.
  double best_t = 1.0;
  std::size_t best_cover = 0;
  for (const auto& span : spans) {
    std::size_t cover = 0;
    for (const auto& other : spans) {
      if (other.first <= span.first && span.first <= other.second) ++cover;
    }
    if (cover > best_cover || (cover == best_cover && span.first < best_t)) {
      best_t = span.first;
      best_cover = cover;
    }
  }
  return {c.x + best_t * dx, c.y + best_t * dy};
}

// Follow-the-leader cascade: every pre-failure link between survivors is
// sustained. A node whose link to a moved neighbor broke travels toward that
// neighbor's new position until it re-enters range; with two moved
// neighbors it relocates to the nearest intersection of the radius-r circles
// around them. Rounds repeat until no original link is broken.
void sustain_links(Engine& e, CascadeStyle style, int first_round) {
  const double reconnect = e.r * kReconnectShrink;
  for (int round = first_round;; ++round) {
    if (round > e.round_limit()) {
      throw EngineError("recovery cascade did not converge within the round limit");
    }
    std::map<NodeId, std::vector<NodeId>> parents_of;
    for (const auto& [u, v] : e.orig_edges) {
      if (distance(e.pos.at(u), e.pos.at(v)) <= e.r) continue;
      const int ru = e.last_move.at(u);
      const int rv = e.last_move.at(v);
      // The more recent mover is the parent the other endpoint must follow.
      NodeId parent, child;
      if (ru == rv) {
        parent = std::max(u, v);
        child = std::min(u, v);
      } else if (ru > rv) {
        parent = u;
        child = v;
      } else {
        parent = v;
        child = u;
      }
      parents_of[child].push_back(parent);
    }
    if (parents_of.empty()) return;

    std::map<NodeId, Position> dest;
    std::map<NodeId, NodeId> sole_parent;
    bool conceded_any = false;
    for (auto& [child, parents] : parents_of) {
      std::sort(parents.begin(), parents.end());
      parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
      if (parents.size() == 1) {
        dest[child] = approach(e.pos.at(child), e.pos.at(parents[0]), reconnect);
        sole_parent[child] = parents[0];
      } else if (style == CascadeStyle::kRimStyle) {
        // All motion here converges on the failed spot; parents the ray
        // cannot reach are conceded, their side staying linked through the
        // half-range core.
        const Position landing = inward_landing(e, child, parents, reconnect);
        for (NodeId p : parents) {
          if (distance(landing, e.pos.at(p)) > e.r) {
            e.orig_edges.erase({std::min(child, p), std::max(child, p)});
            conceded_any = true;
          }
        }
        dest[child] = landing;
      } else {
        // A spot in range of two parents at once, if any id-ordered pair
        // allows one; parents that diverged beyond 2r leave only the closest
        // one reachable.
        std::optional<Position> landing;
        for (std::size_t i = 0; i + 1 < parents.size() && !landing; ++i) {
          for (std::size_t j = i + 1; j < parents.size() && !landing; ++j) {
            const Position& pa = e.pos.at(parents[i]);
            const Position& pb = e.pos.at(parents[j]);
            if (distance(pa, pb) == 0.0) continue;  // one circle; the fallback serves both
            const auto points = circle_intersections(pa, pb, reconnect);
            if (!points.empty()) landing = closest_point(points, e.pos.at(child));
          }
        }
        if (!landing) {
          NodeId nearest = parents[0];
          for (NodeId p : parents) {
            if (distance(e.pos.at(child), e.pos.at(p)) <
                distance(e.pos.at(child), e.pos.at(nearest))) {
              nearest = p;
            }
          }
          landing = approach(e.pos.at(child), e.pos.at(nearest), reconnect);
        }
        // Whatever the landing cannot keep in range is conceded for good;
        // connectivity flows through the parents it does keep.
        for (NodeId p : parents) {
          if (distance(*landing, e.pos.at(p)) > e.r) {
            e.orig_edges.erase({std::min(child, p), std::max(child, p)});
            conceded_any = true;
          }
        }
        dest[child] = *landing;
      }
    }
    if (style == CascadeStyle::kLedirStyle) {
      tighten_shared_grandchildren(e, parents_of, sole_parent, dest);
    }

    bool moved_any = false;
    for (const auto& [child, d] : dest) {
      if (d == e.pos.at(child)) continue;
      e.broadcast(style == CascadeStyle::kLedirStyle ? MessageKind::kNotifyChild
                                                     : MessageKind::kMoving,
                  child, d);
      e.move(child, d, MoveCause::kCascadeChild, round);
      moved_any = true;
    }
    if (!moved_any && !conceded_any) {
      throw EngineError("recovery cascade stalled with broken links remaining");
    }
  }
}

std::map<NodeId, std::uint32_t> degrees_of(const std::map<NodeId, std::set<NodeId>>& adj) {
  std::map<NodeId, std::uint32_t> deg;
  for (const auto& [id, neighbors] : adj) deg[id] = static_cast<std::uint32_t>(neighbors.size());
  return deg;
}

}  // namespace

RecoveryReport rim_recover(const Topology& topo, const FailureEvent& event) {
  Engine e(topo, event);
  if (failure_partitions(topo, event.failed)) {
    const double half = e.r / 2.0;
    for (NodeId nb : event.detected_by) {
      if (!e.pos.count(nb)) continue;
      if (distance(e.pos.at(nb), e.failed_pos) > half) {
        const Position d = approach(e.pos.at(nb), e.failed_pos, half);
        e.broadcast(MessageKind::kMoving, nb, d);
        e.move(nb, d, MoveCause::kInwardMotion, 0);
      }
    }
    sustain_links(e, CascadeStyle::kRimStyle, 1);
  }
  RecoveryReport report = make_report(e, Strategy::kRim);
  report.recovered = single_component(report.post_topology);
  return report;
}

RecoveryReport dara1c_recover(const Topology& topo, const FailureEvent& event) {
  Engine e(topo, event);
  if (failure_partitions(topo, event.failed)) {
    // Level 0: candidates are the failed actor's 1-hop neighbors, ranked with
    // the degrees their tables held before the failure.
    std::vector<CandidateRank> candidates;
    {
      const auto pre_deg = degrees_of(adjacency(topo));
      for (NodeId nb : event.detected_by) {
        candidates.push_back(CandidateRank{nb, pre_deg.at(nb),
                                           distance(e.pos.at(nb), e.failed_pos)});
      }
    }
    Position hole = e.failed_pos;
    MoveCause cause = MoveCause::kReplaceFailed;
    for (int round = 0;; ++round) {
      if (round > e.round_limit()) {
        throw EngineError("dara1c: cascaded relocation did not terminate");
      }
      const NodeId bc = select_best_candidate(candidates);
      const Position bc_old = e.pos.at(bc);
      const auto deg_before = degrees_of(e.current_adjacency());
      std::vector<NodeId> former;  // bc's neighbors just before it departs
      for (const auto& [id, p] : e.pos) {
        if (id != bc && distance(p, bc_old) <= e.r) former.push_back(id);
      }

      e.broadcast(MessageKind::kMoving, bc, hole);
      e.move(bc, hole, cause, round);
      e.broadcast(MessageKind::kRecovered, bc, std::nullopt);

      std::vector<NodeId> detached;
      for (NodeId x : former) {
        if (distance(e.pos.at(x), e.pos.at(bc)) > e.r) detached.push_back(x);
      }
      if (detached.empty()) break;
      // Dependents that still reach bc through other links stay put; only the
      // ones in segregated components re-run the procedure against the hole
      // bc left behind.
      const std::set<NodeId> bc_component = e.component_of(bc);
      candidates.clear();
      for (NodeId x : detached) {
        if (bc_component.count(x)) continue;
        candidates.push_back(CandidateRank{x, deg_before.at(x), distance(e.pos.at(x), bc_old)});
      }
      if (candidates.empty()) break;
      hole = bc_old;
      cause = MoveCause::kCascadeChild;
    }
  }
  RecoveryReport report = make_report(e, Strategy::kDara1c);
  report.recovered = single_component(report.post_topology);
  return report;
}

RecoveryReport dara2c_recover(const Topology& topo, const FailureEvent& event) {
  if (topo.live_count() < 3 || !is_biconnected(topo)) {
    throw InvalidArgument("dara2c: pre-failure topology must be biconnected");
  }
  Engine e(topo, event);
  if (e.pos.size() < 3) {
    // Biconnectivity is unsatisfiable below 3 nodes; report without moving.
    RecoveryReport report = make_report(e, Strategy::kDara2c);
    report.recovered = false;
    return report;
  }
  if (is_biconnected(e.snapshot())) {
    RecoveryReport report = make_report(e, Strategy::kDara2c);
    report.recovered = true;
    return report;
  }

  std::vector<CandidateRank> candidates;
  {
    const auto pre_deg = degrees_of(adjacency(topo));
    for (NodeId nb : event.detected_by) {
      candidates.push_back(CandidateRank{nb, pre_deg.at(nb),
                                         distance(e.pos.at(nb), e.failed_pos)});
    }
  }
  const NodeId bc = select_best_candidate(candidates);
  e.broadcast(MessageKind::kMoving, bc, e.failed_pos);
  e.move(bc, e.failed_pos, MoveCause::kReplaceFailed, 0);
  e.broadcast(MessageKind::kRecovered, bc, std::nullopt);
  sustain_links(e, CascadeStyle::kDara2cStyle, 1);

  RecoveryReport report = make_report(e, Strategy::kDara2c);
  report.recovered =
      report.post_topology.live_count() >= 3 && is_biconnected(report.post_topology);
  if (!report.recovered) {
    const auto residual = articulation_points(report.post_topology);
    report.residual_cut_vertices.assign(residual.begin(), residual.end());
  }
  return report;
}

RecoveryReport ledir_recover(const Topology& topo, const FailureEvent& event) {
  Engine e(topo, event);
  const auto blocks = blocks_after_removal(topo, event.failed);
  if (blocks.size() >= 2) {
    const std::set<NodeId> sb = smallest_block(blocks);
    // The gateway of the smallest block replaces the failed actor.
    std::vector<CandidateRank> candidates;
    const auto pre_deg = degrees_of(adjacency(topo));
    for (NodeId nb : event.detected_by) {
      if (sb.count(nb)) {
        candidates.push_back(CandidateRank{nb, pre_deg.at(nb),
                                           distance(e.pos.at(nb), e.failed_pos)});
      }
    }
    const NodeId gateway = select_best_candidate(candidates);

    // Relocation is preemptive block movement, not link-break reaction: the
    // move notice fans out from the gateway over the block. A member left
    // beyond range of its notifier's announced landing closes back up to
    // range; one still within range takes a snug follow-up hop covering a
    // kBlockFollowShare slice of its link toward the spot the notifier
    // vacated, clamped so the landing never slips out of range. Every
    // notifier link survives, and hop lengths contract down the tree.
    std::map<NodeId, Position> vacated;  // pre-move spots, the follow targets
    for (NodeId id : sb) vacated[id] = e.pos.at(id);
    std::vector<std::pair<NodeId, NodeId>> notified;  // (member, notifier)
    std::map<NodeId, int> wave{{gateway, 0}};
    {
      const auto adj = adjacency(topo);
      std::deque<NodeId> queue{gateway};
      while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : adj.at(u)) {
          if (!sb.count(v) || wave.count(v)) continue;
          wave[v] = wave.at(u) + 1;
          notified.emplace_back(v, u);
          queue.push_back(v);
        }
      }
    }
    int last_wave = 0;
    for (const auto& [member, _] : notified) last_wave = std::max(last_wave, wave.at(member));

    // Recency for the repair pass decreases with wave depth, so strays at the
    // block's rim re-approach the core rather than pulling it back out.
    e.broadcast(MessageKind::kMoving, gateway, e.failed_pos);
    e.move(gateway, e.failed_pos, MoveCause::kReplaceFailed, last_wave + 1);
    // Connectivity is restored the moment the gateway lands; the rest of the
    // pass is block upkeep, so the completion notice goes out now.
    e.broadcast(MessageKind::kRecovered, gateway, std::nullopt);
    for (const auto& [member, notifier] : notified) {
      const Position t = e.pos.at(notifier);  // landing; BFS order: already moved
      const Position here = e.pos.at(member);
      Position d;
      if (distance(here, t) > e.r) {
        d = approach(here, t, e.r * kReconnectShrink);
      } else {
        const double orig = distance(here, vacated.at(notifier));
        d = approach(here, vacated.at(notifier), orig * (1.0 - kBlockFollowShare));
        // Clamp the hop where the landing would leave range.
        const double rho = e.r * kReconnectShrink;
        const double vx = d.x - here.x;
        const double vy = d.y - here.y;
        const double a = vx * vx + vy * vy;
        const double ex = here.x - t.x;
        const double ey = here.y - t.y;
        const double c = ex * ex + ey * ey - rho * rho;
        if (a > 0.0) {
          double s = 1.0;
          if (c > 0.0) {
            s = 0.0;  // already at the range boundary; stay put
          } else {
            const double b = 2.0 * (ex * vx + ey * vy);
            const double disc = b * b - 4.0 * a * c;
            const double hi = (-b + std::sqrt(disc)) / (2.0 * a);
            s = std::min(1.0, hi);
          }
          d = {here.x + s * vx, here.y + s * vy};
        }
      }
      if (d == e.pos.at(member)) continue;
      e.broadcast(MessageKind::kNotifyChild, member, d);
      e.move(member, d, MoveCause::kCascadeChild, last_wave + 1 - wave.at(member));
    }
    sustain_links(e, CascadeStyle::kLedirStyle, last_wave + 2);
  }
  RecoveryReport report = make_report(e, Strategy::kLedir);
  report.recovered = single_component(report.post_topology);
  return report;
}

RecoveryReport run_recovery(const Topology& topo, NodeId failed, Strategy strategy,
                            const EngineParams& params) {
  const FailureEvent event = detect_failure(topo, failed, params.heartbeat_misses);
  switch (strategy) {
    case Strategy::kRim: return rim_recover(topo, event);
    case Strategy::kDara1c: return dara1c_recover(topo, event);
    case Strategy::kDara2c: return dara2c_recover(topo, event);
    case Strategy::kLedir: return ledir_recover(topo, event);
  }
  throw InvalidArgument("run_recovery: unknown strategy");
}

}  // namespace wsan
