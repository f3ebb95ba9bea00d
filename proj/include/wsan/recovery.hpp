#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "wsan/topology.hpp"

namespace wsan {

enum class Strategy { kRim, kDara1c, kDara2c, kLedir };

const char* strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(const std::string& name);

enum class MessageKind { kHello, kHeartbeat, kMoving, kRecovered, kNotifyChild };

const char* message_kind_name(MessageKind k);

struct Message {
  MessageKind kind = MessageKind::kMoving;
  NodeId sender = 0;
  std::optional<NodeId> recipient;      // nullopt: broadcast to 1-hop neighbors
  std::optional<Position> destination;  // intended destination for MOVING / NOTIFY_CHILD
};

struct FailureEvent {
  NodeId failed = 0;
  std::set<NodeId> detected_by;           // live 1-hop neighbors at failure time
  std::uint64_t missed_heartbeats = 0;    // observations, not sent messages
};

enum class MoveCause { kReplaceFailed, kCascadeChild, kInwardMotion };

const char* move_cause_name(MoveCause c);

struct Relocation {
  NodeId node = 0;
  Position from;
  Position to;
  MoveCause cause = MoveCause::kCascadeChild;
  std::uint32_t order = 0;
};

struct RecoveryReport {
  Strategy algorithm = Strategy::kRim;
  NodeId failed = 0;
  std::vector<Relocation> relocations;
  std::vector<Message> messages;
  Topology pre_topology;   // failed node still alive
  Topology post_topology;  // failed node dead; movers at final positions
  bool recovered = false;
  std::vector<NodeId> residual_cut_vertices;  // DARA-2C only, when recovered=false
};

// Best-candidate ranking: least degree, then closest to the failed actor,
// then highest id.
struct CandidateRank {
  NodeId id = 0;
  std::uint32_t degree = 0;
  double dist_to_failed = 0.0;
};

struct EngineParams {
  int heartbeat_misses = 3;
};

// Marks the node dead conceptually and reports who notices. The caller keeps
// the pre-failure snapshot; strategies derive the survivor view themselves.
FailureEvent detect_failure(const Topology& topo, NodeId failed, int heartbeat_misses);

NodeId select_best_candidate(std::span<const CandidateRank> candidates);

// `topo` is the pre-failure snapshot (failed node alive), `event` the outcome
// of detect_failure on it.
RecoveryReport rim_recover(const Topology& topo, const FailureEvent& event);
RecoveryReport dara1c_recover(const Topology& topo, const FailureEvent& event);
RecoveryReport dara2c_recover(const Topology& topo, const FailureEvent& event);
RecoveryReport ledir_recover(const Topology& topo, const FailureEvent& event);

RecoveryReport run_recovery(const Topology& topo, NodeId failed, Strategy strategy,
                            const EngineParams& params = {});

}  // namespace wsan
