#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsan/metrics.hpp"
#include "wsan/recovery.hpp"
#include "wsan/rng.hpp"
#include "wsan/topology.hpp"

namespace wsan {

enum class DensityClass { kDense, kSparse };

const char* density_name(DensityClass d);
std::optional<DensityClass> parse_density(const std::string& name);

// Measured-average-degree targets the generator must hit. Artifact choices;
// the comparison tables only distinguish "dense" from "sparse".
constexpr double kDenseMinDegree = 8.0;
constexpr double kSparseMinDegree = 2.0;
constexpr double kSparseMaxDegree = 4.0;
constexpr int kMaxGenerationAttempts = 1000;

struct ScenarioConfig {
  std::size_t node_count = 40;
  double comm_range = 100.0;
  // Deployment rectangle; non-positive dimensions mean "derive from the
  // density class" (see scenario_area).
  double area_width = 0.0;
  double area_height = 0.0;
  DensityClass density_class = DensityClass::kDense;
  std::uint64_t seed = 1;
  std::uint32_t trials = 1;
  std::vector<Strategy> strategies{Strategy::kRim, Strategy::kDara1c, Strategy::kLedir};
  EngineParams engine;
};

// Throws InvalidArgument on an invalid or infeasible config (N < 4, bad
// range/area, duplicate strategies, or a density target no placement of N
// nodes can meet).
void validate_config(const ScenarioConfig& config);

// Deployment rectangle actually used: the configured one, or a square sized
// so uniform placement lands near the middle of the density target.
std::pair<double, double> scenario_area(const ScenarioConfig& config);

// One strategy's outcome on a trial. precondition_ok=false means the scheme
// declined to run (e.g. 2-connectivity repair on a non-biconnected
// deployment); its metrics are all zero.
struct StrategyOutcome {
  Strategy strategy = Strategy::kRim;
  bool precondition_ok = true;
  bool recovered = false;
  MetricSet metrics;
  BoundCheck bounds;
  std::vector<Relocation> relocations;
  std::vector<Message> messages;
  std::vector<NodeId> residual_cut_vertices;
};

struct TrialResult {
  std::uint32_t trial_index = 0;
  Topology topology;  // shared pre-failure snapshot; every strategy sees this
  NodeId failed = 0;
  std::vector<StrategyOutcome> outcomes;
};

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for fewer than 2 runs
};

Aggregate aggregate_values(const std::vector<double>& values);

struct StrategySummary {
  Strategy strategy = Strategy::kRim;
  std::size_t runs = 0;
  Aggregate relocated_nodes;
  Aggregate total_distance;
  Aggregate max_node_distance;
  Aggregate exchanged_messages;
  Aggregate extended_paths;
  Aggregate paths_not_extended;
  double recovered_fraction = 0.0;
};

struct BatchResult {
  ScenarioConfig config;
  std::vector<TrialResult> trials;
  std::vector<StrategySummary> summaries;
};

// Connected uniform placement meeting the density target; deterministic in
// (config.seed, trial_index). Throws EngineError after 1000 failed attempts.
Topology generate_topology(const ScenarioConfig& config, std::uint32_t trial_index);

// Uniformly random cut vertex. Throws InvalidArgument when the topology has
// none (callers resample).
NodeId pick_failure(const Topology& topo, Rng& rng);

// Runs every requested strategy against the same snapshot and failed node.
TrialResult run_trial(const Topology& topo, NodeId failed,
                      const std::vector<Strategy>& strategies, std::uint32_t trial_index,
                      const EngineParams& params = {});

// `config.trials` independent trials plus per-strategy aggregates. Trials run
// in parallel (optionally capped by WSAN_RECOVER_THREADS); each derives its
// RNG stream from (seed, trial_index), so the result is identical either way.
BatchResult run_batch(const ScenarioConfig& config);

std::vector<StrategySummary> summarize(const std::vector<TrialResult>& trials);

// Biconnected ring with a few interior chord nodes, for 2-connectivity
// experiments: consecutive ring nodes sit within range, skip links do not
// form, so removing any ring node leaves cut vertices.
Topology generate_ring_topology(std::size_t node_count, double comm_range, std::uint64_t seed);

}  // namespace wsan
