#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsan/scenarios.hpp"
#include "wsan/topology.hpp"

namespace wsan {

// Topology files: versioned JSON with the communication range and one
// {id, x, y} entry per node. Loading validates ids, range, and coordinates
// with a field-level diagnostic.
std::string topology_to_json(const Topology& topo);
Topology topology_from_json(const std::string& text);
void save_topology(const Topology& topo, const std::string& path);
Topology load_topology(const std::string& path);

// One results row per (trial, strategy); mirrors the CSV columns.
struct ResultRow {
  std::uint32_t trial = 0;
  std::string algorithm;
  NodeId failed_node = 0;
  std::uint32_t relocated_nodes = 0;
  double total_distance = 0.0;
  double max_node_distance = 0.0;
  std::uint64_t messages = 0;
  std::uint64_t extended_paths = 0;
  std::uint64_t paths_not_extended = 0;
  bool recovered = false;
  bool nodes_bound_ok = false;
  bool node_distance_bound_ok = false;
  bool total_distance_bound_ok = false;
};

inline constexpr const char* kResultsCsvComment = "# wsan-results v1";
inline constexpr const char* kResultsCsvHeader =
    "trial,algorithm,failed_node,relocated_nodes,total_distance,max_node_distance,messages,"
    "extended_paths,paths_not_extended,recovered,nodes_bound_ok,node_distance_bound_ok,"
    "total_distance_bound_ok";

ResultRow to_result_row(std::uint32_t trial, NodeId failed, const StrategyOutcome& outcome);
std::vector<ResultRow> to_result_rows(const std::vector<TrialResult>& trials);

std::string results_to_csv(const std::vector<ResultRow>& rows);
std::string results_to_json(const std::vector<ResultRow>& rows);
// Accepts comment lines anywhere; the first non-comment line must be exactly
// the documented header. Throws InvalidArgument on any schema mismatch.
std::vector<ResultRow> results_from_csv(const std::string& text);

// Ordered relocation and message events of every run, as versioned JSON.
std::string trace_to_json(const std::vector<TrialResult>& trials);

// Per-algorithm aggregates over result rows, for the comparison summary.
struct AlgorithmAggregate {
  std::string algorithm;
  std::size_t runs = 0;
  double recovered_fraction = 0.0;
  Aggregate relocated_nodes;
  Aggregate total_distance;
  Aggregate max_node_distance;
  Aggregate messages;
  Aggregate extended_paths;
  Aggregate paths_not_extended;
};

std::vector<AlgorithmAggregate> aggregate_rows(const std::vector<ResultRow>& rows);
std::string summary_to_csv(const std::vector<AlgorithmAggregate>& aggregates);
std::string summary_to_text(const std::vector<AlgorithmAggregate>& aggregates);

// Travel-overhead verdict between the block-movement scheme and inward
// motion: means within the documented tolerance count as equal, otherwise
// whichever is lower on both relocation count and total distance wins.
std::string overhead_verdict(const std::vector<AlgorithmAggregate>& aggregates);

// Whole-file write via temp file + rename, so readers never see a torn file.
void write_text_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace wsan
