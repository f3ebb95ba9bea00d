#include "wsan/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wsan/error.hpp"

namespace wsan {

namespace {

using nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

[[noreturn]] void schema_error(const std::string& what) {
  throw InvalidArgument("topology JSON: " + what);
}

double require_finite_number(const ordered_json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(where + " must be finite");
  return d;
}

}  // namespace

std::string topology_to_json(const Topology& topo) {
  for (const Node& n : topo.nodes()) {
    if (!n.alive) {
      throw InvalidArgument("topology files describe deployments; node " +
                            std::to_string(n.id) + " is dead");
    }
  }
  ordered_json doc;
  doc["version"] = 1;
  doc["comm_range"] = topo.comm_range();
  ordered_json nodes = ordered_json::array();
  for (const Node& n : topo.nodes()) {
    nodes.push_back(ordered_json{{"id", n.id}, {"x", n.position.x}, {"y", n.position.y}});
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

Topology topology_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("topology JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("document must be an object");
  if (doc.contains("version") &&
      !(doc["version"].is_number_integer() && doc["version"].get<int>() == 1)) {
    schema_error("unsupported version (expected 1)");
  }
  if (!doc.contains("comm_range")) schema_error("missing field comm_range");
  const double comm_range = require_finite_number(doc["comm_range"], "comm_range");
  if (comm_range <= 0.0) schema_error("comm_range must be positive");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    schema_error("missing or non-array field nodes");
  }

  std::vector<Node> nodes;
  std::set<NodeId> seen;
  std::size_t i = 0;
  for (const ordered_json& entry : doc["nodes"]) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    if (!entry.is_object()) schema_error(where + " must be an object");
    if (!entry.contains("id") || !entry["id"].is_number_integer()) {
      schema_error(where + ".id must be an integer");
    }
    const std::int64_t raw_id = entry["id"].get<std::int64_t>();
    if (raw_id < 0 || raw_id > 0xffffffffll) schema_error(where + ".id out of range");
    const NodeId id = static_cast<NodeId>(raw_id);
    if (!seen.insert(id).second) {
      schema_error(where + ".id " + std::to_string(id) + " duplicates an earlier node");
    }
    if (!entry.contains("x") || !entry.contains("y")) {
      schema_error(where + " must have x and y");
    }
    const double x = require_finite_number(entry["x"], where + ".x");
    const double y = require_finite_number(entry["y"], where + ".y");
    nodes.push_back(Node{id, Position{x, y}, true});
    ++i;
  }
  return Topology(std::move(nodes), comm_range);
}

void save_topology(const Topology& topo, const std::string& path) {
  write_text_atomic(path, topology_to_json(topo));
}

Topology load_topology(const std::string& path) {
  return topology_from_json(read_text(path));
}

ResultRow to_result_row(std::uint32_t trial, NodeId failed, const StrategyOutcome& outcome) {
  ResultRow row;
  row.trial = trial;
  row.algorithm = strategy_name(outcome.strategy);
  row.failed_node = failed;
  row.relocated_nodes = outcome.metrics.relocated_nodes;
  row.total_distance = outcome.metrics.total_distance;
  row.max_node_distance = outcome.metrics.max_node_distance;
  row.messages = outcome.metrics.exchanged_messages;
  row.extended_paths = outcome.metrics.extended_paths;
  row.paths_not_extended = outcome.metrics.paths_not_extended;
  row.recovered = outcome.precondition_ok && outcome.recovered;
  row.nodes_bound_ok = outcome.bounds.nodes_bound_ok;
  row.node_distance_bound_ok = outcome.bounds.node_distance_bound_ok;
  row.total_distance_bound_ok = outcome.bounds.total_distance_bound_ok;
  return row;
}

std::vector<ResultRow> to_result_rows(const std::vector<TrialResult>& trials) {
  std::vector<ResultRow> rows;
  for (const TrialResult& t : trials) {
    for (const StrategyOutcome& outcome : t.outcomes) {
      rows.push_back(to_result_row(t.trial_index, t.failed, outcome));
    }
  }
  return rows;
}

std::string results_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << kResultsCsvComment << '\n' << kResultsCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.trial << ',' << r.algorithm << ',' << r.failed_node << ',' << r.relocated_nodes
        << ',' << fmt_double(r.total_distance) << ',' << fmt_double(r.max_node_distance) << ','
        << r.messages << ',' << r.extended_paths << ',' << r.paths_not_extended << ','
        << bool_text(r.recovered) << ',' << bool_text(r.nodes_bound_ok) << ','
        << bool_text(r.node_distance_bound_ok) << ',' << bool_text(r.total_distance_bound_ok)
        << '\n';
  }
  return out.str();
}

std::string results_to_json(const std::vector<ResultRow>& rows) {
  ordered_json doc;
  doc["version"] = 1;
  ordered_json list = ordered_json::array();
  for (const ResultRow& r : rows) {
    list.push_back(ordered_json{{"trial", r.trial},
                                {"algorithm", r.algorithm},
                                {"failed_node", r.failed_node},
                                {"relocated_nodes", r.relocated_nodes},
                                {"total_distance", r.total_distance},
                                {"max_node_distance", r.max_node_distance},
                                {"messages", r.messages},
                                {"extended_paths", r.extended_paths},
                                {"paths_not_extended", r.paths_not_extended},
                                {"recovered", r.recovered},
                                {"nodes_bound_ok", r.nodes_bound_ok},
                                {"node_distance_bound_ok", r.node_distance_bound_ok},
                                {"total_distance_bound_ok", r.total_distance_bound_ok}});
  }
  doc["results"] = std::move(list);
  return doc.dump(2) + "\n";
}

namespace {

[[noreturn]] void row_error(std::size_t line, const std::string& what) {
  throw InvalidArgument("results CSV line " + std::to_string(line) + ": " + what);
}

std::uint64_t parse_u64(const std::string& field, std::size_t line, const std::string& name) {
  try {
    // stoull tolerates a sign and whitespace; the schema does not.
    if (field.empty() || !std::isdigit(static_cast<unsigned char>(field[0]))) {
      throw std::invalid_argument(field);
    }
    std::size_t used = 0;
    const unsigned long long v = std::stoull(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    row_error(line, name + " is not a non-negative integer: '" + field + "'");
  }
}

double parse_double(const std::string& field, std::size_t line, const std::string& name) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size() || !std::isfinite(v)) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    row_error(line, name + " is not a finite number: '" + field + "'");
  }
}

bool parse_bool(const std::string& field, std::size_t line, const std::string& name) {
  if (field == "true") return true;
  if (field == "false") return false;
  row_error(line, name + " must be true or false, got '" + field + "'");
}

}  // namespace

std::vector<ResultRow> results_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kResultsCsvHeader) {
        row_error(line_no, "expected the results header '" + std::string(kResultsCsvHeader) +
                               "', got '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream split(line);
    while (std::getline(split, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.push_back("");
    if (fields.size() != 13) {
      row_error(line_no, "expected 13 columns, got " + std::to_string(fields.size()));
    }
    ResultRow r;
    r.trial = static_cast<std::uint32_t>(parse_u64(fields[0], line_no, "trial"));
    r.algorithm = fields[1];
    if (r.algorithm.empty()) row_error(line_no, "algorithm is empty");
    r.failed_node = static_cast<NodeId>(parse_u64(fields[2], line_no, "failed_node"));
    r.relocated_nodes =
        static_cast<std::uint32_t>(parse_u64(fields[3], line_no, "relocated_nodes"));
    r.total_distance = parse_double(fields[4], line_no, "total_distance");
    r.max_node_distance = parse_double(fields[5], line_no, "max_node_distance");
    r.messages = parse_u64(fields[6], line_no, "messages");
    r.extended_paths = parse_u64(fields[7], line_no, "extended_paths");
    r.paths_not_extended = parse_u64(fields[8], line_no, "paths_not_extended");
    r.recovered = parse_bool(fields[9], line_no, "recovered");
    r.nodes_bound_ok = parse_bool(fields[10], line_no, "nodes_bound_ok");
    r.node_distance_bound_ok = parse_bool(fields[11], line_no, "node_distance_bound_ok");
    r.total_distance_bound_ok = parse_bool(fields[12], line_no, "total_distance_bound_ok");
    rows.push_back(std::move(r));
  }
  if (!header_seen) {
    throw InvalidArgument("results CSV: no header found (empty or comment-only input)");
  }
  return rows;
}

std::string trace_to_json(const std::vector<TrialResult>& trials) {
  ordered_json doc;
  doc["version"] = 1;
  ordered_json out_trials = ordered_json::array();
  for (const TrialResult& t : trials) {
    ordered_json runs = ordered_json::array();
    for (const StrategyOutcome& o : t.outcomes) {
      ordered_json relocations = ordered_json::array();
      for (const Relocation& rel : o.relocations) {
        relocations.push_back(ordered_json{{"order", rel.order},
                                           {"node", rel.node},
                                           {"cause", move_cause_name(rel.cause)},
                                           {"from", {rel.from.x, rel.from.y}},
                                           {"to", {rel.to.x, rel.to.y}}});
      }
      ordered_json messages = ordered_json::array();
      for (const Message& msg : o.messages) {
        ordered_json m{{"kind", message_kind_name(msg.kind)}, {"sender", msg.sender}};
        if (msg.recipient) {
          m["recipient"] = *msg.recipient;
        } else {
          m["broadcast"] = true;
        }
        if (msg.destination) m["destination"] = {msg.destination->x, msg.destination->y};
        messages.push_back(std::move(m));
      }
      ordered_json run{{"algorithm", strategy_name(o.strategy)},
                       {"precondition_ok", o.precondition_ok},
                       {"recovered", o.recovered},
                       {"relocations", std::move(relocations)},
                       {"messages", std::move(messages)}};
      if (!o.residual_cut_vertices.empty()) {
        run["residual_cut_vertices"] = o.residual_cut_vertices;
      }
      runs.push_back(std::move(run));
    }
    out_trials.push_back(ordered_json{
        {"trial", t.trial_index}, {"failed_node", t.failed}, {"runs", std::move(runs)}});
  }
  doc["trials"] = std::move(out_trials);
  return doc.dump(2) + "\n";
}

std::vector<AlgorithmAggregate> aggregate_rows(const std::vector<ResultRow>& rows) {
  std::vector<std::string> order;
  for (const ResultRow& r : rows) {
    if (std::find(order.begin(), order.end(), r.algorithm) == order.end()) {
      order.push_back(r.algorithm);
    }
  }
  std::vector<AlgorithmAggregate> aggregates;
  for (const std::string& algo : order) {
    AlgorithmAggregate a;
    a.algorithm = algo;
    std::vector<double> relocated, total, max_node, messages, extended, kept;
    std::size_t recovered = 0;
    for (const ResultRow& r : rows) {
      if (r.algorithm != algo) continue;
      relocated.push_back(r.relocated_nodes);
      total.push_back(r.total_distance);
      max_node.push_back(r.max_node_distance);
      messages.push_back(static_cast<double>(r.messages));
      extended.push_back(static_cast<double>(r.extended_paths));
      kept.push_back(static_cast<double>(r.paths_not_extended));
      if (r.recovered) ++recovered;
    }
    a.runs = relocated.size();
    a.recovered_fraction =
        a.runs == 0 ? 0.0 : static_cast<double>(recovered) / static_cast<double>(a.runs);
    a.relocated_nodes = aggregate_values(relocated);
    a.total_distance = aggregate_values(total);
    a.max_node_distance = aggregate_values(max_node);
    a.messages = aggregate_values(messages);
    a.extended_paths = aggregate_values(extended);
    a.paths_not_extended = aggregate_values(kept);
    aggregates.push_back(std::move(a));
  }
  return aggregates;
}

std::string overhead_verdict(const std::vector<AlgorithmAggregate>& aggregates) {
  const AlgorithmAggregate* ledir = nullptr;
  const AlgorithmAggregate* rim = nullptr;
  for (const AlgorithmAggregate& a : aggregates) {
    if (a.algorithm == "ledir") ledir = &a;
    if (a.algorithm == "rim") rim = &a;
  }
  if (ledir == nullptr || rim == nullptr) {
    return "no overhead verdict: needs both ledir and rim rows";
  }
  const double reloc_gap = relative_gap(ledir->relocated_nodes.mean, rim->relocated_nodes.mean);
  const double dist_gap = relative_gap(ledir->total_distance.mean, rim->total_distance.mean);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                " (relocated-nodes gap %.1f%%, total-distance gap %.1f%%, tolerance %.0f%%)",
                reloc_gap * 100.0, dist_gap * 100.0, kEqualMeansTolerance * 100.0);
  if (reloc_gap <= kEqualMeansTolerance && dist_gap <= kEqualMeansTolerance) {
    return std::string("ledir statistically equal to rim on travel overhead") + detail;
  }
  const bool ledir_lower = ledir->relocated_nodes.mean <= rim->relocated_nodes.mean &&
                           ledir->total_distance.mean <= rim->total_distance.mean;
  const bool rim_lower = rim->relocated_nodes.mean <= ledir->relocated_nodes.mean &&
                         rim->total_distance.mean <= ledir->total_distance.mean;
  if (ledir_lower) return std::string("ledir outperforms rim on travel overhead") + detail;
  if (rim_lower) return std::string("rim outperforms ledir on travel overhead") + detail;
  return std::string("mixed overhead ordering between ledir and rim") + detail;
}

std::string summary_to_csv(const std::vector<AlgorithmAggregate>& aggregates) {
  std::ostringstream out;
  out << "# wsan-summary v1\n";
  out << "algorithm,runs,recovered_fraction,mean_relocated_nodes,stddev_relocated_nodes,"
         "mean_total_distance,stddev_total_distance,mean_max_node_distance,"
         "stddev_max_node_distance,mean_messages,stddev_messages,mean_extended_paths,"
         "stddev_extended_paths,mean_paths_not_extended,stddev_paths_not_extended\n";
  for (const AlgorithmAggregate& a : aggregates) {
    out << a.algorithm << ',' << a.runs << ',' << fmt_double(a.recovered_fraction) << ','
        << fmt_double(a.relocated_nodes.mean) << ',' << fmt_double(a.relocated_nodes.stddev)
        << ',' << fmt_double(a.total_distance.mean) << ',' << fmt_double(a.total_distance.stddev)
        << ',' << fmt_double(a.max_node_distance.mean) << ','
        << fmt_double(a.max_node_distance.stddev) << ',' << fmt_double(a.messages.mean) << ','
        << fmt_double(a.messages.stddev) << ',' << fmt_double(a.extended_paths.mean) << ','
        << fmt_double(a.extended_paths.stddev) << ',' << fmt_double(a.paths_not_extended.mean)
        << ',' << fmt_double(a.paths_not_extended.stddev) << '\n';
  }
  out << "# verdict: " << overhead_verdict(aggregates) << '\n';
  return out.str();
}

std::string summary_to_text(const std::vector<AlgorithmAggregate>& aggregates) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-8s %6s %10s %18s %22s %16s %14s\n", "algo", "runs",
                "recovered", "relocated", "total_distance", "messages", "ext_paths");
  out << buf;
  for (const AlgorithmAggregate& a : aggregates) {
    std::snprintf(buf, sizeof(buf), "%-8s %6zu %9.1f%% %9.3g +- %-6.3g %12.5g +- %-7.5g %8.4g +- %-5.4g %7.4g\n",
                  a.algorithm.c_str(), a.runs, a.recovered_fraction * 100.0,
                  a.relocated_nodes.mean, a.relocated_nodes.stddev, a.total_distance.mean,
                  a.total_distance.stddev, a.messages.mean, a.messages.stddev,
                  a.extended_paths.mean);
    out << buf;
  }
  out << "verdict: " << overhead_verdict(aggregates) << '\n';
  return out.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  const fs::path tmp =
      dir / (target.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path);
  return buf.str();
}

}  // namespace wsan
