#include <algorithm>
#include <cstdio>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "wsan/error.hpp"
#include "wsan/io.hpp"
#include "wsan/scenarios.hpp"

namespace {

using namespace wsan;

// Shared generation flags for `generate` and topology-less `run`.
struct GenerateFlags {
  std::size_t nodes = 40;
  double range = 100.0;
  std::string density = "dense";
  std::string area;  // "WxH", empty = derive from density
};

void add_generation_flags(CLI::App* cmd, GenerateFlags& flags) {
  cmd->add_option("--nodes", flags.nodes, "Number of deployed nodes (>= 4)")
      ->capture_default_str();
  cmd->add_option("--range", flags.range, "Communication range r in meters")
      ->capture_default_str();
  cmd->add_option("--density", flags.density, "Deployment density: dense or sparse")
      ->capture_default_str();
  cmd->add_option("--area", flags.area,
                  "Deployment rectangle as WIDTHxHEIGHT in meters (default: derived "
                  "from the density class)");
}

std::pair<double, double> parse_area(const std::string& text) {
  double w = 0.0;
  double h = 0.0;
  char trailing = '\0';
  if (std::sscanf(text.c_str(), "%lfx%lf%c", &w, &h, &trailing) != 2 || w <= 0.0 || h <= 0.0) {
    throw InvalidArgument("--area must look like 500x400 with positive dimensions, got '" +
                          text + "'");
  }
  return {w, h};
}

ScenarioConfig config_from_flags(const GenerateFlags& flags, std::uint64_t seed,
                                 std::uint32_t trials, const std::vector<Strategy>& strategies) {
  ScenarioConfig config;
  config.node_count = flags.nodes;
  config.comm_range = flags.range;
  const auto density = parse_density(flags.density);
  if (!density) {
    throw InvalidArgument("--density must be dense or sparse, got '" + flags.density + "'");
  }
  config.density_class = *density;
  if (!flags.area.empty()) {
    std::tie(config.area_width, config.area_height) = parse_area(flags.area);
  }
  config.seed = seed;
  config.trials = trials;
  config.strategies = strategies;
  validate_config(config);
  return config;
}

std::vector<Strategy> parse_algo_flag(const std::string& algo) {
  if (algo == "all") {
    return {Strategy::kRim, Strategy::kDara1c, Strategy::kDara2c, Strategy::kLedir};
  }
  const auto strategy = parse_strategy(algo);
  if (!strategy) {
    throw InvalidArgument("--algo must be rim, dara1c, dara2c, ledir, or all; got '" + algo +
                          "'");
  }
  return {*strategy};
}

int cmd_generate(const GenerateFlags& flags, std::uint64_t seed, const std::string& out) {
  const ScenarioConfig config = config_from_flags(flags, seed, 1, {});
  const Topology topo = generate_topology(config, 0);
  save_topology(topo, out);
  std::printf("wrote %zu nodes to %s (average degree %.2f, %s)\n", topo.size(), out.c_str(),
              average_degree(topo), density_name(config.density_class));
  return 0;
}

struct RunFlags {
  GenerateFlags generation;
  std::string topology_file;
  std::int64_t fail_node = -1;
  bool fail_random_cut = false;
  std::string algo = "all";
  std::uint32_t trials = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::string trace_file;
};

int cmd_run(const RunFlags& flags) {
  if (flags.format != "csv" && flags.format != "json") {
    throw InvalidArgument("--format must be csv or json, got '" + flags.format + "'");
  }
  const std::vector<Strategy> strategies = parse_algo_flag(flags.algo);

  std::vector<TrialResult> trials;
  if (!flags.topology_file.empty()) {
    const Topology topo = load_topology(flags.topology_file);
    if (flags.fail_node < 0 && !flags.fail_random_cut) {
      throw InvalidArgument("with --topology, pick the failure via --fail ID or "
                            "--fail-random-cut");
    }
    if (flags.fail_node >= 0 && flags.fail_random_cut) {
      throw InvalidArgument("--fail and --fail-random-cut are mutually exclusive");
    }
    NodeId fixed_failed = 0;
    if (flags.fail_node >= 0) {
      if (flags.fail_node > 0xffffffffll || !topo.contains(static_cast<NodeId>(flags.fail_node))) {
        throw InvalidArgument("--fail: no node with id " + std::to_string(flags.fail_node) +
                              " in " + flags.topology_file);
      }
      fixed_failed = static_cast<NodeId>(flags.fail_node);
      const bool needs_partition =
          std::any_of(strategies.begin(), strategies.end(), [](Strategy s) {
            return s != Strategy::kDara2c;
          });
      if (needs_partition && blocks_after_removal(topo, fixed_failed).size() < 2) {
        throw InvalidArgument(
            "--fail " + std::to_string(fixed_failed) +
            ": not a cut vertex, so the requested recovery would be a no-op (the network "
            "stays connected without it); pick a cut vertex or use --fail-random-cut");
      }
    }
    for (std::uint32_t t = 0; t < flags.trials; ++t) {
      NodeId failed = fixed_failed;
      if (flags.fail_random_cut) {
        Rng rng = Rng::for_stream(flags.seed, t);
        failed = pick_failure(topo, rng);
      }
      trials.push_back(run_trial(topo, failed, strategies, t));
    }
  } else {
    if (flags.fail_node >= 0) {
      throw InvalidArgument("--fail requires --topology (generated runs pick a random "
                            "cut vertex per trial)");
    }
    const ScenarioConfig config =
        config_from_flags(flags.generation, flags.seed, flags.trials, strategies);
    trials = run_batch(config).trials;
  }

  const std::vector<ResultRow> rows = to_result_rows(trials);
  write_text_atomic(flags.out,
                    flags.format == "csv" ? results_to_csv(rows) : results_to_json(rows));
  if (!flags.trace_file.empty()) {
    write_text_atomic(flags.trace_file, trace_to_json(trials));
  }
  std::size_t recovered = 0;
  for (const ResultRow& r : rows) {
    if (r.recovered) ++recovered;
  }
  std::printf("wrote %zu rows (%zu trials) to %s; %zu/%zu runs recovered\n", rows.size(),
              trials.size(), flags.out.c_str(), recovered, rows.size());
  return 0;
}

int cmd_compare(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<ResultRow> rows;
  for (const std::string& path : inputs) {
    std::vector<ResultRow> file_rows;
    try {
      file_rows = results_from_csv(read_text(path));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(path + ": " + e.what());
    }
    rows.insert(rows.end(), file_rows.begin(), file_rows.end());
  }
  const std::vector<AlgorithmAggregate> aggregates = aggregate_rows(rows);
  write_text_atomic(out, summary_to_csv(aggregates));
  std::fputs(summary_to_text(aggregates).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Connectivity-restoration testbed for mobile actor networks: generates "
               "unit-disk deployments, fails cut vertices, runs the recovery schemes, and "
               "reports relocation/message/path metrics with their analytical limits."};
  app.require_subcommand(1);

  GenerateFlags gen_flags;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "Write a random connected topology file");
  add_generation_flags(gen, gen_flags);
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output topology JSON path")->required();

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run recovery trials and write result rows");
  add_generation_flags(run, run_flags.generation);
  run->add_option("--topology", run_flags.topology_file,
                  "Topology JSON file (instead of generation flags)");
  run->add_option("--fail", run_flags.fail_node, "Id of the node to fail (needs --topology)");
  run->add_flag("--fail-random-cut", run_flags.fail_random_cut,
                "Fail a uniformly random cut vertex");
  run->add_option("--algo", run_flags.algo, "rim, dara1c, dara2c, ledir, or all")
      ->capture_default_str();
  run->add_option("--trials", run_flags.trials, "Number of independent trials")
      ->capture_default_str();
  run->add_option("--seed", run_flags.seed, "RNG seed")->capture_default_str();
  run->add_option("--out", run_flags.out, "Output results path")->required();
  run->add_option("--format", run_flags.format, "Output format: csv or json")
      ->capture_default_str();
  run->add_option("--trace", run_flags.trace_file,
                  "Also write per-run relocation/message events as JSON");

  std::vector<std::string> cmp_inputs;
  std::string cmp_out;
  CLI::App* cmp = app.add_subcommand("compare", "Aggregate result files into a summary");
  cmp->add_option("--in", cmp_inputs, "Results CSV files")->required()->expected(-1);
  cmp->add_option("--out", cmp_out, "Output summary CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_flags, gen_seed, gen_out);
    if (run->parsed()) return cmd_run(run_flags);
    if (cmp->parsed()) return cmd_compare(cmp_inputs, cmp_out);
    std::fputs("error: no subcommand\n", stderr);
    return 1;
  } catch (const wsan::InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
