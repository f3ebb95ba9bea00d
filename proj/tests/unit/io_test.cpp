#include "wsan/io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "wsan/error.hpp"
#include "wsan/recovery.hpp"
#include "wsan/scenarios.hpp"
#include "wsan/topology.hpp"

using namespace wsan;
namespace fs = std::filesystem;

namespace {

Topology three_in_line(double r = 2.0) {
  return Topology({{0, {0, 0}, true}, {1, {2, 0}, true}, {2, {4, 0}, true}}, r);
}

// Fresh per-test scratch directory under the system temp root.
struct ScratchDir {
  fs::path path;
  ScratchDir() {
    path = fs::temp_directory_path() /
           ("wsan-io-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ignored;
    fs::remove_all(path, ignored);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

ResultRow sample_row(std::uint32_t trial, const std::string& algo, double total) {
  ResultRow r;
  r.trial = trial;
  r.algorithm = algo;
  r.failed_node = 7;
  r.relocated_nodes = 3;
  r.total_distance = total;
  r.max_node_distance = 12.25;
  r.messages = 1234567890123ull;
  r.extended_paths = 2;
  r.paths_not_extended = 40;
  r.recovered = true;
  r.nodes_bound_ok = true;
  r.node_distance_bound_ok = false;
  r.total_distance_bound_ok = true;
  return r;
}

bool rows_equal(const ResultRow& a, const ResultRow& b) {
  return a.trial == b.trial && a.algorithm == b.algorithm && a.failed_node == b.failed_node &&
         a.relocated_nodes == b.relocated_nodes && a.total_distance == b.total_distance &&
         a.max_node_distance == b.max_node_distance && a.messages == b.messages &&
         a.extended_paths == b.extended_paths && a.paths_not_extended == b.paths_not_extended &&
         a.recovered == b.recovered && a.nodes_bound_ok == b.nodes_bound_ok &&
         a.node_distance_bound_ok == b.node_distance_bound_ok &&
         a.total_distance_bound_ok == b.total_distance_bound_ok;
}

}  // namespace

TEST_CASE("topology JSON round-trips exactly") {
  const Topology t({{0, {0, 0}, true}, {3, {1.5, -2.25}, true}, {9, {100.125, 7}, true}}, 42.5);
  const std::string text = topology_to_json(t);
  CHECK(text.find("\"version\": 1") != std::string::npos);

  const Topology back = topology_from_json(text);
  CHECK(back.comm_range() == 42.5);
  REQUIRE(back.size() == 3);
  CHECK(back.nodes()[0].id == 0);
  CHECK(back.nodes()[1].id == 3);
  CHECK(back.nodes()[2].id == 9);
  CHECK(back.node(3).position == Position{1.5, -2.25});
  CHECK(back.node(9).position == Position{100.125, 7});
  CHECK(back.live_count() == 3);

  CHECK(topology_to_json(back) == text);  // stable re-serialization
}

TEST_CASE("topology serialization refuses dead nodes") {
  const Topology t = three_in_line().with_failed(1);
  CHECK_THROWS_AS((void)topology_to_json(t), InvalidArgument);
}

TEST_CASE("topology loader rejects schema violations") {
  auto load = [](const std::string& s) { return topology_from_json(s); };
  const char* bad[] = {
      "{ nope",                                                        // malformed
      "[1, 2]",                                                        // not an object
      R"({"version": 2, "comm_range": 1, "nodes": []})",               // wrong version
      R"({"nodes": []})",                                              // missing range
      R"({"comm_range": 0, "nodes": []})",                             // zero range
      R"({"comm_range": -4, "nodes": []})",                            // negative range
      R"({"comm_range": "far", "nodes": []})",                         // non-numeric range
      R"({"comm_range": 1})",                                          // missing nodes
      R"({"comm_range": 1, "nodes": 5})",                              // nodes not array
      R"({"comm_range": 1, "nodes": [3]})",                            // entry not object
      R"({"comm_range": 1, "nodes": [{"id": 1.5, "x": 0, "y": 0}]})",  // fractional id
      R"({"comm_range": 1, "nodes": [{"id": -1, "x": 0, "y": 0}]})",   // negative id
      R"({"comm_range": 1, "nodes": [{"id": 0, "x": 0}]})",            // missing y
      R"({"comm_range": 1, "nodes": [{"id": 0, "x": "a", "y": 0}]})",  // non-numeric x
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS((void)load(text), InvalidArgument);
  }

  try {
    (void)load(R"({"comm_range": 1, "nodes": [{"id": 4, "x": 0, "y": 0},
                                              {"id": 4, "x": 1, "y": 0}]})");
    FAIL("duplicate id accepted");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("duplicates an earlier node") != std::string::npos);
  }

  // Version field is optional; comments about order are not required.
  CHECK_NOTHROW((void)load(R"({"comm_range": 1, "nodes": []})"));
}

TEST_CASE("topology files survive a save/load cycle") {
  const ScratchDir dir;
  const Topology t = three_in_line();
  const std::string path = dir.file("topo.json");
  save_topology(t, path);
  const Topology back = load_topology(path);
  CHECK(back.size() == 3);
  CHECK(back.comm_range() == 2.0);
  CHECK(back.node(2).position == Position{4, 0});

  CHECK_THROWS_AS((void)load_topology(dir.file("missing.json")), IoError);
}

TEST_CASE("result rows fold the precondition into the recovered flag") {
  StrategyOutcome o;
  o.strategy = Strategy::kDara2c;
  o.precondition_ok = false;
  o.recovered = true;  // meaningless when declined; must not leak through
  const ResultRow row = to_result_row(4, 17, o);
  CHECK(row.trial == 4);
  CHECK(row.failed_node == 17);
  CHECK(row.algorithm == "dara2c");
  CHECK_FALSE(row.recovered);
}

TEST_CASE("results CSV round-trips and pins its header") {
  std::vector<ResultRow> rows{sample_row(0, "rim", 6.5), sample_row(1, "ledir", 0.046875)};
  rows[1].recovered = false;
  rows[1].messages = 0;

  const std::string csv = results_to_csv(rows);
  CHECK(csv.find(std::string(kResultsCsvComment) + "\n" + kResultsCsvHeader + "\n") == 0);

  const std::vector<ResultRow> back = results_from_csv(csv);
  REQUIRE(back.size() == 2);
  CHECK(rows_equal(back[0], rows[0]));
  CHECK(rows_equal(back[1], rows[1]));
}

TEST_CASE("results CSV reader tolerates comments and CRLF but not schema drift") {
  const std::string ok = std::string("# a note\r\n\r\n") + kResultsCsvHeader +
                         "\r\n# mid-file comment\n" +
                         "0,rim,1,2,3.5,1.25,6,0,12,true,true,true,false\r\n";
  const std::vector<ResultRow> rows = results_from_csv(ok);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].algorithm == "rim");
  CHECK(rows[0].total_distance == 3.5);
  CHECK_FALSE(rows[0].total_distance_bound_ok);

  auto throws_with = [](const std::string& text, const char* needle) {
    try {
      (void)results_from_csv(text);
      return false;
    } catch (const InvalidArgument& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
  };
  const std::string head = std::string(kResultsCsvHeader) + "\n";
  CHECK(throws_with("", "no header"));
  CHECK(throws_with("# only comments\n", "no header"));
  CHECK(throws_with("trial,algorithm\n", "expected the results header"));
  CHECK(throws_with(head + "0,rim,1,2,3,4,5,6,7,true,true,true\n", "expected 13 columns"));
  CHECK(throws_with(head + "0,rim,1,2,3,4,5,6,7,true,true,true,maybe", "true or false"));
  CHECK(throws_with(head + "0,rim,1,2,3,4,-5,6,7,true,true,true,true", "non-negative integer"));
  CHECK(throws_with(head + "0,rim,1,2,3,4,x,6,7,true,true,true,true", "non-negative integer"));
  CHECK(throws_with(head + "0,rim,1,2,nan,4,5,6,7,true,true,true,true", "finite number"));
  CHECK(throws_with(head + "0,,1,2,3,4,5,6,7,true,true,true,true", "algorithm is empty"));
}

TEST_CASE("results JSON carries the full schema") {
  const std::vector<ResultRow> rows{sample_row(2, "dara1c", 9.75)};
  const nlohmann::json doc = nlohmann::json::parse(results_to_json(rows));
  CHECK(doc.at("version") == 1);
  REQUIRE(doc.at("results").size() == 1);
  const nlohmann::json& r = doc.at("results")[0];
  CHECK(r.at("trial") == 2);
  CHECK(r.at("algorithm") == "dara1c");
  CHECK(r.at("failed_node") == 7);
  CHECK(r.at("relocated_nodes") == 3);
  CHECK(r.at("total_distance") == 9.75);
  CHECK(r.at("max_node_distance") == 12.25);
  CHECK(r.at("messages") == 1234567890123ull);
  CHECK(r.at("extended_paths") == 2);
  CHECK(r.at("paths_not_extended") == 40);
  CHECK(r.at("recovered") == true);
  CHECK(r.at("nodes_bound_ok") == true);
  CHECK(r.at("node_distance_bound_ok") == false);
  CHECK(r.at("total_distance_bound_ok") == true);
}

TEST_CASE("trace JSON lists ordered relocations and messages") {
  const TrialResult tr = run_trial(three_in_line(), 1, {Strategy::kRim, Strategy::kLedir}, 3);
  const nlohmann::json doc = nlohmann::json::parse(trace_to_json({tr}));
  CHECK(doc.at("version") == 1);
  REQUIRE(doc.at("trials").size() == 1);
  const nlohmann::json& t = doc.at("trials")[0];
  CHECK(t.at("trial") == 3);
  CHECK(t.at("failed_node") == 1);
  REQUIRE(t.at("runs").size() == 2);

  const nlohmann::json& rim = t.at("runs")[0];
  CHECK(rim.at("algorithm") == "rim");
  CHECK(rim.at("precondition_ok") == true);
  CHECK(rim.at("recovered") == true);
  REQUIRE(rim.at("relocations").size() == 2);
  CHECK(rim.at("relocations")[0].at("order") == 0);
  CHECK(rim.at("relocations")[0].at("node") == 0);
  CHECK(rim.at("relocations")[0].at("cause") == "INWARD_MOTION");
  CHECK(rim.at("relocations")[0].at("to") == nlohmann::json::array({1.0, 0.0}));
  REQUIRE(rim.at("messages").size() == 2);
  CHECK(rim.at("messages")[0].at("kind") == "MOVING");
  CHECK(rim.at("messages")[0].at("broadcast") == true);
  CHECK(rim.at("messages")[0].contains("destination"));

  const nlohmann::json& ledir = t.at("runs")[1];
  CHECK(ledir.at("algorithm") == "ledir");
  REQUIRE(ledir.at("relocations").size() == 1);
  CHECK(ledir.at("relocations")[0].at("cause") == "REPLACE_FAILED");
}

TEST_CASE("row aggregation groups by algorithm in first-appearance order") {
  std::vector<ResultRow> rows;
  ResultRow a = sample_row(0, "ledir", 4.0);
  a.relocated_nodes = 2;
  ResultRow b = sample_row(1, "ledir", 8.0);
  b.relocated_nodes = 4;
  b.recovered = false;
  ResultRow c = sample_row(0, "rim", 6.0);
  c.relocated_nodes = 9;
  rows = {a, c, b};

  const std::vector<AlgorithmAggregate> agg = aggregate_rows(rows);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].algorithm == "ledir");
  CHECK(agg[0].runs == 2);
  CHECK(agg[0].recovered_fraction == 0.5);
  CHECK(agg[0].relocated_nodes.mean == doctest::Approx(3.0));
  CHECK(agg[0].relocated_nodes.stddev == doctest::Approx(std::sqrt(2.0)));
  CHECK(agg[0].total_distance.mean == doctest::Approx(6.0));
  CHECK(agg[1].algorithm == "rim");
  CHECK(agg[1].runs == 1);
  CHECK(agg[1].relocated_nodes.stddev == 0.0);

  CHECK(aggregate_rows({}).empty());
}

TEST_CASE("overhead verdict compares the block scheme against inward motion") {
  auto agg = [](const char* algo, double reloc, double dist) {
    AlgorithmAggregate a;
    a.algorithm = algo;
    a.runs = 10;
    a.relocated_nodes.mean = reloc;
    a.total_distance.mean = dist;
    return a;
  };
  using V = std::vector<AlgorithmAggregate>;

  CHECK(overhead_verdict(V{agg("ledir", 10, 100), agg("rim", 11, 104)})
            .starts_with("ledir statistically equal to rim"));
  CHECK(overhead_verdict(V{agg("ledir", 5, 50), agg("rim", 11, 104)})
            .starts_with("ledir outperforms rim"));
  CHECK(overhead_verdict(V{agg("ledir", 11, 104), agg("rim", 5, 50)})
            .starts_with("rim outperforms ledir"));
  CHECK(overhead_verdict(V{agg("ledir", 5, 104), agg("rim", 11, 50)})
            .starts_with("mixed overhead ordering"));
  CHECK(overhead_verdict(V{agg("ledir", 5, 50)})
            .starts_with("no overhead verdict"));
  CHECK(overhead_verdict(V{}).starts_with("no overhead verdict"));
}

TEST_CASE("summary CSV carries one row per algorithm and a verdict") {
  const std::vector<ResultRow> rows{sample_row(0, "ledir", 4.0), sample_row(0, "rim", 4.5)};
  const std::string csv = summary_to_csv(aggregate_rows(rows));
  CHECK(csv.starts_with("# wsan-summary v1\nalgorithm,runs,recovered_fraction,"));
  CHECK(csv.find("\nledir,1,1,") != std::string::npos);
  CHECK(csv.find("\nrim,1,1,") != std::string::npos);
  CHECK(csv.find("# verdict: ledir statistically equal to rim") != std::string::npos);

  const std::string text = summary_to_text(aggregate_rows(rows));
  CHECK(text.find("ledir") != std::string::npos);
  CHECK(text.find("verdict:") != std::string::npos);
}

TEST_CASE("atomic writes leave no temp files behind") {
  const ScratchDir dir;
  const std::string path = dir.file("out.csv");
  write_text_atomic(path, "first\n");
  CHECK(read_text(path) == "first\n");
  write_text_atomic(path, "second\n");  // overwrite in place
  CHECK(read_text(path) == "second\n");

  std::size_t entries = 0;
  for (const auto& e : fs::directory_iterator(dir.path)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);

  CHECK_THROWS_AS((void)read_text(dir.file("absent.txt")), IoError);
  CHECK_THROWS_AS(write_text_atomic(dir.file("no/such/dir/out.txt"), "x"), IoError);
}
