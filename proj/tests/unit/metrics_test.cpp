#include "wsan/metrics.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "wsan/error.hpp"
#include "wsan/geometry.hpp"
#include "wsan/recovery.hpp"
#include "wsan/topology.hpp"

using namespace wsan;

namespace {

Topology three_in_line(double r = 2.0) {
  return Topology({{0, {0, 0}, true}, {1, {2, 0}, true}, {2, {4, 0}, true}}, r);
}

MetricSet metrics_for(const Topology& t, NodeId failed, Strategy s) {
  return compute_metrics(run_recovery(t, failed, s));
}

}  // namespace

TEST_CASE("no-move recovery yields all-zero travel and message counts") {
  // Triangle: losing any node leaves the rest connected, so nothing relocates.
  const Topology t({{0, {0, 0}, true}, {1, {1, 0}, true}, {2, {0.5, 0.9}, true}}, 1.5);
  const MetricSet m = metrics_for(t, 2, Strategy::kRim);
  CHECK(m.total_distance == 0.0);
  CHECK(m.relocated_nodes == 0);
  CHECK(m.exchanged_messages == 0);
  CHECK(m.max_node_distance == 0.0);
  CHECK(m.max_inward_end_dist == 0.0);
  CHECK(m.extended_paths == 0);
  CHECK(m.paths_not_extended == 2);  // ordered pairs (0,1) and (1,0)
}

TEST_CASE("inward-motion metrics on the three-in-line topology") {
  const Topology t = three_in_line();
  const MetricSet m = metrics_for(t, 1, Strategy::kRim);
  CHECK(m.total_distance == doctest::Approx(2.0));
  CHECK(m.relocated_nodes == 2);
  CHECK(m.exchanged_messages == 2);
  CHECK(m.max_node_distance == doctest::Approx(1.0));
  CHECK(m.max_inward_end_dist == doctest::Approx(1.0));  // both stop r/2 from the hole
  CHECK(m.extended_paths == 0);
  CHECK(m.paths_not_extended == 2);

  const BoundCheck b = check_bounds(m, Strategy::kRim, 3, 2.0);
  CHECK(b.node_limit == 2);
  CHECK(b.node_distance_limit == doctest::Approx(1.0));
  CHECK(b.total_distance_limit == doctest::Approx(2.0));
  CHECK(b.message_limit == 5);
  CHECK(b.nodes_bound_ok);
  CHECK(b.node_distance_bound_ok);
  CHECK(b.total_distance_bound_ok);
  CHECK(b.messages_within_bound);
}

TEST_CASE("replacement metrics on the three-in-line topology") {
  const Topology t = three_in_line();
  const MetricSet m = metrics_for(t, 1, Strategy::kLedir);
  CHECK(m.total_distance == doctest::Approx(2.0));
  CHECK(m.relocated_nodes == 1);
  CHECK(m.exchanged_messages == 2);  // MOVING + RECOVERED
  CHECK(m.max_node_distance == doctest::Approx(2.0));
  CHECK(m.max_inward_end_dist == 0.0);
  CHECK(m.extended_paths == 0);
  CHECK(m.paths_not_extended == 2);

  const BoundCheck b = check_bounds(m, Strategy::kLedir, 3, 2.0);
  CHECK(b.node_limit == 1);
  CHECK(b.node_distance_limit == doctest::Approx(2.0));
  CHECK(b.total_distance_limit == doctest::Approx(2.0));
  CHECK(b.message_limit == 3);
  CHECK(b.nodes_bound_ok);
  CHECK(b.node_distance_bound_ok);
  CHECK(b.total_distance_bound_ok);
  CHECK(b.messages_within_bound);
}

TEST_CASE("repeat movers count once but accumulate travel") {
  const Topology pre = three_in_line();
  RecoveryReport rep;
  rep.algorithm = Strategy::kRim;
  rep.failed = 1;
  rep.pre_topology = pre;
  rep.post_topology = pre.with_failed(1).with_position(0, {1, 1});
  rep.relocations = {{0, {0, 0}, {1, 0}, MoveCause::kInwardMotion, 0},
                     {0, {1, 0}, {1, 1}, MoveCause::kCascadeChild, 1}};
  const MetricSet m = compute_metrics(rep);
  CHECK(m.relocated_nodes == 1);
  CHECK(m.total_distance == doctest::Approx(2.0));
  CHECK(m.max_node_distance == doctest::Approx(2.0));  // cumulative, not per-leg
  // Post positions leave 0 and 2 out of range: both ordered pairs got worse.
  CHECK(m.extended_paths == 2);
  CHECK(m.paths_not_extended == 0);
}

TEST_CASE("path bookkeeping covers every pre-reachable ordered pair") {
  const Topology t({{0, {0, 0}, true},
                    {1, {2, 0}, true},
                    {2, {4, 0}, true},
                    {3, {-2, 0}, true},
                    {4, {-4, 0}, true}},
                   2.0);
  for (Strategy s : {Strategy::kRim, Strategy::kDara1c, Strategy::kLedir}) {
    const MetricSet m = metrics_for(t, 0, s);
    // Connected before the failure: all 4*3 ordered survivor pairs have a
    // baseline, so the two buckets must partition them exactly.
    CHECK(m.extended_paths + m.paths_not_extended == 12);
  }
}

TEST_CASE("bound limits follow the deployment size") {
  const MetricSet zero;  // all-zero metrics satisfy every limit
  SUBCASE("inward scheme") {
    const BoundCheck b = check_bounds(zero, Strategy::kRim, 9, 2.0);
    CHECK(b.node_limit == 8);
    CHECK(b.node_distance_limit == doctest::Approx(1.0));
    CHECK(b.total_distance_limit == doctest::Approx(8.0));
    CHECK(b.message_limit == 17);
  }
  SUBCASE("block-relocation scheme floors the halved count") {
    CHECK(check_bounds(zero, Strategy::kLedir, 9, 2.0).node_limit == 4);
    CHECK(check_bounds(zero, Strategy::kLedir, 10, 2.0).node_limit == 4);
    CHECK(check_bounds(zero, Strategy::kLedir, 10, 2.0).message_limit == 13);
  }
  SUBCASE("cascaded-replacement scheme") {
    const BoundCheck b = check_bounds(zero, Strategy::kDara1c, 10, 3.0);
    CHECK(b.node_limit == 7);
    CHECK(b.node_distance_limit == doctest::Approx(3.0));
    CHECK(b.total_distance_limit == doctest::Approx(21.0));
    CHECK(b.message_limit == 47);
    CHECK(check_bounds(zero, Strategy::kDara2c, 10, 3.0).node_limit == 7);
  }
}

TEST_CASE("bound flags flip exactly at the limits") {
  MetricSet m;

  m.relocated_nodes = 4;
  CHECK(check_bounds(m, Strategy::kLedir, 9, 2.0).nodes_bound_ok);
  m.relocated_nodes = 5;
  CHECK_FALSE(check_bounds(m, Strategy::kLedir, 9, 2.0).nodes_bound_ok);

  m.relocated_nodes = 7;
  CHECK(check_bounds(m, Strategy::kDara1c, 10, 2.0).nodes_bound_ok);
  m.relocated_nodes = 8;
  CHECK_FALSE(check_bounds(m, Strategy::kDara1c, 10, 2.0).nodes_bound_ok);

  // The inward scheme is judged by where movers end up, not how far they came.
  m = MetricSet{};
  m.max_node_distance = 100.0;
  m.max_inward_end_dist = 1.0;
  CHECK(check_bounds(m, Strategy::kRim, 5, 2.0).node_distance_bound_ok);
  m.max_inward_end_dist = 1.0 + 1e-6;
  CHECK_FALSE(check_bounds(m, Strategy::kRim, 5, 2.0).node_distance_bound_ok);

  m = MetricSet{};
  m.max_node_distance = 2.0 + 1e-6;
  CHECK_FALSE(check_bounds(m, Strategy::kLedir, 5, 2.0).node_distance_bound_ok);

  m = MetricSet{};
  m.total_distance = 4.0 + 1e-6;  // limit for four survivors at r=2 is (r/2)*4
  CHECK_FALSE(check_bounds(m, Strategy::kRim, 5, 2.0).total_distance_bound_ok);
  m.total_distance = 4.0;
  CHECK(check_bounds(m, Strategy::kRim, 5, 2.0).total_distance_bound_ok);

  m = MetricSet{};
  m.exchanged_messages = 10;
  CHECK_FALSE(check_bounds(m, Strategy::kRim, 5, 2.0).messages_within_bound);  // limit 9
  m.exchanged_messages = 9;
  CHECK(check_bounds(m, Strategy::kRim, 5, 2.0).messages_within_bound);
}

TEST_CASE("bound checks validate their inputs") {
  const MetricSet zero;
  CHECK_THROWS_AS((void)check_bounds(zero, Strategy::kRim, 1, 2.0), InvalidArgument);
  CHECK_THROWS_AS((void)check_bounds(zero, Strategy::kRim, 0, 2.0), InvalidArgument);
  CHECK_THROWS_AS((void)check_bounds(zero, Strategy::kRim, 5, 0.0), InvalidArgument);
  CHECK_THROWS_AS((void)check_bounds(zero, Strategy::kRim, 5, -1.0), InvalidArgument);
  CHECK_THROWS_AS((void)check_bounds(zero, Strategy::kDara1c, 3, 2.0), InvalidArgument);
  CHECK_THROWS_AS((void)check_bounds(zero, Strategy::kDara2c, 3, 2.0), InvalidArgument);
  CHECK_NOTHROW((void)check_bounds(zero, Strategy::kRim, 2, 2.0));
  CHECK_NOTHROW((void)check_bounds(zero, Strategy::kLedir, 2, 2.0));
  CHECK_NOTHROW((void)check_bounds(zero, Strategy::kDara1c, 4, 2.0));
}

TEST_CASE("relative gap is symmetric and anchored at the midpoint") {
  CHECK(relative_gap(100.0, 100.0) == 0.0);
  CHECK(relative_gap(0.0, 0.0) == 0.0);
  CHECK(relative_gap(110.0, 100.0) == doctest::Approx(10.0 / 105.0));
  CHECK(relative_gap(100.0, 110.0) == doctest::Approx(10.0 / 105.0));
  CHECK(relative_gap(120.0, 100.0) == doctest::Approx(20.0 / 110.0));
  CHECK(relative_gap(110.0, 100.0) <= kEqualMeansTolerance);
  CHECK(relative_gap(120.0, 100.0) > kEqualMeansTolerance);
  CHECK(kEqualMeansTolerance == 0.15);
}
