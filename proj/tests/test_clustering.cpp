#include <doctest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "l2r/clustering.hpp"
#include "l2r/trajectory_graph.hpp"
#include "test_worlds.hpp"

using namespace l2r;
using testing::make_net;
using testing::make_traj;

namespace {

// chain a(0)-b(1)-c(2)-d(3), all road type 1, with chosen popularities
TrajectoryGraph abcd_graph(const RoadNetwork &net, int s_ab, int s_bc, int s_cd) {
  std::vector<Trajectory> ts;
  std::int64_t id = 0;
  for (int i = 0; i < s_ab; ++i) ts.push_back(make_traj(net, id++, {0, 1}));
  for (int i = 0; i < s_bc; ++i) ts.push_back(make_traj(net, id++, {1, 2}));
  for (int i = 0; i < s_cd; ++i) ts.push_back(make_traj(net, id++, {2, 3}));
  return build_trajectory_graph(net, ts);
}

RoadNetwork chain_net() {
  return make_net(4, {
      {0, 1, 100, 50, RoadType::motorway},
      {1, 2, 100, 50, RoadType::motorway},
      {2, 3, 100, 50, RoadType::motorway},
  });
}

} // namespace

TEST_CASE("build_trajectory_graph counts traversals") {
  const RoadNetwork net = make_net(3, {
      {0, 1, 100, 50, RoadType::tertiary},
      {1, 2, 100, 50, RoadType::tertiary},
  });
  SUBCASE("one trajectory over a-b-c") {
    const TrajectoryGraph tg = build_trajectory_graph(net, {make_traj(net, 1, {0, 1, 2})});
    REQUIRE(tg.edges().size() == 2);
    for (const auto &e : tg.edges()) CHECK(e.count == 1);
    CHECK(tg.vertex_popularity(1) == 2); // S_b
    CHECK(tg.total_popularity() == 2);   // S
    CHECK(tg.vertices().size() == 3);
  }
  SUBCASE("two trajectories on the same edge") {
    const TrajectoryGraph tg =
        build_trajectory_graph(net, {make_traj(net, 1, {0, 1}), make_traj(net, 2, {0, 1})});
    REQUIRE(tg.edges().size() == 1);
    CHECK(tg.edges()[0].count == 2);
    CHECK(tg.total_popularity() == 2);
    CHECK(tg.vertices().size() == 2); // c never traversed
  }
  SUBCASE("opposite directions pool into one undirected edge") {
    const TrajectoryGraph tg =
        build_trajectory_graph(net, {make_traj(net, 1, {0, 1}), make_traj(net, 2, {1, 0})});
    REQUIRE(tg.edges().size() == 1);
    CHECK(tg.edges()[0].count == 2);
  }
  SUBCASE("empty trajectory set gives an empty graph") {
    const TrajectoryGraph tg = build_trajectory_graph(net, {});
    CHECK(tg.vertices().empty());
    CHECK(tg.edges().empty());
    CHECK(tg.total_popularity() == 0);
  }
}

TEST_CASE("modularity gain") {
  const RoadNetwork net = chain_net();
  SUBCASE("two vertices, one edge: gain is exactly zero") {
    const TrajectoryGraph tg = abcd_graph(net, 1, 0, 0);
    BottomUpClusterer c(tg);
    // 1/1 - (1*1)/1 = 0
    CHECK(c.modularity_gain(0, 1) == 0.0);
    CHECK_FALSE(c.check_qualification(0, 1));
  }
  SUBCASE("non-adjacent pair scores zero") {
    const TrajectoryGraph tg = abcd_graph(net, 10, 1, 10);
    BottomUpClusterer c(tg);
    CHECK(c.modularity_gain(0, 3) == 0.0);
  }
  SUBCASE("identical handles are an error") {
    const TrajectoryGraph tg = abcd_graph(net, 10, 1, 10);
    BottomUpClusterer c(tg);
    CHECK_THROWS_AS(c.modularity_gain(1, 1), Error);
  }
  SUBCASE("hand-computed gains on the 10-1-10 chain") {
    const TrajectoryGraph tg = abcd_graph(net, 10, 1, 10);
    BottomUpClusterer c(tg);
    // S = 21; S_a = 10, S_b = 11: dq_ab = 10/21 - 110/441
    const double expected_ab = 10.0 / 21.0 - 110.0 / 441.0;
    const double expected_bc = 1.0 / 21.0 - 121.0 / 441.0;
    CHECK(std::abs(c.modularity_gain(0, 1) - expected_ab) < 1e-12);
    CHECK(std::abs(c.modularity_gain(1, 2) - expected_bc) < 1e-12);
    CHECK(expected_ab == doctest::Approx(0.22676).epsilon(1e-4));
    CHECK(expected_bc == doctest::Approx(-0.22676).epsilon(1e-4));
  }
}

TEST_CASE("check_qualification merge conditions") {
  SUBCASE("simple-simple needs only positive gain") {
    const RoadNetwork net = make_net(4, {
        {0, 1, 100, 50, RoadType::motorway},
        {1, 2, 100, 50, RoadType::residential},
        {2, 3, 100, 50, RoadType::residential},
    });
    std::vector<Trajectory> ts;
    std::int64_t id = 0;
    for (int i = 0; i < 5; ++i) ts.push_back(make_traj(net, id++, {0, 1}));
    ts.push_back(make_traj(net, id++, {1, 2}));
    for (int i = 0; i < 5; ++i) ts.push_back(make_traj(net, id++, {2, 3}));
    const TrajectoryGraph tg = build_trajectory_graph(net, ts);
    BottomUpClusterer c(tg);
    CHECK(c.modularity_gain(0, 1) > 0);
    CHECK(c.check_qualification(0, 1)); // road types never block simple-simple
  }
  SUBCASE("gain below or at zero disqualifies") {
    const RoadNetwork net = chain_net();
    const TrajectoryGraph tg = abcd_graph(net, 10, 1, 10);
    BottomUpClusterer c(tg);
    CHECK_FALSE(c.check_qualification(1, 2)); // negative gain
    CHECK(c.check_qualification(0, 1));
  }
}

TEST_CASE("select_merge picks the largest road-type-uniform group") {
  // star: center 0 with leaves over types 1,1,2
  const RoadNetwork net = make_net(4, {
      {0, 1, 100, 50, RoadType::motorway},
      {0, 2, 100, 50, RoadType::motorway},
      {0, 3, 100, 50, RoadType::trunk},
  });
  std::vector<Trajectory> ts;
  std::int64_t id = 0;
  for (int i = 0; i < 4; ++i) ts.push_back(make_traj(net, id++, {1, 0}));
  for (int i = 0; i < 4; ++i) ts.push_back(make_traj(net, id++, {2, 0}));
  for (int i = 0; i < 4; ++i) ts.push_back(make_traj(net, id++, {0, 3}));
  const TrajectoryGraph tg = build_trajectory_graph(net, ts);
  BottomUpClusterer c(tg);
  // handles follow sorted vertex order: 0->0, 1->1, 2->2, 3->3
  SUBCASE("motorway pair beats the trunk singleton") {
    const auto out = c.select_merge(0, {1, 2, 3});
    CHECK(out == std::vector<std::uint32_t>{1, 2});
  }
  SUBCASE("size tie resolves toward the more major type") {
    const auto out = c.select_merge(0, {2, 3}); // motorway {2} vs trunk {3}
    CHECK(out == std::vector<std::uint32_t>{2});
  }
  SUBCASE("empty input stays empty") { CHECK(c.select_merge(0, {}).empty()); }
}

TEST_CASE("bottom_up_clustering") {
  SUBCASE("empty graph yields no regions") {
    const RoadNetwork net = chain_net();
    const TrajectoryGraph tg = build_trajectory_graph(net, {});
    CHECK(bottom_up_clustering(net, tg).empty());
  }
  SUBCASE("zero-gain pair stays two singletons") {
    const RoadNetwork net = chain_net();
    const TrajectoryGraph tg = abcd_graph(net, 1, 0, 0);
    const auto regions = bottom_up_clustering(net, tg);
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].members.size() == 1);
    CHECK(regions[1].members.size() == 1);
    CHECK_FALSE(regions[0].road_type.has_value());
  }
  SUBCASE("10-1-10 chain splits into the two popular pairs") {
    const RoadNetwork net = chain_net();
    const TrajectoryGraph tg = abcd_graph(net, 10, 1, 10);
    ClusterStats stats;
    const auto regions = bottom_up_clustering(net, tg, &stats);
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].members == std::vector<VertexId>{0, 1});
    CHECK(regions[1].members == std::vector<VertexId>{2, 3});
    CHECK(regions[0].road_type == RoadType::motorway);
    for (const auto &m : stats.merges) CHECK(m.gain > 0);
  }
  SUBCASE("aggregate refuses a positive-gain neighbor over an off-type edge") {
    // 0,1,2 merge into a motorway aggregate that inherits 2's trunk edge to 3;
    // that edge still has positive gain when the aggregate pops, so only the
    // road-type condition blocks the merge. 4-5 is a heavy far-away pair that
    // inflates S so the gain stays positive.
    const RoadNetwork net = make_net(6, {
        {0, 1, 100, 50, RoadType::motorway},
        {0, 2, 100, 50, RoadType::motorway},
        {2, 3, 100, 50, RoadType::trunk},
        {4, 5, 100, 50, RoadType::residential},
    });
    std::vector<Trajectory> ts;
    std::int64_t id = 0;
    for (int i = 0; i < 14; ++i) ts.push_back(make_traj(net, id++, {0, 1}));
    for (int i = 0; i < 10; ++i) ts.push_back(make_traj(net, id++, {0, 2}));
    for (int i = 0; i < 6; ++i) ts.push_back(make_traj(net, id++, {2, 3}));
    for (int i = 0; i < 80; ++i) ts.push_back(make_traj(net, id++, {4, 5}));
    const TrajectoryGraph tg = build_trajectory_graph(net, ts);
    ClusterStats stats;
    const auto regions = bottom_up_clustering(net, tg, &stats);
    REQUIRE(regions.size() == 3);
    CHECK(regions[0].members == std::vector<VertexId>{0, 1, 2});
    CHECK(regions[0].road_type == RoadType::motorway);
    CHECK(regions[1].members == std::vector<VertexId>{3});
    CHECK(regions[2].members == std::vector<VertexId>{4, 5});
    // the refused edge really did carry positive gain: probe the same state
    BottomUpClusterer probe(tg);
    probe.force_merge_for_test(0, 1);
    probe.force_merge_for_test(0, 2);
    CHECK(probe.modularity_gain(0, 3) > 0);
    CHECK_FALSE(probe.check_qualification(0, 3)); // aggregate k: k.RT != edge type
    CHECK_FALSE(probe.check_qualification(3, 0)); // simple k, aggregate j: j.RT != edge type
  }
  SUBCASE("aggregate-aggregate merges compare region types, not the edge type") {
    // two aggregates linked by a trunk bridge; gain is positive thanks to the
    // heavy far pair 4-5
    auto build = [](RoadType b_side) {
      return make_net(6, {
          {0, 1, 100, 50, RoadType::motorway},
          {2, 3, 100, 50, b_side},
          {1, 2, 100, 50, RoadType::trunk}, // bridge
          {4, 5, 100, 50, RoadType::residential},
      });
    };
    auto graph_for = [](const RoadNetwork &net) {
      std::vector<Trajectory> ts;
      std::int64_t id = 0;
      for (int i = 0; i < 12; ++i) ts.push_back(make_traj(net, id++, {0, 1}));
      for (int i = 0; i < 12; ++i) ts.push_back(make_traj(net, id++, {2, 3}));
      for (int i = 0; i < 8; ++i) ts.push_back(make_traj(net, id++, {1, 2}));
      for (int i = 0; i < 300; ++i) ts.push_back(make_traj(net, id++, {4, 5}));
      return build_trajectory_graph(net, ts);
    };
    {
      const RoadNetwork net = build(RoadType::trunk);
      BottomUpClusterer c(graph_for(net));
      c.force_merge_for_test(0, 1); // motorway aggregate
      c.force_merge_for_test(2, 3); // trunk aggregate
      CHECK(c.modularity_gain(0, 2) > 0);
      CHECK_FALSE(c.check_qualification(0, 2)); // types differ
    }
    {
      const RoadNetwork net = build(RoadType::motorway);
      BottomUpClusterer c(graph_for(net));
      c.force_merge_for_test(0, 1);
      c.force_merge_for_test(2, 3);
      CHECK(c.modularity_gain(0, 2) > 0);
      CHECK(c.check_qualification(0, 2)); // equal types qualify over a trunk bridge
    }
  }
  SUBCASE("deterministic across reruns") {
    const SyntheticWorld world = generate_synthetic(testing::mixed_world(14, 14, 120, 23, 0.1));
    const TrajectoryGraph tg = build_trajectory_graph(world.net, world.trajectories);
    const auto a = bottom_up_clustering(world.net, tg);
    const auto b = bottom_up_clustering(world.net, tg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].members == b[i].members);
      CHECK(a[i].road_type == b[i].road_type);
    }
  }
}

namespace {

// audits a finished run: gains, table conditions, homogeneity, partition
void audit_clustering(const TrajectoryGraph &tg, const std::vector<Region> &regions,
                      const ClusterStats &stats) {
  // every merge had positive gain and satisfied the road-type conditions
  for (const MergeLogEntry &m : stats.merges) {
    CHECK(m.gain > 0);
    if (m.k_aggregate && !m.j_aggregate) CHECK(m.k_rt == m.edge_type);
    if (!m.k_aggregate && m.j_aggregate) CHECK(m.j_rt == m.edge_type);
    if (m.k_aggregate && m.j_aggregate) CHECK(m.k_rt == m.j_rt);
  }

  // attribute merges to final regions through the handle absorption chain
  std::map<std::uint32_t, std::uint32_t> parent;
  auto find = [&](std::uint32_t x) {
    while (parent.count(x) && parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const MergeLogEntry &m : stats.merges) parent[find(m.merged_handle)] = find(m.root_handle);
  std::map<std::uint32_t, RegionId> region_of_handle;
  for (std::size_t i = 0; i < regions.size(); ++i)
    region_of_handle[stats.region_handles[i]] = regions[i].id;
  for (const MergeLogEntry &m : stats.merges) {
    const auto it = region_of_handle.find(find(m.root_handle));
    REQUIRE(it != region_of_handle.end());
    const Region &r = regions[it->second];
    REQUIRE(r.road_type.has_value());
    // all internal merge evidence agrees with the region's type
    if (!m.k_aggregate && !m.j_aggregate) CHECK(m.edge_type == *r.road_type);
    if (m.k_aggregate) CHECK(m.k_rt == *r.road_type);
    if (m.j_aggregate) CHECK(m.j_rt == *r.road_type);
  }

  // regions partition the trajectory-graph vertex set
  std::set<VertexId> seen;
  std::size_t total = 0;
  for (const Region &r : regions) {
    CHECK((r.members.size() == 1 ? !r.road_type.has_value() : r.road_type.has_value()));
    for (VertexId v : r.members) seen.insert(v);
    total += r.members.size();
  }
  CHECK(total == tg.vertices().size());
  CHECK(seen.size() == tg.vertices().size());
  for (VertexId v : tg.vertices()) CHECK(seen.count(v) == 1);

  // termination bound on live extractions
  CHECK(stats.extractions <= tg.vertices().size() + tg.edges().size());
}

} // namespace

TEST_CASE("clustering invariants hold on randomized worlds") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const SyntheticWorld world =
        generate_synthetic(testing::mixed_world(12, 12, 80, seed, 0.2));
    const TrajectoryGraph tg = build_trajectory_graph(world.net, world.trajectories);
    ClusterStats stats;
    const auto regions = bottom_up_clustering(world.net, tg, &stats);
    audit_clustering(tg, regions, stats);
  }
}
