#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "l2r/model_io.hpp"
#include "l2r/pipeline.hpp"
#include "test_worlds.hpp"

using namespace l2r;
namespace fs = std::filesystem;

TEST_CASE("model file round-trip preserves the full structure") {
  const SyntheticWorld world = generate_synthetic(testing::mixed_world(12, 12, 220, 13, 0.05));
  ModelFile mf;
  mf.net = world.net;
  mf.model = build_region_model(world.net, world.trajectories);
  PipelineParams params;
  learn_transfer_populate(world.net, mf.model, params);
  for (const Trajectory &t : world.trajectories) mf.train_traj_ids.push_back(t.traj_id);
  std::sort(mf.train_traj_ids.begin(), mf.train_traj_ids.end());
  mf.fingerprint = compute_fingerprint(mf.net, mf.train_traj_ids);

  const fs::path path = fs::temp_directory_path() /
                        ("l2r_model_io_" + std::to_string(::getpid()) + ".json");
  save_model(mf, path.string());
  const ModelFile again = load_model(path.string());

  CHECK(again.fingerprint == mf.fingerprint);
  CHECK(again.train_traj_ids == mf.train_traj_ids);
  REQUIRE(again.net.vertex_count() == mf.net.vertex_count());
  REQUIRE(again.net.edge_count() == mf.net.edge_count());
  CHECK(again.net.fuel_model().b == mf.net.fuel_model().b);
  REQUIRE(again.model.nodes.size() == mf.model.nodes.size());
  REQUIRE(again.model.edges.size() == mf.model.edges.size());
  CHECK(again.model.region_of == mf.model.region_of);
  for (std::size_t i = 0; i < mf.model.nodes.size(); ++i) {
    const RegionNode &a = mf.model.nodes[i];
    const RegionNode &b = again.model.nodes[i];
    CHECK(a.region.members == b.region.members);
    CHECK(a.region.road_type == b.region.road_type);
    REQUIRE(a.centers.size() == b.centers.size());
    REQUIRE(a.inner_paths.size() == b.inner_paths.size());
    for (std::size_t j = 0; j < a.inner_paths.size(); ++j) {
      CHECK(a.inner_paths[j].path == b.inner_paths[j].path);
      CHECK(a.inner_paths[j].count == b.inner_paths[j].count);
    }
  }
  for (std::size_t i = 0; i < mf.model.edges.size(); ++i) {
    const RegionEdge &a = mf.model.edges[i];
    const RegionEdge &b = again.model.edges[i];
    CHECK(a.from == b.from);
    CHECK(a.to == b.to);
    CHECK(a.kind == b.kind);
    CHECK(a.dead == b.dead);
    CHECK(a.preference == b.preference);
    CHECK(a.pref_source == b.pref_source);
    REQUIRE(a.paths.size() == b.paths.size());
    for (std::size_t j = 0; j < a.paths.size(); ++j) {
      CHECK(a.paths[j].path == b.paths[j].path);
      CHECK(a.paths[j].count == b.paths[j].count);
      CHECK(a.paths[j].synthetic == b.paths[j].synthetic);
    }
  }

  // saving the reloaded model again is byte-identical
  const fs::path path2 = fs::temp_directory_path() /
                         ("l2r_model_io2_" + std::to_string(::getpid()) + ".json");
  save_model(again, path2.string());
  std::ifstream f1(path), f2(path2);
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
  fs::remove(path);
  fs::remove(path2);
}

TEST_CASE("model loading rejects foreign or broken files") {
  const fs::path path = fs::temp_directory_path() /
                        ("l2r_model_bad_" + std::to_string(::getpid()) + ".json");
  {
    std::ofstream out(path);
    out << "{\"format\": \"something-else/9\"}";
  }
  CHECK_THROWS_AS(load_model(path.string()), Error);
  {
    std::ofstream out(path);
    out << "not json at all";
  }
  CHECK_THROWS_AS(load_model(path.string()), Error);
  fs::remove(path);
  CHECK_THROWS_AS(load_model(path.string()), Error); // missing file
}

TEST_CASE("dump formats") {
  const SyntheticWorld world = generate_synthetic(testing::plain_world(6, 6, 30, 3));
  RegionGraphModel model = build_region_model(world.net, world.trajectories);
  std::vector<Region> regions;
  for (const auto &node : model.nodes) regions.push_back(node.region);
  const std::string rj = regions_to_json(world.net, regions);
  CHECK(rj.find("\"region_id\"") != std::string::npos);
  CHECK(rj.find("\"centroid\"") != std::string::npos);
  const std::string pj = preferences_to_json(model);
  CHECK(pj.find("\"source\"") != std::string::npos);
}
