#include "l2r/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "l2r/preference.hpp"

namespace l2r {

namespace {

using nlohmann::json;

json path_to_json(const Path &p) {
  json out = json::array();
  for (VertexId v : p.vertices) out.push_back(v);
  return out;
}

Path path_from_json(const RoadNetwork &net, const json &j) {
  std::vector<VertexId> ids;
  for (const auto &v : j) ids.push_back(v.get<VertexId>());
  return validate_path(net, ids);
}

json weighted_paths_to_json(const std::vector<WeightedPath> &paths) {
  json out = json::array();
  for (const WeightedPath &wp : paths) {
    json jp;
    jp["v"] = path_to_json(wp.path);
    jp["count"] = wp.count;
    if (wp.synthetic) jp["synthetic"] = true;
    out.push_back(jp);
  }
  return out;
}

std::vector<WeightedPath> weighted_paths_from_json(const RoadNetwork &net, const json &j) {
  std::vector<WeightedPath> out;
  for (const auto &jp : j) {
    WeightedPath wp;
    wp.path = path_from_json(net, jp.at("v"));
    wp.count = jp.at("count").get<std::uint32_t>();
    wp.synthetic = jp.value("synthetic", false);
    out.push_back(std::move(wp));
  }
  return out;
}

json preference_to_json(const PreferenceVector &v) {
  json j;
  j["master"] = cost_kind_name(v.master);
  json slave = json::array();
  for (RoadType t : v.slave.types()) slave.push_back(road_type_name(t));
  j["slave"] = slave;
  return j;
}

PreferenceVector preference_from_json(const json &j) {
  PreferenceVector v;
  v.master = cost_kind_from_name(j.at("master").get<std::string>());
  for (const auto &t : j.at("slave")) {
    const RoadType rt = road_type_from_name(t.get<std::string>());
    v.slave.mask |= SlaveSet::of(rt).mask;
  }
  return v;
}

const char *source_name(PreferenceSource s) {
  switch (s) {
  case PreferenceSource::None: return "none";
  case PreferenceSource::Learned: return "learned";
  case PreferenceSource::Transferred: return "transferred";
  case PreferenceSource::NullFallback: return "null-fallback";
  }
  return "none";
}

PreferenceSource source_from_name(const std::string &s) {
  if (s == "learned") return PreferenceSource::Learned;
  if (s == "transferred") return PreferenceSource::Transferred;
  if (s == "null-fallback") return PreferenceSource::NullFallback;
  return PreferenceSource::None;
}

} // namespace

std::string compute_fingerprint(const RoadNetwork &net,
                                const std::vector<std::int64_t> &train_traj_ids) {
  // FNV-1a over the structural facts that define the trained model input
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (i * 8)) & 0xFF;
      h *= 1099511628211ULL;
    }
  };
  mix(net.vertex_count());
  mix(net.edge_count());
  for (const Edge &e : net.edges()) {
    mix(e.from);
    mix(e.to);
    mix(static_cast<std::uint64_t>(e.length_m * 1000));
  }
  for (std::int64_t id : train_traj_ids) mix(static_cast<std::uint64_t>(id));
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void save_model(const ModelFile &mf, const std::string &path) {
  json j;
  j["format"] = kModelFormatTag;
  j["fingerprint"] = mf.fingerprint;
  j["train_traj_ids"] = mf.train_traj_ids;

  json &fuel = j["fuel"];
  fuel["a"] = mf.net.fuel_model().a;
  fuel["b"] = mf.net.fuel_model().b;
  fuel["c"] = mf.net.fuel_model().c;

  json &nodes = j["network"]["nodes"] = json::array();
  for (const Vertex &v : mf.net.vertices())
    nodes.push_back({v.original_id, v.lon, v.lat});
  json &edges = j["network"]["edges"] = json::array();
  for (const Edge &e : mf.net.edges())
    edges.push_back({e.original_id, e.from, e.to, e.length_m, e.speed_kmh,
                     road_type_name(e.type)});

  json &regions = j["regions"] = json::array();
  for (const RegionNode &node : mf.model.nodes) {
    json jr;
    jr["region_id"] = node.region.id;
    jr["member_ids"] = node.region.members;
    if (node.region.road_type) jr["road_type"] = road_type_name(*node.region.road_type);
    jr["centroid"] = {node.region.centroid_lon, node.region.centroid_lat};
    json centers = json::array();
    for (const TransferCenter &c : node.centers) centers.push_back({c.vertex, c.traj_count});
    jr["transfer_centers"] = centers;
    jr["inner_paths"] = weighted_paths_to_json(node.inner_paths);
    regions.push_back(jr);
  }

  json &redges = j["region_edges"] = json::array();
  for (const RegionEdge &e : mf.model.edges) {
    json je;
    je["id"] = e.id;
    je["from"] = e.from;
    je["to"] = e.to;
    je["kind"] = e.kind == RegionEdgeKind::T ? "T" : "B";
    je["paths"] = weighted_paths_to_json(e.paths);
    if (e.preference) je["preference"] = preference_to_json(*e.preference);
    je["pref_source"] = source_name(e.pref_source);
    if (e.dead) je["dead"] = true;
    redges.push_back(je);
  }

  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path);
  out << j.dump();
  out << "\n";
}

ModelFile load_model(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception &e) {
    throw Error("model file " + path + " is not valid JSON: " + e.what());
  }
  if (j.value("format", "") != kModelFormatTag)
    throw Error("model file " + path + " has unsupported format tag '" +
                j.value("format", "") + "'");

  ModelFile mf;
  FuelModel fuel;
  fuel.a = j.at("fuel").at("a").get<double>();
  fuel.b = j.at("fuel").at("b").get<double>();
  fuel.c = j.at("fuel").at("c").get<double>();

  std::vector<Vertex> vertices;
  for (const auto &jn : j.at("network").at("nodes")) {
    Vertex v;
    v.original_id = jn.at(0).get<std::int64_t>();
    v.lon = jn.at(1).get<double>();
    v.lat = jn.at(2).get<double>();
    vertices.push_back(v);
  }
  std::vector<Edge> edges;
  for (const auto &je : j.at("network").at("edges")) {
    Edge e;
    e.original_id = je.at(0).get<std::int64_t>();
    e.from = je.at(1).get<VertexId>();
    e.to = je.at(2).get<VertexId>();
    e.length_m = je.at(3).get<double>();
    e.speed_kmh = je.at(4).get<double>();
    e.type = road_type_from_name(je.at(5).get<std::string>());
    edges.push_back(e);
  }
  mf.net = RoadNetwork(std::move(vertices), std::move(edges), fuel);

  mf.model.region_of.assign(mf.net.vertex_count(), kNoRegion);
  for (const auto &jr : j.at("regions")) {
    RegionNode node;
    node.region.id = jr.at("region_id").get<RegionId>();
    node.region.members = jr.at("member_ids").get<std::vector<VertexId>>();
    if (jr.contains("road_type"))
      node.region.road_type = road_type_from_name(jr.at("road_type").get<std::string>());
    node.region.centroid_lon = jr.at("centroid").at(0).get<double>();
    node.region.centroid_lat = jr.at("centroid").at(1).get<double>();
    for (const auto &jc : jr.at("transfer_centers"))
      node.centers.push_back({jc.at(0).get<VertexId>(), jc.at(1).get<std::uint32_t>()});
    node.inner_paths = weighted_paths_from_json(mf.net, jr.at("inner_paths"));
    for (VertexId v : node.region.members) mf.model.region_of[v] = node.region.id;
    mf.model.nodes.push_back(std::move(node));
  }
  for (const auto &je : j.at("region_edges")) {
    RegionEdge e;
    e.id = je.at("id").get<std::uint32_t>();
    e.from = je.at("from").get<RegionId>();
    e.to = je.at("to").get<RegionId>();
    e.kind = je.at("kind").get<std::string>() == "T" ? RegionEdgeKind::T : RegionEdgeKind::B;
    e.paths = weighted_paths_from_json(mf.net, je.at("paths"));
    if (je.contains("preference")) e.preference = preference_from_json(je.at("preference"));
    e.pref_source = source_from_name(je.value("pref_source", "none"));
    e.dead = je.value("dead", false);
    mf.model.edges.push_back(std::move(e));
  }
  mf.model.rebuild_indexes();
  mf.train_traj_ids = j.at("train_traj_ids").get<std::vector<std::int64_t>>();
  mf.fingerprint = j.value("fingerprint", "");
  return mf;
}

std::string regions_to_json(const RoadNetwork &net, const std::vector<Region> &regions) {
  (void)net;
  json out = json::array();
  for (const Region &r : regions) {
    json jr;
    jr["region_id"] = r.id;
    jr["road_type"] = r.road_type ? json(road_type_name(*r.road_type)) : json();
    jr["member_ids"] = r.members;
    jr["centroid"] = {r.centroid_lon, r.centroid_lat};
    out.push_back(jr);
  }
  return out.dump(2);
}

std::string preferences_to_json(const RegionGraphModel &model) {
  json out = json::array();
  for (const RegionEdge &e : model.edges) {
    json je;
    je["edge_id"] = e.id;
    je["from"] = e.from;
    je["to"] = e.to;
    je["kind"] = e.kind == RegionEdgeKind::T ? "T" : "B";
    if (e.preference) {
      je["master"] = cost_kind_name(e.preference->master);
      je["slave"] = e.preference->slave.name();
    } else {
      je["master"] = nullptr;
      je["slave"] = nullptr;
    }
    je["source"] = source_name(e.pref_source);
    out.push_back(je);
  }
  return out.dump(2);
}

} // namespace l2r
