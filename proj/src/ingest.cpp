#include "l2r/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "l2r/apply_pref.hpp"
#include "l2r/geo.hpp"

namespace l2r {

namespace {

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::int64_t parse_int(const std::string &s, const std::string &what, std::size_t line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("bad " + what + " '" + s + "' at line " + std::to_string(line));
  return v;
}

double parse_double(const std::string &s, const std::string &what, std::size_t line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw Error("bad " + what + " '" + s + "' at line " + std::to_string(line));
  }
}

std::ifstream open_or_throw(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  return in;
}

} // namespace

TimeWindow parse_time_window(const std::string &spec) {
  const auto dash = spec.find('-');
  auto parse_hm = [&](const std::string &part) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw Error("bad time window '" + spec + "'");
    const int h = static_cast<int>(parse_int(part.substr(0, colon), "hour", 0));
    const int m = static_cast<int>(parse_int(part.substr(colon + 1), "minute", 0));
    if (h < 0 || h > 24 || m < 0 || m > 59) throw Error("bad time window '" + spec + "'");
    return h * 3600 + m * 60;
  };
  if (dash == std::string::npos) throw Error("bad time window '" + spec + "' (want HH:MM-HH:MM)");
  return {parse_hm(spec.substr(0, dash)), parse_hm(spec.substr(dash + 1))};
}

RoadNetwork load_road_network(const std::string &nodes_file, const std::string &edges_file,
                              FuelModel fuel) {
  std::vector<Vertex> vertices;
  std::unordered_map<std::int64_t, VertexId> by_original;
  {
    std::ifstream in = open_or_throw(nodes_file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      line = trim(line);
      if (line.empty()) continue;
      if (lineno == 1 && line.rfind("node_id", 0) == 0) continue;
      const auto f = split_csv(line);
      if (f.size() != 3)
        throw Error("malformed node row at line " + std::to_string(lineno) + " in " + nodes_file);
      Vertex v;
      v.original_id = parse_int(f[0], "node_id", lineno);
      v.lon = parse_double(f[1], "lon", lineno);
      v.lat = parse_double(f[2], "lat", lineno);
      if (by_original.count(v.original_id))
        throw Error("duplicate node id " + std::to_string(v.original_id) + " at line " +
                    std::to_string(lineno));
      by_original.emplace(v.original_id, static_cast<VertexId>(vertices.size()));
      vertices.push_back(v);
    }
  }

  std::vector<Edge> edges;
  {
    std::ifstream in = open_or_throw(edges_file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      line = trim(line);
      if (line.empty()) continue;
      if (lineno == 1 && line.rfind("edge_id", 0) == 0) continue;
      const auto f = split_csv(line);
      if (f.size() != 7)
        throw Error("malformed edge row at line " + std::to_string(lineno) + " in " + edges_file);
      Edge e;
      e.original_id = parse_int(f[0], "edge_id", lineno);
      const std::int64_t from = parse_int(f[1], "from", lineno);
      const std::int64_t to = parse_int(f[2], "to", lineno);
      auto fit = by_original.find(from);
      if (fit == by_original.end())
        throw Error("unknown vertex " + std::to_string(from) + " at line " +
                    std::to_string(lineno));
      auto tit = by_original.find(to);
      if (tit == by_original.end())
        throw Error("unknown vertex " + std::to_string(to) + " at line " +
                    std::to_string(lineno));
      e.from = fit->second;
      e.to = tit->second;
      e.length_m = parse_double(f[3], "length_m", lineno);
      e.speed_kmh = parse_double(f[4], "speed_kmh", lineno);
      if (e.length_m <= 0)
        throw Error("nonpositive length at line " + std::to_string(lineno));
      if (e.speed_kmh <= 0)
        throw Error("nonpositive speed at line " + std::to_string(lineno));
      e.type = road_type_from_name(f[5]);
      const std::string &oneway = f[6];
      if (oneway != "true" && oneway != "false")
        throw Error("bad oneway flag '" + oneway + "' at line " + std::to_string(lineno));
      edges.push_back(e);
      if (oneway == "false") {
        Edge rev = e;
        std::swap(rev.from, rev.to);
        edges.push_back(rev);
      }
    }
  }
  return RoadNetwork(std::move(vertices), std::move(edges), fuel);
}

void save_road_network(const RoadNetwork &net, const std::string &nodes_file,
                       const std::string &edges_file) {
  std::ofstream nodes(nodes_file);
  if (!nodes) throw Error("cannot write " + nodes_file);
  nodes << "node_id,lon,lat\n";
  nodes.precision(12);
  for (const Vertex &v : net.vertices())
    nodes << v.original_id << "," << v.lon << "," << v.lat << "\n";

  std::ofstream edges(edges_file);
  if (!edges) throw Error("cannot write " + edges_file);
  edges << "edge_id,from,to,length_m,speed_kmh,road_type,oneway\n";
  edges.precision(12);
  for (const Edge &e : net.edges()) {
    edges << e.original_id << "," << net.vertex(e.from).original_id << ","
          << net.vertex(e.to).original_id << "," << e.length_m << "," << e.speed_kmh << ","
          << road_type_name(e.type) << ",true\n";
  }
}

std::vector<Trajectory> load_trajectories(const std::string &traj_file, const RoadNetwork &net,
                                          std::optional<TimeWindow> window,
                                          LoadReport *report) {
  std::ifstream in = open_or_throw(traj_file);
  std::vector<Trajectory> out;
  LoadReport local;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    local.records += 1;
    std::int64_t traj_id = 0;
    try {
      const auto j = nlohmann::json::parse(line);
      traj_id = j.at("traj_id").get<std::int64_t>();
      Trajectory t;
      t.traj_id = traj_id;
      t.driver_id = j.at("driver_id").get<std::int64_t>();
      t.departure = j.at("departure").get<std::int64_t>();
      std::vector<VertexId> ids;
      for (const auto &node : j.at("path")) {
        const auto v = net.vertex_by_original(node.get<std::int64_t>());
        if (!v) throw Error("unknown node " + node.dump());
        ids.push_back(*v);
      }
      t.path = validate_path(net, ids);
      if (window && !window->contains(t.departure)) {
        local.rejects.push_back({lineno, traj_id, "outside time window"});
        continue;
      }
      local.accepted += 1;
      out.push_back(std::move(t));
    } catch (const std::exception &e) {
      local.rejects.push_back({lineno, traj_id, e.what()});
    }
  }
  if (report) *report = std::move(local);
  return out;
}

void save_trajectories(const RoadNetwork &net, const std::vector<Trajectory> &trajectories,
                       const std::string &traj_file) {
  std::ofstream out(traj_file);
  if (!out) throw Error("cannot write " + traj_file);
  for (const Trajectory &t : trajectories) {
    nlohmann::json j;
    j["traj_id"] = t.traj_id;
    j["driver_id"] = t.driver_id;
    j["departure"] = t.departure;
    auto &path = j["path"] = nlohmann::json::array();
    for (VertexId v : t.path.vertices) path.push_back(net.vertex(v).original_id);
    out << j.dump() << "\n";
  }
}

double default_speed_kmh(RoadType t) {
  switch (t) {
  case RoadType::motorway: return 110;
  case RoadType::trunk: return 90;
  case RoadType::primary: return 70;
  case RoadType::secondary: return 60;
  case RoadType::tertiary: return 50;
  case RoadType::residential: return 30;
  }
  return 50;
}

int SyntheticConfig::block_of(int row, int col) const {
  const int br = std::min(block_rows - 1, row * block_rows / grid_rows);
  const int bc = std::min(block_cols - 1, col * block_cols / grid_cols);
  return br * block_cols + bc;
}

void SyntheticConfig::validate() const {
  if (grid_rows < 2 || grid_cols < 2) throw Error("grid must be at least 2x2");
  if (block_rows < 1 || block_cols < 1 || block_rows > grid_rows || block_cols > grid_cols)
    throw Error("block grid must fit inside the vertex grid");
  if (trajectory_count < 0) throw Error("trajectory_count must be nonnegative");
  if (detour_noise < 0 || detour_noise > 1) throw Error("detour_noise must be in [0,1]");
  if (cell_m <= 0) throw Error("cell_m must be positive");
  if (cell_y_m < 0) throw Error("cell_y_m must be nonnegative");
  if (length_jitter < 0 || length_jitter >= 1) throw Error("length_jitter must be in [0,1)");
  if (departure_span_s <= 0) throw Error("departure_span_s must be positive");
  if (row_types.empty() || col_types.empty()) throw Error("road type plan must be non-empty");
  for (const auto &[t, v] : speeds_kmh)
    if (v <= 0) throw Error("speed for " + road_type_name(t) + " must be positive");
  for (const auto &[t, v] : length_factors)
    if (v <= 0) throw Error("length factor for " + road_type_name(t) + " must be positive");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// deterministic per-edge length factor in [1-j, 1+j]
double jitter_factor(std::uint64_t seed, std::uint64_t tag, int r, int c, double j) {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(tag ^ splitmix64(
                                       (static_cast<std::uint64_t>(r) << 32) | static_cast<std::uint32_t>(c))));
  const double u = static_cast<double>(h >> 11) / static_cast<double>(1ULL << 53);
  return 1.0 - j + 2.0 * j * u;
}

} // namespace

SyntheticWorld generate_synthetic(const SyntheticConfig &cfg) {
  cfg.validate();
  auto speed_of = [&](RoadType t) {
    auto it = cfg.speeds_kmh.find(t);
    return it != cfg.speeds_kmh.end() ? it->second : default_speed_kmh(t);
  };
  auto length_factor_of = [&](RoadType t) {
    auto it = cfg.length_factors.find(t);
    return it != cfg.length_factors.end() ? it->second : 1.0;
  };

  const int rows = cfg.grid_rows, cols = cfg.grid_cols;
  const double cell_y = cfg.cell_y_m > 0 ? cfg.cell_y_m : cfg.cell_m;
  const double dlat = cell_y / (kEarthRadiusM * kDegToRad);
  const double dlon = cfg.cell_m / (kEarthRadiusM * kDegToRad * std::cos(cfg.base_lat * kDegToRad));

  std::vector<Vertex> vertices;
  vertices.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Vertex v;
      v.original_id = static_cast<std::int64_t>(r) * cols + c;
      v.lon = cfg.base_lon + c * dlon;
      v.lat = cfg.base_lat - r * dlat;
      vertices.push_back(v);
    }
  }

  std::vector<Edge> edges;
  std::int64_t next_edge_id = 0;
  auto add_bidirectional = [&](VertexId a, VertexId b, double length, RoadType type) {
    Edge e;
    e.from = a;
    e.to = b;
    e.length_m = length;
    e.speed_kmh = speed_of(type);
    e.type = type;
    e.original_id = next_edge_id++;
    edges.push_back(e);
    std::swap(e.from, e.to);
    e.original_id = next_edge_id++;
    edges.push_back(e);
  };
  auto vid = [&](int r, int c) { return static_cast<VertexId>(r * cols + c); };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      if (cfg.horizontal_gaps.count({r, c})) continue;
      RoadType t = cfg.row_types[r % cfg.row_types.size()];
      if (auto it = cfg.horizontal_overrides.find({r, c}); it != cfg.horizontal_overrides.end())
        t = it->second;
      add_bidirectional(vid(r, c), vid(r, c + 1),
                        cfg.cell_m * length_factor_of(t) *
                            jitter_factor(cfg.rng_seed, 1, r, c, cfg.length_jitter),
                        t);
    }
  }
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (cfg.vertical_gaps.count({r, c})) continue;
      RoadType t = cfg.col_types[c % cfg.col_types.size()];
      if (auto it = cfg.vertical_overrides.find({r, c}); it != cfg.vertical_overrides.end())
        t = it->second;
      add_bidirectional(vid(r, c), vid(r + 1, c),
                        cell_y * length_factor_of(t) *
                            jitter_factor(cfg.rng_seed, 2, r, c, cfg.length_jitter),
                        t);
    }
  }

  SyntheticWorld world;
  world.net = RoadNetwork(std::move(vertices), std::move(edges), cfg.fuel);

  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_int_distribution<int> any_vertex(0, rows * cols - 1);
  std::uniform_int_distribution<std::int64_t> depart(0, cfg.departure_span_s - 1);
  std::uniform_int_distribution<std::int64_t> driver(0, 96);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::pair<int, int>> planted_keys; // repeated by sampling weight
  for (const auto &[key, _] : cfg.planted_preferences) {
    int weight = 1;
    if (auto it = cfg.planted_weights.find(key); it != cfg.planted_weights.end())
      weight = std::max(1, it->second);
    for (int w = 0; w < weight; ++w) planted_keys.push_back(key);
  }
  std::vector<std::vector<VertexId>> block_members(
      static_cast<std::size_t>(cfg.block_rows) * cfg.block_cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) block_members[cfg.block_of(r, c)].push_back(vid(r, c));

  for (int i = 0; i < cfg.trajectory_count; ++i) {
    bool made = false;
    for (int attempt = 0; attempt < 200 && !made; ++attempt) {
      VertexId s, d;
      if (cfg.only_planted_pairs && !planted_keys.empty()) {
        const auto &key = planted_keys[static_cast<std::size_t>(
            std::uniform_int_distribution<int>(0, static_cast<int>(planted_keys.size()) - 1)(rng))];
        const auto &src_block = block_members[key.first];
        const auto &dst_block = block_members[key.second];
        if (src_block.empty() || dst_block.empty()) throw Error("empty block in planted pair");
        s = src_block[std::uniform_int_distribution<std::size_t>(0, src_block.size() - 1)(rng)];
        d = dst_block[std::uniform_int_distribution<std::size_t>(0, dst_block.size() - 1)(rng)];
      } else {
        s = static_cast<VertexId>(any_vertex(rng));
        d = static_cast<VertexId>(any_vertex(rng));
      }
      if (s == d) continue;
      const int bs = cfg.block_of(static_cast<int>(s) / cols, static_cast<int>(s) % cols);
      const int bd = cfg.block_of(static_cast<int>(d) / cols, static_cast<int>(d) % cols);
      PreferenceVector pref = cfg.default_preference;
      if (auto it = cfg.planted_preferences.find({bs, bd}); it != cfg.planted_preferences.end())
        pref = it->second;
      Path path;
      try {
        path = preference_dijkstra(world.net, pref, s, d);
      } catch (const NoPathError &) {
        continue;
      }
      bool detoured = false;
      if (cfg.detour_noise > 0 && unit(rng) < cfg.detour_noise) {
        for (int wtry = 0; wtry < 8; ++wtry) {
          const VertexId w = static_cast<VertexId>(any_vertex(rng));
          if (w == s || w == d) continue;
          try {
            Path p1 = preference_dijkstra(world.net, pref, s, w);
            Path p2 = preference_dijkstra(world.net, pref, w, d);
            p1.vertices.insert(p1.vertices.end(), p2.vertices.begin() + 1, p2.vertices.end());
            p1.edges.insert(p1.edges.end(), p2.edges.begin(), p2.edges.end());
            path = std::move(p1);
            detoured = true;
            break;
          } catch (const NoPathError &) {
          }
        }
      }
      Trajectory t;
      t.traj_id = i;
      t.driver_id = driver(rng);
      t.departure = depart(rng);
      t.path = std::move(path);
      world.trajectories.push_back(std::move(t));
      world.planted.push_back(pref);
      world.block_pairs.emplace_back(bs, bd);
      world.detoured.push_back(detoured);
      made = true;
    }
    if (!made)
      throw Error("could not sample a reachable source/destination pair after bounded retries");
  }
  return world;
}

} // namespace l2r
