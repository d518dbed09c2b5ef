#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "l2r/eval.hpp"
#include "l2r/ingest.hpp"
#include "l2r/model_io.hpp"
#include "l2r/pipeline.hpp"
#include "l2r/router.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

l2r::SlaveSet parse_slave(const std::string &s) {
  if (s == "none" || s.empty()) return l2r::SlaveSet::none();
  l2r::SlaveSet out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t plus = s.find('+', pos);
    const std::string part = s.substr(pos, plus == std::string::npos ? plus : plus - pos);
    out.mask |= l2r::SlaveSet::of(l2r::road_type_from_name(part)).mask;
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  return out;
}

l2r::PreferenceVector parse_pref(const std::string &master, const std::string &slave) {
  return {l2r::cost_kind_from_name(master), parse_slave(slave)};
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

l2r::SyntheticConfig parse_synth_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw l2r::Error("cannot open config file: " + path);
  l2r::SyntheticConfig cfg;
  cfg.row_types.clear();
  cfg.col_types.clear();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw l2r::Error("bad config line " + std::to_string(lineno) + ": '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    auto types_of = [](const std::string &v) {
      std::vector<l2r::RoadType> out;
      for (const std::string &part : split(v, ','))
        out.push_back(l2r::road_type_from_name(part));
      return out;
    };
    try {
      if (key == "rows") cfg.grid_rows = std::stoi(value);
      else if (key == "cols") cfg.grid_cols = std::stoi(value);
      else if (key == "row_types") cfg.row_types = types_of(value);
      else if (key == "col_types") cfg.col_types = types_of(value);
      else if (key == "h_override" || key == "v_override") {
        const auto f = split(value, ',');
        if (f.size() != 3) throw l2r::Error("want r,c,type");
        const auto rc = std::make_pair(std::stoi(f[0]), std::stoi(f[1]));
        if (key == "h_override") cfg.horizontal_overrides[rc] = l2r::road_type_from_name(f[2]);
        else cfg.vertical_overrides[rc] = l2r::road_type_from_name(f[2]);
      } else if (key == "block_rows") cfg.block_rows = std::stoi(value);
      else if (key == "block_cols") cfg.block_cols = std::stoi(value);
      else if (key == "plant") {
        const auto f = split(value, ',');
        if (f.size() != 4) throw l2r::Error("want bs,bd,master,slave");
        cfg.planted_preferences[{std::stoi(f[0]), std::stoi(f[1])}] = parse_pref(f[2], f[3]);
      } else if (key == "default_pref") {
        const auto f = split(value, ',');
        if (f.size() != 2) throw l2r::Error("want master,slave");
        cfg.default_preference = parse_pref(f[0], f[1]);
      } else if (key == "only_planted") cfg.only_planted_pairs = (value == "true");
      else if (key == "count") cfg.trajectory_count = std::stoi(value);
      else if (key == "seed") cfg.rng_seed = std::stoull(value);
      else if (key == "detour") cfg.detour_noise = std::stod(value);
      else if (key == "cell_m") cfg.cell_m = std::stod(value);
      else if (key == "jitter") cfg.length_jitter = std::stod(value);
      else if (key == "span_s") cfg.departure_span_s = std::stoll(value);
      else if (key == "fuel_a") cfg.fuel.a = std::stod(value);
      else if (key == "fuel_b") cfg.fuel.b = std::stod(value);
      else if (key == "fuel_c") cfg.fuel.c = std::stod(value);
      else if (key.rfind("speed_", 0) == 0)
        cfg.speeds_kmh[l2r::road_type_from_name(key.substr(6))] = std::stod(value);
      else throw l2r::Error("unknown key");
    } catch (const l2r::Error &) {
      throw;
    } catch (const std::exception &) {
      throw l2r::Error("bad value for '" + key + "' at config line " + std::to_string(lineno));
    }
  }
  if (cfg.row_types.empty()) cfg.row_types = {l2r::RoadType::tertiary};
  if (cfg.col_types.empty()) cfg.col_types = {l2r::RoadType::residential};
  return cfg;
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path);
  if (!out) throw l2r::Error("cannot write " + path);
  out << content;
}

int cmd_synth(const std::string &config_path, const std::string &out_dir) {
  const l2r::SyntheticConfig cfg = parse_synth_config(config_path);
  const l2r::SyntheticWorld world = l2r::generate_synthetic(cfg);
  fs::create_directories(out_dir);
  l2r::save_road_network(world.net, out_dir + "/nodes.csv", out_dir + "/edges.csv");
  l2r::save_trajectories(world.net, world.trajectories, out_dir + "/trajectories.jsonl");
  json gt = json::array();
  for (std::size_t i = 0; i < world.trajectories.size(); ++i) {
    json g;
    g["traj_id"] = world.trajectories[i].traj_id;
    g["master"] = l2r::cost_kind_name(world.planted[i].master);
    g["slave"] = world.planted[i].slave.name();
    g["block_from"] = world.block_pairs[i].first;
    g["block_to"] = world.block_pairs[i].second;
    g["detoured"] = static_cast<bool>(world.detoured[i]);
    gt.push_back(g);
  }
  write_file(out_dir + "/ground_truth.json", gt.dump(2));
  std::cout << "generated " << world.net.vertex_count() << " vertices, "
            << world.net.edge_count() << " edges, " << world.trajectories.size()
            << " trajectories in " << out_dir << "\n";
  return 0;
}

int cmd_build(const std::string &nodes, const std::string &edges, const std::string &traj,
              const std::string &window, std::int64_t boundary, const std::string &out,
              const std::string &regions_out) {
  const l2r::RoadNetwork net = l2r::load_road_network(nodes, edges);
  std::optional<l2r::TimeWindow> tw;
  if (!window.empty()) tw = l2r::parse_time_window(window);
  l2r::LoadReport report;
  std::vector<l2r::Trajectory> trajectories = l2r::load_trajectories(traj, net, tw, &report);
  if (boundary >= 0) {
    std::erase_if(trajectories,
                  [&](const l2r::Trajectory &t) { return t.departure >= boundary; });
  }

  l2r::ModelFile mf;
  l2r::ClusterStats stats;
  mf.model = l2r::build_region_model(net, trajectories, &stats);
  mf.net = net;
  for (const l2r::Trajectory &t : trajectories) mf.train_traj_ids.push_back(t.traj_id);
  std::sort(mf.train_traj_ids.begin(), mf.train_traj_ids.end());
  mf.fingerprint = l2r::compute_fingerprint(net, mf.train_traj_ids);
  l2r::save_model(mf, out);

  if (!regions_out.empty()) {
    std::vector<l2r::Region> regions;
    for (const auto &node : mf.model.nodes) regions.push_back(node.region);
    write_file(regions_out, l2r::regions_to_json(net, regions));
  }
  std::size_t t_edges = 0, b_edges = 0;
  for (const auto &e : mf.model.edges)
    (e.kind == l2r::RegionEdgeKind::T ? t_edges : b_edges) += 1;
  std::cout << "loaded " << report.accepted << "/" << report.records << " trajectories ("
            << report.rejects.size() << " rejected), kept " << trajectories.size()
            << " for training\n";
  std::cout << "model: " << mf.model.nodes.size() << " regions, " << t_edges << " T-edges, "
            << b_edges << " B-edges, " << stats.merges.size() << " merges -> " << out << "\n";
  return 0;
}

int cmd_transfer(const std::string &model_path, double amr, double mu1, double mu2, int k,
                 const std::string &out, std::string report_path, std::string prefs_path,
                 unsigned threads) {
  l2r::ModelFile mf = l2r::load_model(model_path);
  l2r::PipelineParams params;
  params.transfer.amr = amr;
  params.transfer.mu1 = mu1;
  params.transfer.mu2 = mu2;
  params.transfer.top_k = k;
  params.threads = threads;
  const l2r::PipelineResult result = l2r::learn_transfer_populate(mf.net, mf.model, params);
  l2r::save_model(mf, out);

  const fs::path base = fs::path(out).parent_path();
  if (report_path.empty()) report_path = (base / "transfer_report.json").string();
  if (prefs_path.empty()) prefs_path = (base / "preferences.json").string();

  json jr;
  jr["amr"] = result.transfer_report.amr;
  jr["mu1"] = result.transfer_report.mu1;
  jr["mu2"] = result.transfer_report.mu2;
  jr["n"] = result.transfer_report.n;
  jr["nnz"] = result.transfer_report.nnz;
  jr["p"] = result.transfer_report.p;
  jr["t_edges"] = result.transfer_report.t_edges;
  jr["b_edges"] = result.transfer_report.b_edges;
  jr["iterations_per_column"] = result.transfer_report.iterations_per_column;
  jr["residuals"] = result.transfer_report.residuals;
  jr["null_rate"] = result.transfer_report.null_rate;
  jr["wall_time_ms"] = result.transfer_report.wall_time_ms;
  jr["learn_ms"] = result.learn_ms;
  jr["populate_ms"] = result.populate_ms;
  write_file(report_path, jr.dump(2));
  write_file(prefs_path, l2r::preferences_to_json(mf.model));

  std::cout << "learned " << result.t_edges_learned << " T-edge preferences, transferred to "
            << result.transfer_report.b_edges << " B-edges (null rate "
            << result.transfer_report.null_rate << ") -> " << out << "\n";
  return 0;
}

int cmd_route(const std::string &model_path, std::int64_t from, std::int64_t to,
              std::int64_t depart) {
  const l2r::ModelFile mf = l2r::load_model(model_path);
  const auto s = mf.net.vertex_by_original(from);
  if (!s) throw l2r::Error("unknown node id " + std::to_string(from));
  const auto d = mf.net.vertex_by_original(to);
  if (!d) throw l2r::Error("unknown node id " + std::to_string(to));
  const l2r::RouteResult result = l2r::route(mf.model, mf.net, *s, *d, depart);
  json j;
  auto &path = j["path"] = json::array();
  for (l2r::VertexId v : result.path.vertices) path.push_back(mf.net.vertex(v).original_id);
  j["tag"] = l2r::route_tag_name(result.tag);
  j["costs"]["DI"] = l2r::path_cost(mf.net, result.path, l2r::CostKind::DI);
  j["costs"]["TT"] = l2r::path_cost(mf.net, result.path, l2r::CostKind::TT);
  j["costs"]["FC"] = l2r::path_cost(mf.net, result.path, l2r::CostKind::FC);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_eval(const std::string &model_path, const std::string &traj, std::int64_t boundary,
             const std::string &out_dir, unsigned threads) {
  const l2r::ModelFile mf = l2r::load_model(model_path);
  std::vector<l2r::Trajectory> all = l2r::load_trajectories(traj, mf.net);
  auto [train, test] = l2r::split_train_test(all, boundary);
  l2r::EvalOptions opts;
  opts.threads = threads;
  const l2r::EvalReport report = l2r::evaluate(mf.model, mf.net, test, mf.train_traj_ids, opts);
  fs::create_directories(out_dir);
  write_file(out_dir + "/report.json", l2r::report_to_json(report));
  write_file(out_dir + "/report.csv", l2r::report_to_csv(report));
  std::cout << "evaluated " << report.queries << " held-out queries ("
            << report.skipped_unroutable << " unroutable)\n";
  for (const auto &m : report.methods) {
    const auto it = m.overall.find("psim");
    if (it != m.overall.end())
      std::cout << "  " << m.method << ": mean pSim " << it->second.mean << " over "
                << it->second.n << " queries, " << m.mean_query_ms << " ms/query\n";
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"trajectory-based routing over a learned region graph"};
  app.set_config("--config", "", "key=value config file; flags override");
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "cap on worker threads (0 = hardware)")->capture_default_str();

  auto *synth = app.add_subcommand("synth", "generate a synthetic grid world");
  std::string synth_cfg, synth_out;
  synth->add_option("--config", synth_cfg, "synthetic world config")->required();
  synth->add_option("--out", synth_out, "output directory")->required();

  auto *build = app.add_subcommand("build", "build the region-graph model");
  std::string nodes, edges, traj, window, model_out, regions_out;
  std::int64_t boundary = -1;
  build->add_option("--nodes", nodes, "nodes.csv")->required();
  build->add_option("--edges", edges, "edges.csv")->required();
  build->add_option("--traj", traj, "trajectories.jsonl")->required();
  build->add_option("--window", window, "departure time-of-day filter HH:MM-HH:MM");
  build->add_option("--boundary", boundary, "keep only departures before this epoch second");
  build->add_option("--out", model_out, "model file to write")->required();
  build->add_option("--regions", regions_out, "optional regions.json dump");

  auto *transfer = app.add_subcommand("transfer", "learn, transfer, and apply preferences");
  std::string t_model, t_out, t_report, t_prefs;
  double amr = 0.7, mu1 = 1.0, mu2 = 0.01;
  int top_k = 2;
  transfer->add_option("--model", t_model, "model file from build")->required();
  transfer->add_option("--amr", amr, "similarity threshold")->capture_default_str();
  transfer->add_option("--mu1", mu1, "Laplacian weight")->capture_default_str();
  transfer->add_option("--mu2", mu2, "ridge weight")->capture_default_str();
  transfer->add_option("--k", top_k, "top-k road types per region")->capture_default_str();
  transfer->add_option("--out", t_out, "model file to write")->required();
  transfer->add_option("--report", t_report, "transfer_report.json path");
  transfer->add_option("--prefs", t_prefs, "preferences.json path");

  auto *route_cmd = app.add_subcommand("route", "answer a routing query");
  std::string r_model;
  std::int64_t r_from = 0, r_to = 0, r_depart = 0;
  route_cmd->add_option("--model", r_model, "model file")->required();
  route_cmd->add_option("--from", r_from, "source node id")->required();
  route_cmd->add_option("--to", r_to, "destination node id")->required();
  route_cmd->add_option("--depart", r_depart,
                        "departure epoch seconds (models are built per time window; "
                        "this selects nothing within one model)")->capture_default_str();

  auto *eval_cmd = app.add_subcommand("eval", "score against shortest/fastest baselines");
  std::string e_model, e_traj, e_out;
  std::int64_t e_boundary = 0;
  eval_cmd->add_option("--model", e_model, "model file")->required();
  eval_cmd->add_option("--traj", e_traj, "trajectories.jsonl")->required();
  eval_cmd->add_option("--boundary", e_boundary, "train/test split epoch second")->required();
  eval_cmd->add_option("--out", e_out, "report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_cfg, synth_out);
    if (build->parsed())
      return cmd_build(nodes, edges, traj, window, boundary, model_out, regions_out);
    if (transfer->parsed())
      return cmd_transfer(t_model, amr, mu1, mu2, top_k, t_out, t_report, t_prefs, threads);
    if (route_cmd->parsed()) return cmd_route(r_model, r_from, r_to, r_depart);
    if (eval_cmd->parsed()) return cmd_eval(e_model, e_traj, e_boundary, e_out, threads);
  } catch (const l2r::SolverError &e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const l2r::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
