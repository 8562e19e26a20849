#include "floorsep/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "floorsep/ingest.hpp"
#include "floorsep/rng.hpp"
#include "json.hpp"

namespace floorsep {
namespace {

const char* source_name(DistanceSourceKind k) {
  switch (k) {
    case DistanceSourceKind::Provided: return "provided";
    case DistanceSourceKind::Geometric: return "geometric";
    case DistanceSourceKind::SignalHeuristic: return "signal";
  }
  return "?";
}

DistanceSourceKind source_from_name(const std::string& s) {
  if (s == "provided") return DistanceSourceKind::Provided;
  if (s == "geometric") return DistanceSourceKind::Geometric;
  if (s == "signal") return DistanceSourceKind::SignalHeuristic;
  throw ConfigError("unknown distance source '" + s + "'");
}

const char* kind_name(DatasetKind k) {
  switch (k) {
    case DatasetKind::Huawei: return "huawei";
    case DatasetKind::Uji: return "uji";
    case DatasetKind::Synth: return "synth";
  }
  return "?";
}

DatasetKind kind_from_name(const std::string& s) {
  if (s == "huawei") return DatasetKind::Huawei;
  if (s == "uji") return DatasetKind::Uji;
  if (s == "synth") return DatasetKind::Synth;
  throw ConfigError("unknown dataset kind '" + s + "'");
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= uint64_t(uint8_t(c));
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error("[" + stage + "] " + what) {}
};

}  // namespace

void validate_scenario(RunConfig& cfg) {
  struct Rule {
    const char* scenario;
    DatasetKind kind;
    DistanceSourceKind source;
  };
  static const Rule rules[] = {
      {"HW-Def", DatasetKind::Huawei, DistanceSourceKind::Provided},
      {"HW-WBDE", DatasetKind::Huawei, DistanceSourceKind::SignalHeuristic},
      {"UJI-Geo-T", DatasetKind::Uji, DistanceSourceKind::Geometric},
      {"UJI-Geo-V", DatasetKind::Uji, DistanceSourceKind::Geometric},
      {"UJI-WBDE-T", DatasetKind::Uji, DistanceSourceKind::SignalHeuristic},
      {"UJI-WBDE-V", DatasetKind::Uji, DistanceSourceKind::SignalHeuristic},
  };
  if (cfg.scenario == "SYNTH") {
    cfg.dataset_kind = DatasetKind::Synth;
    if (!cfg.distance_source_set) cfg.distance_source = DistanceSourceKind::SignalHeuristic;
    if (cfg.distance_source == DistanceSourceKind::Provided)
      throw ConfigError("scenario SYNTH has no provided distances");
    return;
  }
  for (const auto& r : rules) {
    if (cfg.scenario != r.scenario) continue;
    cfg.dataset_kind = r.kind;
    if (cfg.distance_source_set && cfg.distance_source != r.source)
      throw ConfigError("scenario " + cfg.scenario + " requires --distance-source " +
                        source_name(r.source));
    cfg.distance_source = r.source;
    return;
  }
  throw ConfigError("unknown scenario '" + cfg.scenario + "'");
}

std::string config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["scenario"] = cfg.scenario;
  j["dataset_kind"] = kind_name(cfg.dataset_kind);
  j["dataset_path"] = cfg.dataset_path;
  j["distance_source"] = source_name(cfg.distance_source);
  j["signal"] = {{"p0", cfg.signal.p0}, {"gamma", cfg.signal.gamma}, {"d_max", cfg.signal.d_max}};
  j["pairing"] = {{"knn_m", cfg.pairing.knn_m}};
  j["graph"] = {{"sigma", cfg.graph.sigma},
                {"step_default_weight", cfg.graph.step_default_weight},
                {"elevation_policy",
                 cfg.graph.elevation_policy == ElevationPolicy::Include ? "include" : "exclude"},
                {"elevation_weight", cfg.graph.elevation_weight},
                {"synthetic_weight", cfg.graph.synthetic_weight}};
  j["walks"] = {{"p", cfg.walks.p},
                {"q", cfg.walks.q},
                {"walks_per_node", cfg.walks.walks_per_node},
                {"walk_length", cfg.walks.walk_length}};
  j["sgns"] = {{"dim", cfg.sgns.dim},       {"window", cfg.sgns.window},
               {"negatives", cfg.sgns.negatives}, {"epochs", cfg.sgns.epochs},
               {"initial_lr", cfg.sgns.initial_lr}, {"parallel", cfg.sgns.parallel}};
  j["kmeans"] = {{"restarts", cfg.kmeans.restarts},
                 {"max_iters", cfg.kmeans.max_iters},
                 {"rel_tol", cfg.kmeans.rel_tol}};
  j["k_min"] = cfg.k_min;
  j["k_max"] = cfg.k_max;
  j["normalize_embeddings"] = cfg.normalize_embeddings;
  j["method"] = cfg.method;
  j["bootstrap_B"] = cfg.bootstrap_B;
  j["level"] = cfg.level;
  j["trajectory_consistent"] = cfg.trajectory_consistent;
  j["synth"] = {{"floors", cfg.synth.floors},
                {"floor_width", cfg.synth.floor_width},
                {"floor_depth", cfg.synth.floor_depth},
                {"floor_height", cfg.synth.floor_height},
                {"aps_per_floor", cfg.synth.aps_per_floor},
                {"gamma", cfg.synth.gamma},
                {"p0", cfg.synth.p0},
                {"floor_attenuation", cfg.synth.floor_attenuation},
                {"noise_sigma", cfg.synth.noise_sigma},
                {"detect_threshold", cfg.synth.detect_threshold},
                {"trajectories", cfg.synth.trajectories},
                {"steps_per_trajectory", cfg.synth.steps_per_trajectory},
                {"step_length", cfg.synth.step_length},
                {"elevator_prob", cfg.synth.elevator_prob},
                {"seed", cfg.synth.seed}};
  j["seed"] = cfg.seed;
  return j.dump(2);
}

RunConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("missing config file: " + path);
  nlohmann::json j;
  in >> j;
  RunConfig c;
  auto get = [&](const nlohmann::json& src, const char* key, auto& field) {
    if (src.contains(key)) field = src[key].get<std::decay_t<decltype(field)>>();
  };
  get(j, "scenario", c.scenario);
  if (j.contains("dataset_kind")) c.dataset_kind = kind_from_name(j["dataset_kind"]);
  get(j, "dataset_path", c.dataset_path);
  if (j.contains("distance_source")) {
    c.distance_source = source_from_name(j["distance_source"]);
    c.distance_source_set = true;
  }
  if (j.contains("signal")) {
    get(j["signal"], "p0", c.signal.p0);
    get(j["signal"], "gamma", c.signal.gamma);
    get(j["signal"], "d_max", c.signal.d_max);
  }
  if (j.contains("pairing")) get(j["pairing"], "knn_m", c.pairing.knn_m);
  if (j.contains("graph")) {
    get(j["graph"], "sigma", c.graph.sigma);
    get(j["graph"], "step_default_weight", c.graph.step_default_weight);
    get(j["graph"], "elevation_weight", c.graph.elevation_weight);
    get(j["graph"], "synthetic_weight", c.graph.synthetic_weight);
    if (j["graph"].contains("elevation_policy"))
      c.graph.elevation_policy = j["graph"]["elevation_policy"] == "include"
                                     ? ElevationPolicy::Include
                                     : ElevationPolicy::ExcludeAndSplit;
  }
  if (j.contains("walks")) {
    get(j["walks"], "p", c.walks.p);
    get(j["walks"], "q", c.walks.q);
    get(j["walks"], "walks_per_node", c.walks.walks_per_node);
    get(j["walks"], "walk_length", c.walks.walk_length);
  }
  if (j.contains("sgns")) {
    get(j["sgns"], "dim", c.sgns.dim);
    get(j["sgns"], "window", c.sgns.window);
    get(j["sgns"], "negatives", c.sgns.negatives);
    get(j["sgns"], "epochs", c.sgns.epochs);
    get(j["sgns"], "initial_lr", c.sgns.initial_lr);
    get(j["sgns"], "parallel", c.sgns.parallel);
  }
  if (j.contains("kmeans")) {
    get(j["kmeans"], "restarts", c.kmeans.restarts);
    get(j["kmeans"], "max_iters", c.kmeans.max_iters);
    get(j["kmeans"], "rel_tol", c.kmeans.rel_tol);
  }
  get(j, "k_min", c.k_min);
  get(j, "k_max", c.k_max);
  get(j, "normalize_embeddings", c.normalize_embeddings);
  get(j, "method", c.method);
  get(j, "bootstrap_B", c.bootstrap_B);
  get(j, "level", c.level);
  get(j, "trajectory_consistent", c.trajectory_consistent);
  if (j.contains("synth")) {
    const auto& s = j["synth"];
    get(s, "floors", c.synth.floors);
    get(s, "floor_width", c.synth.floor_width);
    get(s, "floor_depth", c.synth.floor_depth);
    get(s, "floor_height", c.synth.floor_height);
    get(s, "aps_per_floor", c.synth.aps_per_floor);
    get(s, "gamma", c.synth.gamma);
    get(s, "p0", c.synth.p0);
    get(s, "floor_attenuation", c.synth.floor_attenuation);
    get(s, "noise_sigma", c.synth.noise_sigma);
    get(s, "detect_threshold", c.synth.detect_threshold);
    get(s, "trajectories", c.synth.trajectories);
    get(s, "steps_per_trajectory", c.synth.steps_per_trajectory);
    get(s, "step_length", c.synth.step_length);
    get(s, "elevator_prob", c.synth.elevator_prob);
    get(s, "seed", c.synth.seed);
  }
  get(j, "seed", c.seed);
  get(j, "out_dir", c.out_dir);
  return c;
}

PipelineResult run_pipeline(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  validate_scenario(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  auto out = [&](const std::string& name) { return cfg.out_dir + "/" + name; };

  // manifest first, so even a failed run is reproducible
  {
    std::string cj = config_to_json(cfg);
    nlohmann::ordered_json m;
    m["config"] = nlohmann::ordered_json::parse(cj);
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx", (unsigned long long)fnv1a(cj));
    m["config_hash"] = hash;
    std::ofstream mf(out("manifest.json"));
    mf << m.dump(2) << "\n";
  }

  RawDataset ds;
  try {
    switch (cfg.dataset_kind) {
      case DatasetKind::Huawei: ds = parse_huawei(cfg.dataset_path); break;
      case DatasetKind::Uji: ds = parse_uji(cfg.dataset_path); break;
      case DatasetKind::Synth: {
        auto scfg = cfg.synth;
        if (scfg.seed == 0) scfg.seed = Rng::substream(cfg.seed, "synth-data");
        ds = generate(scfg);
        break;
      }
    }
  } catch (const std::exception& e) {
    throw StageError("ingest", e.what());
  }

  std::vector<DistanceRecord> dists;
  try {
    switch (cfg.distance_source) {
      case DistanceSourceKind::Provided: dists = provided_distances(ds); break;
      case DistanceSourceKind::Geometric:
        dists = geometric_distances(ds, candidate_pairs(ds, cfg.pairing, cfg.signal));
        break;
      case DistanceSourceKind::SignalHeuristic:
        dists = signal_distances(ds, candidate_pairs(ds, cfg.pairing, cfg.signal), cfg.signal);
        break;
    }
    write_distances_csv(dists, out("distances.csv"));
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("distance", e.what());
  }

  TrajectoryGraph g;
  try {
    auto gcfg = cfg.graph;
    gcfg.signal = cfg.signal;
    g = ensure_connected(build_graph(ds, dists, gcfg), ds, gcfg);
    write_edge_list(g, out("graph.edges"));
  } catch (const std::exception& e) {
    throw StageError("graph", e.what());
  }

  PipelineResult result;
  try {
    if (cfg.method == "node2vec") {
      auto wcfg = cfg.walks;
      wcfg.seed = Rng::substream(cfg.seed, "walks-stage");
      auto walks = generate_walks(g, wcfg);
      auto scfg = cfg.sgns;
      scfg.seed = Rng::substream(cfg.seed, "sgns-stage");
      auto emb = train_sgns(walks, g.n, scfg);
      write_embedding(emb, out("embedding.txt"));
      if (cfg.normalize_embeddings) {
        for (int i = 0; i < emb.rows; ++i) {
          double norm = 0.0;
          for (int jj = 0; jj < emb.dim; ++jj) norm += emb.row(i)[jj] * emb.row(i)[jj];
          norm = std::sqrt(norm);
          if (norm > 0)
            for (int jj = 0; jj < emb.dim; ++jj) emb.row(i)[jj] /= norm;
        }
      }
      auto sweep = auto_k(emb, cfg.k_min, std::min(cfg.k_max, g.n - 1),
                          Rng::substream(cfg.seed, "kmeans-stage"), cfg.kmeans);
      write_sweep_csv(sweep, out("ch_sweep.csv"));
      const auto& chosen = sweep.entries[sweep.k_opt - sweep.k_min];
      result.assignment = chosen.assignment.labels;
      result.k = sweep.k_opt;
    } else {
      Partition p;
      uint64_t s = Rng::substream(cfg.seed, "baseline-stage");
      if (cfg.method == "louvain")
        p = louvain(g, s);
      else if (cfg.method == "leiden")
        p = leiden(g, s);
      else if (cfg.method == "lpa")
        p = label_propagation(g, s);
      else if (cfg.method == "fastgreedy")
        p = fast_greedy(g);
      else
        throw ConfigError("unknown method '" + cfg.method + "'");
      result.assignment = p.labels;
      result.k = p.count;
    }
    if (cfg.trajectory_consistent)
      result.assignment = trajectory_consistent_view(result.assignment, ds.trajectories);
    Partition out_part;
    out_part.labels = result.assignment;
    out_part.count = result.k;
    write_partition_csv(out_part, out("partition.csv"));
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(cfg.method == "node2vec" ? "embed/cluster" : "baseline", e.what());
  }

  if (ds.has_ground_truth) {
    try {
      result.report = evaluate(result.assignment, ds.ground_truth, cfg.bootstrap_B, cfg.level,
                               Rng::substream(cfg.seed, "bootstrap-stage"));
      result.evaluated = true;
      write_report_json(result.report, out("report.json"));
      write_confusion_csv(result.report.confusion, result.report.label_order,
                          out("confusion.csv"));
      auto mapping = map_clusters(result.assignment, ds.ground_truth);
      std::ofstream flags(out("flags.csv"));
      flags << "node_id,correct\n";
      for (size_t i = 0; i < result.assignment.size(); ++i)
        flags << i << "," << (mapping.at(result.assignment[i]) == ds.ground_truth[i] ? 1 : 0)
              << "\n";
    } catch (const std::exception& e) {
      throw StageError("eval", e.what());
    }
  }

  {
    auto s = dataset_summary(ds);
    nlohmann::ordered_json j;
    j["fingerprints"] = s.fingerprints;
    j["trajectories"] = s.trajectories;
    j["aps"] = s.aps;
    j["labels"] = s.labels;
    j["step_pairs"] = s.step_pairs;
    j["elevation_pairs"] = s.elevation_pairs;
    j["distance_records"] = s.distance_records;
    j["k_opt"] = result.k;
    std::ofstream sf(out("summary.json"));
    sf << j.dump(2) << "\n";
  }
  return result;
}

Comparison compare_runs(const std::vector<std::string>& run_dirs) {
  if (run_dirs.size() < 2) throw ConfigError("compare needs at least two run directories");
  Comparison cmp;
  std::vector<std::vector<int>> flags(run_dirs.size());
  for (size_t r = 0; r < run_dirs.size(); ++r) {
    const auto& dir = run_dirs[r];
    std::ifstream rf(dir + "/report.json");
    if (!rf) throw IngestError("missing " + dir + "/report.json");
    nlohmann::json j;
    rf >> j;
    ComparisonRow row;
    row.dir = dir;
    {
      std::ifstream mf(dir + "/manifest.json");
      if (mf) {
        nlohmann::json m;
        mf >> m;
        row.method = m["config"].value("method", "?");
      }
    }
    row.report.accuracy = j["accuracy"];
    row.report.f1_weighted = j["f1_weighted"];
    row.report.ari = j["ari"];
    row.report.nmi = j["nmi"];
    row.report.purity = j["purity"];
    row.report.ci_accuracy = {j["accuracy"], j["ci_accuracy"][0], j["ci_accuracy"][1]};
    row.report.ci_f1 = {j["f1_weighted"], j["ci_f1"][0], j["ci_f1"][1]};
    cmp.rows.push_back(std::move(row));

    std::ifstream ff(dir + "/flags.csv");
    if (!ff) throw IngestError("missing " + dir + "/flags.csv");
    std::string line;
    std::getline(ff, line);
    while (std::getline(ff, line)) {
      if (line.empty()) continue;
      int id, ok;
      if (std::sscanf(line.c_str(), "%d,%d", &id, &ok) != 2)
        throw FormatError(dir + "/flags.csv: malformed line");
      flags[r].push_back(ok);
    }
  }
  for (size_t r = 1; r < flags.size(); ++r)
    if (flags[r].size() != flags[0].size())
      throw ConfigError("runs cover different node sets; cannot compare");

  cmp.mcnemar_p.assign(run_dirs.size(), std::vector<double>(run_dirs.size(), 1.0));
  for (size_t a = 0; a < flags.size(); ++a)
    for (size_t b = 0; b < flags.size(); ++b)
      if (a != b) cmp.mcnemar_p[a][b] = mcnemar(flags[a], flags[b]);
  return cmp;
}

void write_comparison_csv(const Comparison& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  out << "dir,method,accuracy,f1_weighted,ari,nmi,purity";
  for (const auto& row : c.rows) out << ",p_vs_" << row.method;
  out << "\n";
  char buf[256];
  for (size_t i = 0; i < c.rows.size(); ++i) {
    const auto& r = c.rows[i];
    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g", r.dir.c_str(),
                  r.method.c_str(), r.report.accuracy, r.report.f1_weighted, r.report.ari,
                  r.report.nmi, r.report.purity);
    out << buf;
    for (size_t jj = 0; jj < c.rows.size(); ++jj) {
      std::snprintf(buf, sizeof buf, ",%.17g", c.mcnemar_p[i][jj]);
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace floorsep
