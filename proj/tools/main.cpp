#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "floorsep/ingest.hpp"
#include "floorsep/pipeline.hpp"
#include "floorsep/rng.hpp"

using namespace floorsep;

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
  cmd->add_option("--seed", cfg.seed, "top-level seed; every stage derives from it");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--config", config_path, "JSON run config (CLI flags override)");
}

void add_pipeline_flags(CLI::App* cmd, RunConfig& cfg, bool& source_given) {
  cmd->add_option("--scenario", cfg.scenario, "HW-Def, HW-WBDE, UJI-Geo-T/V, UJI-WBDE-T/V, SYNTH");
  cmd->add_option("--dataset", cfg.dataset_path, "dataset directory (huawei) or CSV (uji)");
  auto* src = cmd->add_option_function<std::string>(
      "--distance-source",
      [&cfg](const std::string& s) {
        if (s == "provided")
          cfg.distance_source = DistanceSourceKind::Provided;
        else if (s == "geometric")
          cfg.distance_source = DistanceSourceKind::Geometric;
        else if (s == "signal")
          cfg.distance_source = DistanceSourceKind::SignalHeuristic;
        else
          throw CLI::ValidationError("--distance-source", "use provided|geometric|signal");
        cfg.distance_source_set = true;
      },
      "provided|geometric|signal");
  (void)src;
  (void)source_given;
  cmd->add_option("--p0", cfg.signal.p0, "heuristic tx power at 1 m, dBm");
  cmd->add_option("--gamma", cfg.signal.gamma, "heuristic path-loss exponent");
  cmd->add_option("--dmax", cfg.signal.d_max, "heuristic distance cap, meters");
  cmd->add_option("--knn-m", cfg.pairing.knn_m, "signal-space neighbors per node");
  cmd->add_option("--sigma", cfg.graph.sigma, "edge-weight kernel scale (0 = median distance)");
  cmd->add_option("--walk-p", cfg.walks.p, "return parameter p");
  cmd->add_option("--walk-q", cfg.walks.q, "in-out parameter q");
  cmd->add_option("--walks-per-node", cfg.walks.walks_per_node);
  cmd->add_option("--walk-length", cfg.walks.walk_length);
  cmd->add_option("--dim", cfg.sgns.dim, "embedding dimension");
  cmd->add_option("--window", cfg.sgns.window);
  cmd->add_option("--negatives", cfg.sgns.negatives);
  cmd->add_option("--epochs", cfg.sgns.epochs);
  cmd->add_option("--lr", cfg.sgns.initial_lr);
  cmd->add_flag("--parallel-sgns", cfg.sgns.parallel,
                "hogwild SGNS updates (faster, not bit-reproducible)");
  cmd->add_option("--k-min", cfg.k_min);
  cmd->add_option("--k-max", cfg.k_max);
  cmd->add_option("--method", cfg.method, "node2vec|louvain|leiden|lpa|fastgreedy");
  cmd->add_option("--bootstrap", cfg.bootstrap_B);
  cmd->add_flag("--trajectory-consistent", cfg.trajectory_consistent,
                "majority-vote smoothing within trajectories");
  cmd->add_option("--floors", cfg.synth.floors, "SYNTH: floor count");
  cmd->add_option("--synth-trajectories", cfg.synth.trajectories);
  cmd->add_option("--synth-steps", cfg.synth.steps_per_trajectory);
  cmd->add_option("--synth-noise", cfg.synth.noise_sigma);
  cmd->add_option("--synth-attenuation", cfg.synth.floor_attenuation);
  cmd->add_option("--synth-config", cfg.dataset_path, "SYNTH: JSON building config");
}

void print_summary(const RawDataset& ds) {
  auto s = dataset_summary(ds);
  std::printf("fingerprints: %zu\ntrajectories: %zu\naps: %zu\nlabels: %zu\n", s.fingerprints,
              s.trajectories, s.aps, s.labels);
  std::printf("step_pairs: %zu\nelevation_pairs: %zu\ndistance_records: %zu\n", s.step_pairs,
              s.elevation_pairs, s.distance_records);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unsupervised floor separation from Wi-Fi fingerprint trajectories"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  bool source_given = false;

  auto* c_ingest = app.add_subcommand("ingest", "parse a dataset and print a summary");
  std::string ingest_kind = "huawei", ingest_path;
  double delta_t = 600.0;
  c_ingest->add_option("--kind", ingest_kind, "huawei|uji")->required();
  c_ingest->add_option("--path", ingest_path)->required();
  c_ingest->add_option("--delta-t", delta_t, "UJI trajectory split threshold, seconds");

  auto* c_synth = app.add_subcommand("synth", "generate a synthetic building dataset");
  std::string synth_cfg_path, synth_hw_out, synth_uji_out;
  c_synth->add_option("--config", synth_cfg_path, "JSON building config");
  c_synth->add_option("--write-huawei", synth_hw_out, "emit in huawei layout to this directory");
  c_synth->add_option("--write-uji", synth_uji_out, "emit in UJI layout to this CSV");
  c_synth->add_option("--seed", cfg.synth.seed);
  c_synth->add_option("--floors", cfg.synth.floors);
  c_synth->add_option("--trajectories", cfg.synth.trajectories);

  auto* c_pipeline = app.add_subcommand("pipeline", "run the full pipeline");
  add_common(c_pipeline, cfg, config_path);
  add_pipeline_flags(c_pipeline, cfg, source_given);

  // stage-wise subcommands share the pipeline flags; each persists the
  // artifacts its stage owns (run_pipeline always writes everything)
  for (const char* name : {"graph", "embed", "cluster", "eval"}) {
    auto* c = app.add_subcommand(name, std::string("run the pipeline through the ") + name +
                                           " stage and keep its artifacts");
    add_common(c, cfg, config_path);
    add_pipeline_flags(c, cfg, source_given);
  }

  auto* c_baseline = app.add_subcommand("baseline", "run a community-detection baseline");
  add_common(c_baseline, cfg, config_path);
  add_pipeline_flags(c_baseline, cfg, source_given);

  auto* c_compare = app.add_subcommand("compare", "compare finished runs (metrics + McNemar)");
  std::vector<std::string> run_dirs;
  std::string compare_out = "comparison.csv";
  c_compare->add_option("runs", run_dirs, "run directories")->expected(-2);
  c_compare->add_option("--out", compare_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_ingest->parsed()) {
      RawDataset ds = ingest_kind == "uji" ? parse_uji(ingest_path, delta_t)
                                           : parse_huawei(ingest_path);
      print_summary(ds);
      return 0;
    }
    if (c_synth->parsed()) {
      SyntheticBuildingConfig scfg = cfg.synth;
      if (!synth_cfg_path.empty()) scfg = load_synth_config(synth_cfg_path);
      auto ds = generate(scfg);
      print_summary(ds);
      if (!synth_hw_out.empty()) write_huawei_format(ds, synth_hw_out);
      if (!synth_uji_out.empty()) write_uji_format(ds, synth_uji_out);
      return 0;
    }
    if (c_compare->parsed()) {
      auto cmp = compare_runs(run_dirs);
      write_comparison_csv(cmp, compare_out);
      std::printf("%-28s %-10s %8s %8s %8s %8s %8s\n", "run", "method", "acc", "f1", "ari", "nmi",
                  "purity");
      for (const auto& r : cmp.rows)
        std::printf("%-28s %-10s %8.3f %8.3f %8.3f %8.3f %8.3f\n", r.dir.c_str(),
                    r.method.c_str(), r.report.accuracy, r.report.f1_weighted, r.report.ari,
                    r.report.nmi, r.report.purity);
      std::printf("\nMcNemar p-values:\n");
      for (size_t i = 0; i < cmp.rows.size(); ++i) {
        for (size_t j = 0; j < cmp.rows.size(); ++j) std::printf(" %10.4g", cmp.mcnemar_p[i][j]);
        std::printf("\n");
      }
      return 0;
    }

    // pipeline-style subcommands
    if (!config_path.empty()) {
      RunConfig from_file = config_from_json_file(config_path);
      // the file is the run definition; --seed and --out stay overridable
      if (cfg.seed != 0) from_file.seed = cfg.seed;
      if (cfg.out_dir != "run") from_file.out_dir = cfg.out_dir;
      if (cfg.method != "node2vec") from_file.method = cfg.method;
      cfg = std::move(from_file);
    }
    if (c_baseline->parsed() && cfg.method == "node2vec")
      throw ConfigError("baseline subcommand needs --method louvain|leiden|lpa|fastgreedy");

    auto result = run_pipeline(cfg);
    std::printf("k=%d assignment written to %s/partition.csv\n", result.k, cfg.out_dir.c_str());
    if (result.evaluated) {
      const auto& r = result.report;
      std::printf("accuracy=%.4f [%.4f, %.4f]  f1=%.4f  ari=%.4f  nmi=%.4f  purity=%.4f\n",
                  r.accuracy, r.ci_accuracy.lo, r.ci_accuracy.hi, r.f1_weighted, r.ari, r.nmi,
                  r.purity);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
