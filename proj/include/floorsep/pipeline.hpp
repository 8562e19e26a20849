#pragma once
#include <string>
#include <vector>

#include "floorsep/cluster.hpp"
#include "floorsep/community.hpp"
#include "floorsep/distance.hpp"
#include "floorsep/embed.hpp"
#include "floorsep/eval.hpp"
#include "floorsep/graph.hpp"
#include "floorsep/synth.hpp"

namespace floorsep {

enum class DatasetKind { Huawei, Uji, Synth };

struct RunConfig {
  std::string scenario = "SYNTH";  // HW-Def, HW-WBDE, UJI-Geo-T/V, UJI-WBDE-T/V, SYNTH
  DatasetKind dataset_kind = DatasetKind::Synth;
  std::string dataset_path;
  DistanceSourceKind distance_source = DistanceSourceKind::SignalHeuristic;
  bool distance_source_set = false;  // explicit on the CLI vs scenario default
  SignalModelConfig signal;
  PairingPolicy pairing;
  GraphConfig graph;
  WalkConfig walks;
  SgnsConfig sgns;
  KMeansConfig kmeans;
  int k_min = 3;
  int k_max = 20;
  bool normalize_embeddings = true;  // L2 rows before clustering
  std::string method = "node2vec";  // or louvain/leiden/lpa/fastgreedy
  int bootstrap_B = 1000;
  double level = 0.95;
  bool trajectory_consistent = false;
  SyntheticBuildingConfig synth;
  uint64_t seed = 0;
  std::string out_dir = "run";
};

// Rejects scenario/source combinations that make no sense; fills the
// scenario's default source when none was given explicitly.
void validate_scenario(RunConfig& cfg);

std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json_file(const std::string& path);

struct PipelineResult {
  std::vector<int> assignment;
  int k = 0;
  bool evaluated = false;
  EvaluationReport report;
};

// ingest -> distances -> graph -> (embed+auto-k | baseline) -> eval.
// Artifacts land in cfg.out_dir; the manifest alone reproduces the run.
PipelineResult run_pipeline(const RunConfig& cfg);

struct ComparisonRow {
  std::string dir;
  std::string method;
  EvaluationReport report;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::vector<std::vector<double>> mcnemar_p;  // pairwise
};

Comparison compare_runs(const std::vector<std::string>& run_dirs);
void write_comparison_csv(const Comparison& c, const std::string& path);

}  // namespace floorsep
