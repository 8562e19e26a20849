#pragma once
#include <array>
#include <string>
#include <vector>

#include "floorsep/distance.hpp"
#include "floorsep/types.hpp"

namespace floorsep {

enum class EdgeKind { Step, Distance, Elevation, Synthetic };

const char* edge_kind_name(EdgeKind k);
EdgeKind edge_kind_from_name(const std::string& s);

enum class ElevationPolicy { ExcludeAndSplit, Include };

struct GraphConfig {
  double sigma = 0.0;  // 0 = median of input distances
  double step_default_weight = 1.0;
  ElevationPolicy elevation_policy = ElevationPolicy::ExcludeAndSplit;
  double elevation_weight = 0.5;
  double synthetic_weight = 0.01;
  SignalModelConfig signal;  // used by ensure_connected's closest-pair search
};

struct TrajectoryGraph {
  struct Edge {
    int u, v;
    double w;
    EdgeKind kind;
  };
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<int, double>>> adj;  // sorted by neighbor id

  void rebuild_adjacency();
  bool has_edge(int u, int v) const;
  double weighted_degree(int u) const;
  double total_weight() const;  // sum of edge weights (each edge once)
  std::vector<int> component_labels() const;
  int component_count() const {
    auto c = component_labels();
    int mx = -1;
    for (int x : c) mx = x > mx ? x : mx;
    return mx + 1;
  }
};

// exp(-meters/sigma), monotone decreasing, in (0, 1].
double distance_to_weight(double meters, double sigma);

TrajectoryGraph build_graph(const RawDataset& ds, const std::vector<DistanceRecord>& dists,
                            const GraphConfig& cfg = {});

// Joins components with weak Synthetic edges until the graph is connected.
TrajectoryGraph ensure_connected(TrajectoryGraph g, const RawDataset& ds,
                                 const GraphConfig& cfg = {}, bool parallel = true);

struct GraphStats {
  int n = 0;
  size_t m = 0;
  int components = 0;
  std::array<size_t, 4> kind_counts{};             // indexed by EdgeKind
  std::array<size_t, 10> weight_histogram{};       // bins over [0, max weight]
  double min_weight = 0.0, max_weight = 0.0;
};

GraphStats graph_stats(const TrajectoryGraph& g);

void write_edge_list(const TrajectoryGraph& g, const std::string& path);
TrajectoryGraph read_edge_list(const std::string& path);

}  // namespace floorsep
