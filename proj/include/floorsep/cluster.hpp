#pragma once
#include <string>
#include <vector>

#include "floorsep/embed.hpp"

namespace floorsep {

struct KMeansConfig {
  int restarts = 10;
  int max_iters = 300;
  double rel_tol = 1e-6;
};

struct ClusterAssignment {
  std::vector<int> labels;  // node id -> cluster in [0, k)
  int k = 0;
  double inertia = 0.0;
  std::vector<double> inertia_history;  // best restart; non-increasing
};

struct ChSweep {
  struct Entry {
    int k;
    double ch;
    ClusterAssignment assignment;
  };
  std::vector<Entry> entries;
  int k_opt = 0;
  int k_min = 3;
  int k_max = 20;
};

// Lloyd with k-means++ seeding, best of `restarts` by inertia.
// parallel=false forces the serial reference assignment kernel.
ClusterAssignment kmeans(const EmbeddingMatrix& X, int k, uint64_t seed,
                         const KMeansConfig& cfg = {}, bool parallel = true);

// Calinski-Harabasz index. WGSS = 0 returns the max finite double.
double ch_index(const EmbeddingMatrix& X, const ClusterAssignment& a);

ChSweep auto_k(const EmbeddingMatrix& X, int k_min, int k_max, uint64_t seed,
               const KMeansConfig& cfg = {}, bool parallel = true);

void write_sweep_csv(const ChSweep& s, const std::string& path);

// Exposed for tests and the benchmark: one assignment pass of Lloyd.
void assign_points(const EmbeddingMatrix& X, const std::vector<double>& centroids, int k,
                   std::vector<int>& labels, std::vector<double>& sq_dists, bool parallel);

}  // namespace floorsep
