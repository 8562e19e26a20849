#pragma once
#include <string>
#include <vector>

#include "floorsep/graph.hpp"

namespace floorsep {

struct WalkConfig {
  double p = 1.0;  // return parameter
  double q = 1.0;  // in-out parameter
  int walks_per_node = 10;
  int walk_length = 80;
  uint64_t seed = 0;
};

struct SgnsConfig {
  int dim = 32;
  int window = 10;
  int negatives = 5;
  int epochs = 5;
  double initial_lr = 0.025;
  double min_lr = 1e-4;
  uint64_t seed = 0;
  bool parallel = false;  // opt-in hogwild updates; not bit-reproducible
};

struct EmbeddingMatrix {
  int rows = 0;
  int dim = 0;
  std::vector<double> values;  // row-major

  double* row(int i) { return values.data() + size_t(i) * dim; }
  const double* row(int i) const { return values.data() + size_t(i) * dim; }
};

// Second-order biased random walks. Each (start node, walk index) owns an
// independent RNG stream, so output is identical serial or parallel.
std::vector<std::vector<int>> generate_walks(const TrajectoryGraph& g, const WalkConfig& cfg,
                                             bool parallel = true);

EmbeddingMatrix train_sgns(const std::vector<std::vector<int>>& walks, int n_nodes,
                           const SgnsConfig& cfg);

// One SGNS step's loss and gradients, exposed for finite-difference checks.
// L = -log sigmoid(u_ctx . v_c) - sum_i log sigmoid(-u_neg_i . v_c)
double sgns_pair_loss(const std::vector<double>& center, const std::vector<double>& ctx,
                      const std::vector<std::vector<double>>& negs);
void sgns_pair_grad(const std::vector<double>& center, const std::vector<double>& ctx,
                    const std::vector<std::vector<double>>& negs,
                    std::vector<double>& grad_center, std::vector<double>& grad_ctx,
                    std::vector<std::vector<double>>& grad_negs);

void write_embedding(const EmbeddingMatrix& m, const std::string& path);
EmbeddingMatrix read_embedding(const std::string& path);

void write_walks(const std::vector<std::vector<int>>& walks, const std::string& path);

}  // namespace floorsep
