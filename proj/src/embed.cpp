#include "floorsep/embed.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "floorsep/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace floorsep {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// word2vec-style sigmoid lookup, linear in x over [-kSigMax, kSigMax]
constexpr int kSigTableSize = 1024;
constexpr double kSigMax = 6.0;

const double* sigmoid_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kSigTableSize);
    for (int i = 0; i < kSigTableSize; ++i) {
      double x = (2.0 * i / (kSigTableSize - 1) - 1.0) * kSigMax;
      t[i] = sigmoid(x);
    }
    return t;
  }();
  return table.data();
}

inline double fast_sigmoid(const double* table, double x) {
  if (x >= kSigMax) return 1.0;
  if (x <= -kSigMax) return 0.0;
  return table[int((x / kSigMax + 1.0) * 0.5 * (kSigTableSize - 1))];
}

void validate(const WalkConfig& cfg) {
  if (!(cfg.p > 0.0) || !(cfg.q > 0.0) || cfg.walks_per_node < 1 || cfg.walk_length < 1)
    throw ConfigError("invalid walk config: need p>0, q>0, walks>=1, length>=1");
}

void validate(const SgnsConfig& cfg) {
  if (cfg.dim < 1 || cfg.window < 1 || cfg.negatives < 1 || cfg.epochs < 0 ||
      !(cfg.initial_lr > 0.0))
    throw ConfigError("invalid sgns config");
}

// One biased walk from `start`, using the caller's RNG stream.
std::vector<int> one_walk(const TrajectoryGraph& g, const WalkConfig& cfg, int start, Rng& rng) {
  std::vector<int> walk{start};
  walk.reserve(cfg.walk_length);
  std::vector<double> cumsum;
  int prev = -1;
  while (int(walk.size()) < cfg.walk_length) {
    int cur = walk.back();
    const auto& nbrs = g.adj[cur];
    if (nbrs.empty()) break;
    cumsum.clear();
    double total = 0.0;
    for (auto& [x, w] : nbrs) {
      double alpha = 1.0;
      if (prev >= 0) {
        if (x == prev)
          alpha = 1.0 / cfg.p;
        else if (!g.has_edge(prev, x))
          alpha = 1.0 / cfg.q;
      }
      total += w * alpha;
      cumsum.push_back(total);
    }
    double u = rng.next_double() * total;
    size_t pick = std::lower_bound(cumsum.begin(), cumsum.end(), u) - cumsum.begin();
    if (pick >= nbrs.size()) pick = nbrs.size() - 1;
    prev = cur;
    walk.push_back(nbrs[pick].first);
  }
  return walk;
}

}  // namespace

std::vector<std::vector<int>> generate_walks(const TrajectoryGraph& g, const WalkConfig& cfg,
                                             bool parallel) {
  validate(cfg);
  const long long total = (long long)g.n * cfg.walks_per_node;
  std::vector<std::vector<int>> walks(total);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
#endif
  for (long long i = 0; i < total; ++i) {
    int node = int(i / cfg.walks_per_node);
    Rng rng(Rng::substream(cfg.seed, "walks", uint64_t(i)));
    walks[i] = one_walk(g, cfg, node, rng);
  }
  (void)parallel;
  return walks;
}

double sgns_pair_loss(const std::vector<double>& center, const std::vector<double>& ctx,
                      const std::vector<std::vector<double>>& negs) {
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  double loss = -std::log(sigmoid(dot(ctx, center)));
  for (const auto& neg : negs) loss -= std::log(sigmoid(-dot(neg, center)));
  return loss;
}

void sgns_pair_grad(const std::vector<double>& center, const std::vector<double>& ctx,
                    const std::vector<std::vector<double>>& negs,
                    std::vector<double>& grad_center, std::vector<double>& grad_ctx,
                    std::vector<std::vector<double>>& grad_negs) {
  const size_t d = center.size();
  grad_center.assign(d, 0.0);
  grad_ctx.assign(d, 0.0);
  grad_negs.assign(negs.size(), std::vector<double>(d, 0.0));
  double dot_pos = 0.0;
  for (size_t i = 0; i < d; ++i) dot_pos += ctx[i] * center[i];
  double g_pos = sigmoid(dot_pos) - 1.0;  // dL/d(u.v) for the positive term
  for (size_t i = 0; i < d; ++i) {
    grad_ctx[i] = g_pos * center[i];
    grad_center[i] = g_pos * ctx[i];
  }
  for (size_t k = 0; k < negs.size(); ++k) {
    double dot_neg = 0.0;
    for (size_t i = 0; i < d; ++i) dot_neg += negs[k][i] * center[i];
    double g_neg = sigmoid(dot_neg);
    for (size_t i = 0; i < d; ++i) {
      grad_negs[k][i] = g_neg * center[i];
      grad_center[i] += g_neg * negs[k][i];
    }
  }
}

EmbeddingMatrix train_sgns(const std::vector<std::vector<int>>& walks, int n_nodes,
                           const SgnsConfig& cfg) {
  validate(cfg);
  if (walks.empty()) throw ConfigError("train_sgns: empty walk corpus");

  const int d = cfg.dim;
  EmbeddingMatrix in;
  in.rows = n_nodes;
  in.dim = d;
  in.values.resize(size_t(n_nodes) * d);
  {
    Rng rng(Rng::substream(cfg.seed, "sgns-init"));
    for (auto& v : in.values) v = rng.uniform(-0.5 / d, 0.5 / d);
  }
  std::vector<double> out(size_t(n_nodes) * d, 0.0);

  // unigram^0.75 negative-sampling table as a cumulative sum
  std::vector<double> counts(n_nodes, 0.0);
  long long total_pairs_per_epoch = 0;
  for (const auto& w : walks) {
    for (int node : w) {
      if (node < 0 || node >= n_nodes) throw IntegrityError("walk references unknown node");
      counts[node] += 1.0;
    }
    const int L = int(w.size());
    for (int i = 0; i < L; ++i)
      total_pairs_per_epoch += std::min(i, cfg.window) + std::min(L - 1 - i, cfg.window);
  }
  double acc = 0.0;
  for (int i = 0; i < n_nodes; ++i) acc += std::pow(counts[i], 0.75);
  if (acc <= 0.0) throw ConfigError("train_sgns: corpus has no tokens");

  // unigram^0.75 draws become O(1) array lookups via a filled table
  const int table_size = std::max(n_nodes * 64, 1 << 20);
  std::vector<int> neg_table(table_size);
  {
    int i = 0;
    double cum = std::pow(counts[0], 0.75) / acc;
    for (int a = 0; a < table_size; ++a) {
      neg_table[a] = i;
      while (double(a + 1) / table_size > cum && i + 1 < n_nodes) {
        ++i;
        cum += std::pow(counts[i], 0.75) / acc;
      }
    }
  }
  const double* sig = sigmoid_table();

  const long long total_pairs = total_pairs_per_epoch * std::max(cfg.epochs, 1);

  auto train_walk = [&](const std::vector<int>& walk, Rng& rng, long long processed_base) {
    const int L = int(walk.size());
    std::vector<double> grad_center(d);
    long long processed = processed_base;
    for (int i = 0; i < L; ++i) {
      const int center = walk[i];
      double* v = in.row(center);
      for (int j = std::max(0, i - cfg.window); j <= std::min(L - 1, i + cfg.window); ++j) {
        if (j == i) continue;
        const int ctx = walk[j];
        double lr = cfg.initial_lr * (1.0 - double(processed) / double(total_pairs));
        lr = std::max(lr, cfg.min_lr);
        ++processed;

        std::fill(grad_center.begin(), grad_center.end(), 0.0);
        double* u = out.data() + size_t(ctx) * d;
        double dot = 0.0;
        for (int t = 0; t < d; ++t) dot += u[t] * v[t];
        double lg = lr * (fast_sigmoid(sig, dot) - 1.0);
        for (int t = 0; t < d; ++t) {
          grad_center[t] += lg * u[t];
          u[t] -= lg * v[t];
        }
        for (int k = 0; k < cfg.negatives; ++k) {
          int neg = -1;
          for (int attempt = 0; attempt < 10; ++attempt) {
            neg = neg_table[rng.next_below(uint64_t(table_size))];
            if (neg != ctx) break;
            neg = -1;
          }
          if (neg < 0) continue;
          double* un = out.data() + size_t(neg) * d;
          double dn = 0.0;
          for (int t = 0; t < d; ++t) dn += un[t] * v[t];
          double lgn = lr * fast_sigmoid(sig, dn);
          for (int t = 0; t < d; ++t) {
            grad_center[t] += lgn * un[t];
            un[t] -= lgn * v[t];
          }
        }
        for (int t = 0; t < d; ++t) v[t] -= grad_center[t];
      }
    }
    return processed - processed_base;
  };

  // prefix sums of per-walk pair counts, for lr positioning in parallel mode
  std::vector<long long> pair_prefix(walks.size() + 1, 0);
  for (size_t wi = 0; wi < walks.size(); ++wi) {
    const int L = int(walks[wi].size());
    long long c = 0;
    for (int i = 0; i < L; ++i)
      c += std::min(i, cfg.window) + std::min(L - 1 - i, cfg.window);
    pair_prefix[wi + 1] = pair_prefix[wi] + c;
  }

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (!cfg.parallel) {
      long long processed = (long long)epoch * total_pairs_per_epoch;
      for (size_t wi = 0; wi < walks.size(); ++wi) {
        Rng rng(Rng::substream(cfg.seed, "sgns-neg", uint64_t(epoch) * walks.size() + wi));
        processed += train_walk(walks[wi], rng, processed);
      }
    } else {
      // hogwild-style shared updates; values differ run to run but the
      // embedding quality properties still hold
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
      for (long long wi = 0; wi < (long long)walks.size(); ++wi) {
        Rng rng(Rng::substream(cfg.seed, "sgns-neg", uint64_t(epoch) * walks.size() + wi));
        long long base = (long long)epoch * total_pairs_per_epoch + pair_prefix[wi];
        train_walk(walks[wi], rng, base);
      }
    }
  }
  return in;
}

void write_embedding(const EmbeddingMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  out << m.rows << " " << m.dim << "\n";
  char buf[32];
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.dim; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m.row(i)[j]);
      out << buf << (j + 1 == m.dim ? '\n' : ' ');
    }
  }
}

EmbeddingMatrix read_embedding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("missing file: " + path);
  EmbeddingMatrix m;
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  if (std::sscanf(line.c_str(), "%d %d", &m.rows, &m.dim) != 2)
    throw FormatError(path + ": bad header '" + line + "'");
  m.values.reserve(size_t(m.rows) * m.dim);
  for (int i = 0; i < m.rows; ++i) {
    if (!std::getline(in, line)) throw FormatError(path + ": truncated at row " + std::to_string(i));
    std::istringstream ss(line);
    double v;
    int got = 0;
    while (ss >> v) {
      m.values.push_back(v);
      ++got;
    }
    if (got != m.dim)
      throw FormatError(path + ": row " + std::to_string(i) + " has " + std::to_string(got) +
                        " values, expected " + std::to_string(m.dim));
  }
  return m;
}

void write_walks(const std::vector<std::vector<int>>& walks, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  for (const auto& w : walks) {
    for (size_t i = 0; i < w.size(); ++i) out << w[i] << (i + 1 == w.size() ? '\n' : ' ');
  }
}

}  // namespace floorsep
