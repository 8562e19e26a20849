#include "floorsep/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "floorsep/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace floorsep {
namespace {

double sq_dist(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

// k-means++ seeding
std::vector<double> seed_centroids(const EmbeddingMatrix& X, int k, Rng& rng) {
  const int n = X.rows, d = X.dim;
  std::vector<double> centroids(size_t(k) * d);
  int first = int(rng.next_below(n));
  std::copy_n(X.row(first), d, centroids.begin());
  std::vector<double> min_d2(n);
  for (int i = 0; i < n; ++i) min_d2[i] = sq_dist(X.row(i), centroids.data(), d);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : min_d2) total += v;
    int pick;
    if (total <= 0.0) {
      pick = int(rng.next_below(n));  // all remaining points coincide
    } else {
      double r = rng.next_double() * total;
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += min_d2[i];
        if (acc >= r) {
          pick = i;
          break;
        }
      }
    }
    double* cen = centroids.data() + size_t(c) * d;
    std::copy_n(X.row(pick), d, cen);
    for (int i = 0; i < n; ++i) min_d2[i] = std::min(min_d2[i], sq_dist(X.row(i), cen, d));
  }
  return centroids;
}

ClusterAssignment lloyd_once(const EmbeddingMatrix& X, int k, Rng& rng, const KMeansConfig& cfg,
                             bool parallel) {
  const int n = X.rows, d = X.dim;
  auto centroids = seed_centroids(X, k, rng);
  ClusterAssignment out;
  out.k = k;
  out.labels.assign(n, 0);
  std::vector<double> d2(n);
  std::vector<double> sums(size_t(k) * d);
  std::vector<int> counts(k);
  double prev_inertia = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    assign_points(X, centroids, k, out.labels, d2, parallel);

    // repair empty clusters with the globally farthest point
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i) ++counts[out.labels[i]];
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int far = 0;
      for (int i = 1; i < n; ++i)
        if (d2[i] > d2[far]) far = i;
      --counts[out.labels[far]];
      out.labels[far] = c;
      counts[c] = 1;
      d2[far] = 0.0;
    }

    double inertia = 0.0;
    for (int i = 0; i < n; ++i) inertia += d2[i];
    // Lloyd is monotone; allow only float-level slack
    if (inertia > prev_inertia * (1.0 + 1e-12) + 1e-12)
      throw std::logic_error("kmeans: inertia increased");
    out.inertia_history.push_back(inertia);
    bool converged = prev_inertia < std::numeric_limits<double>::infinity() &&
                     (prev_inertia - inertia) <= cfg.rel_tol * prev_inertia;
    prev_inertia = inertia;
    if (converged) break;

    std::fill(sums.begin(), sums.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      double* s = sums.data() + size_t(out.labels[i]) * d;
      const double* x = X.row(i);
      for (int j = 0; j < d; ++j) s[j] += x[j];
    }
    for (int c = 0; c < k; ++c)
      if (counts[c] > 0)
        for (int j = 0; j < d; ++j) centroids[size_t(c) * d + j] = sums[size_t(c) * d + j] / counts[c];
  }
  out.inertia = prev_inertia;
  return out;
}

}  // namespace

void assign_points(const EmbeddingMatrix& X, const std::vector<double>& centroids, int k,
                   std::vector<int>& labels, std::vector<double>& sq_dists, bool parallel) {
  const int n = X.rows, d = X.dim;
  labels.resize(n);
  sq_dists.resize(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int i = 0; i < n; ++i) {
    const double* x = X.row(i);
    int best = 0;
    double best_d = sq_dist(x, centroids.data(), d);
    for (int c = 1; c < k; ++c) {
      double dd = sq_dist(x, centroids.data() + size_t(c) * d, d);
      if (dd < best_d) {
        best_d = dd;
        best = c;
      }
    }
    labels[i] = best;
    sq_dists[i] = best_d;
  }
  (void)parallel;
}

ClusterAssignment kmeans(const EmbeddingMatrix& X, int k, uint64_t seed, const KMeansConfig& cfg,
                         bool parallel) {
  if (k < 1) throw ConfigError("kmeans: k must be >= 1");
  if (k > X.rows) throw ConfigError("kmeans: k exceeds point count");
  ClusterAssignment best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(Rng::substream(seed, "kmeans", uint64_t(r)));
    auto cand = lloyd_once(X, k, rng, cfg, parallel);
    if (cand.inertia < best.inertia) best = std::move(cand);
  }
  return best;
}

double ch_index(const EmbeddingMatrix& X, const ClusterAssignment& a) {
  const int n = X.rows, d = X.dim, k = a.k;
  if (k < 2 || k > n - 1) throw ConfigError("ch_index: need 2 <= k <= n-1");

  std::vector<double> global(d, 0.0), cent(size_t(k) * d, 0.0);
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) {
    const double* x = X.row(i);
    double* c = cent.data() + size_t(a.labels[i]) * d;
    ++counts[a.labels[i]];
    for (int j = 0; j < d; ++j) {
      global[j] += x[j];
      c[j] += x[j];
    }
  }
  for (int j = 0; j < d; ++j) global[j] /= n;
  for (int c = 0; c < k; ++c)
    for (int j = 0; j < d; ++j) cent[size_t(c) * d + j] /= std::max(counts[c], 1);

  double wgss = 0.0, bgss = 0.0;
  for (int i = 0; i < n; ++i) wgss += sq_dist(X.row(i), cent.data() + size_t(a.labels[i]) * d, d);
  for (int c = 0; c < k; ++c) bgss += counts[c] * sq_dist(cent.data() + size_t(c) * d, global.data(), d);

  if (wgss == 0.0) return std::numeric_limits<double>::max();  // zero-dispersion sentinel
  return (bgss / (k - 1)) / (wgss / (n - k));
}

ChSweep auto_k(const EmbeddingMatrix& X, int k_min, int k_max, uint64_t seed,
               const KMeansConfig& cfg, bool parallel) {
  if (k_min < 2 || k_max < k_min || k_max > X.rows - 1)
    throw ConfigError("auto_k: invalid range [" + std::to_string(k_min) + ", " +
                      std::to_string(k_max) + "] for n=" + std::to_string(X.rows));
  ChSweep sweep;
  sweep.k_min = k_min;
  sweep.k_max = k_max;
  sweep.entries.resize(k_max - k_min + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
#endif
  for (int k = k_min; k <= k_max; ++k) {
    // nested assignment kernels stay serial; the sweep is the parallel axis
    auto a = kmeans(X, k, Rng::substream(seed, "sweep", uint64_t(k)), cfg, false);
    double ch = ch_index(X, a);
    sweep.entries[k - k_min] = {k, ch, std::move(a)};
  }
  (void)parallel;
  sweep.k_opt = sweep.entries[0].k;
  double best = sweep.entries[0].ch;
  for (const auto& e : sweep.entries)
    if (e.ch > best) {
      best = e.ch;
      sweep.k_opt = e.k;
    }
  return sweep;
}

void write_sweep_csv(const ChSweep& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  out << "k,ch_value,inertia\n";
  char buf[96];
  for (const auto& e : s.entries) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", e.k, e.ch, e.assignment.inertia);
    out << buf;
  }
}

}  // namespace floorsep
