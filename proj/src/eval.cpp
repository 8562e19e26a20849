#include "floorsep/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "floorsep/rng.hpp"
#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace floorsep {
namespace {

double comb2(double x) { return x * (x - 1.0) / 2.0; }

double percentile(std::vector<double> sorted_ascending, double q) {
  const auto& v = sorted_ascending;
  if (v.empty()) return 0.0;
  double pos = q * (v.size() - 1);
  size_t lo = size_t(pos);
  size_t hi = std::min(lo + 1, v.size() - 1);
  double frac = pos - double(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

struct Contingency {
  std::map<std::pair<int, int>, long long> cells;
  std::unordered_map<int, long long> row_sums, col_sums;
  long long n = 0;

  Contingency(const std::vector<int>& truth, const std::vector<int>& pred) {
    if (truth.size() != pred.size()) throw ConfigError("labelings differ in length");
    n = (long long)truth.size();
    for (size_t i = 0; i < truth.size(); ++i) {
      ++cells[{truth[i], pred[i]}];
      ++row_sums[truth[i]];
      ++col_sums[pred[i]];
    }
  }
};

double weighted_f1_impl(const std::vector<std::string>& truth,
                        const std::vector<std::string>& pred) {
  std::set<std::string> labels(truth.begin(), truth.end());
  double total = 0.0;
  for (const auto& L : labels) {
    long long tp = 0, fp = 0, fn = 0, support = 0;
    for (size_t i = 0; i < truth.size(); ++i) {
      bool t = truth[i] == L, p = pred[i] == L;
      support += t;
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
    }
    double prec = tp + fp > 0 ? double(tp) / (tp + fp) : 0.0;
    double rec = tp + fn > 0 ? double(tp) / (tp + fn) : 0.0;
    double f1 = prec + rec > 0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
    total += f1 * double(support) / double(truth.size());
  }
  return total;
}

}  // namespace

std::vector<int> dense_codes(const std::vector<std::string>& labels) {
  std::map<std::string, int> codebook;
  for (const auto& l : labels) codebook.try_emplace(l, 0);
  int next = 0;
  for (auto& [l, c] : codebook) c = next++;
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(codebook[l]);
  return out;
}

ClusterFloorMapping map_clusters(const std::vector<int>& assignment,
                                 const std::vector<std::string>& truth) {
  if (assignment.size() != truth.size()) throw ConfigError("assignment/truth length mismatch");
  std::map<int, std::map<std::string, long long>> votes;
  for (size_t i = 0; i < assignment.size(); ++i) {
    if (truth[i].empty())
      throw IntegrityError("node " + std::to_string(i) + " has no ground-truth label");
    ++votes[assignment[i]][truth[i]];
  }
  ClusterFloorMapping mapping;
  for (auto& [cluster, counts] : votes) {
    // std::map iterates labels lexicographically, so first max wins ties
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
      if (it->second > best->second) best = it;
    mapping[cluster] = best->first;
  }
  return mapping;
}

double mapped_accuracy(const std::vector<int>& assignment, const ClusterFloorMapping& mapping,
                       const std::vector<std::string>& truth) {
  long long correct = 0;
  for (size_t i = 0; i < assignment.size(); ++i)
    correct += mapping.at(assignment[i]) == truth[i];
  return assignment.empty() ? 0.0 : double(correct) / double(assignment.size());
}

double weighted_f1(const std::vector<int>& assignment, const ClusterFloorMapping& mapping,
                   const std::vector<std::string>& truth) {
  std::vector<std::string> pred(assignment.size());
  for (size_t i = 0; i < assignment.size(); ++i) pred[i] = mapping.at(assignment[i]);
  return weighted_f1_impl(truth, pred);
}

double ari(const std::vector<int>& truth, const std::vector<int>& pred) {
  Contingency c(truth, pred);
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (auto& [key, v] : c.cells) index += comb2(double(v));
  for (auto& [l, v] : c.row_sums) sum_a += comb2(double(v));
  for (auto& [l, v] : c.col_sums) sum_b += comb2(double(v));
  double total = comb2(double(c.n));
  double expected = total > 0 ? sum_a * sum_b / total : 0.0;
  double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;  // both partitions degenerate
  return (index - expected) / (max_index - expected);
}

double nmi(const std::vector<int>& truth, const std::vector<int>& pred) {
  Contingency c(truth, pred);
  const double n = double(c.n);
  double mi = 0.0;
  for (auto& [key, v] : c.cells) {
    double pij = v / n;
    double pi = c.row_sums[key.first] / n;
    double pj = c.col_sums[key.second] / n;
    if (pij > 0) mi += pij * std::log(pij / (pi * pj));
  }
  auto entropy = [&](const std::unordered_map<int, long long>& sums) {
    double h = 0.0;
    for (auto& [l, v] : sums) {
      double p = v / n;
      if (p > 0) h -= p * std::log(p);
    }
    return h;
  };
  double denom = 0.5 * (entropy(c.row_sums) + entropy(c.col_sums));
  if (denom == 0.0) return 0.0;
  return mi / denom;
}

double purity(const std::vector<int>& truth, const std::vector<int>& pred) {
  Contingency c(truth, pred);
  std::unordered_map<int, long long> max_in_cluster;
  for (auto& [key, v] : c.cells) {
    auto& m = max_in_cluster[key.second];
    m = std::max(m, v);
  }
  long long total = 0;
  for (auto& [cl, v] : max_in_cluster) total += v;
  return c.n ? double(total) / double(c.n) : 0.0;
}

double ari(const std::vector<std::string>& truth, const std::vector<int>& pred) {
  return ari(dense_codes(truth), pred);
}
double nmi(const std::vector<std::string>& truth, const std::vector<int>& pred) {
  return nmi(dense_codes(truth), pred);
}
double purity(const std::vector<std::string>& truth, const std::vector<int>& pred) {
  return purity(dense_codes(truth), pred);
}

BootstrapCi bootstrap_ci(const std::vector<double>& values, int B, double level, uint64_t seed,
                         bool parallel) {
  if (values.empty()) throw ConfigError("bootstrap_ci: empty input");
  const size_t n = values.size();
  std::vector<double> stats(B);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int b = 0; b < B; ++b) {
    Rng rng(Rng::substream(seed, "bootstrap", uint64_t(b)));
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += values[rng.next_below(n)];
    stats[b] = s / double(n);
  }
  (void)parallel;
  BootstrapCi ci;
  double sum = 0.0;
  for (double s : stats) sum += s;
  ci.mean = sum / B;
  std::sort(stats.begin(), stats.end());
  double alpha = (1.0 - level) / 2.0;
  ci.lo = percentile(stats, alpha);
  ci.hi = percentile(stats, 1.0 - alpha);
  return ci;
}

double mcnemar(const std::vector<int>& correct_a, const std::vector<int>& correct_b) {
  if (correct_a.size() != correct_b.size()) throw ConfigError("mcnemar: length mismatch");
  long long b = 0, c = 0;
  for (size_t i = 0; i < correct_a.size(); ++i) {
    b += correct_a[i] && !correct_b[i];
    c += !correct_a[i] && correct_b[i];
  }
  long long nd = b + c;
  if (nd == 0) return 1.0;
  long long k = std::min(b, c);
  // exact two-sided binomial tail at p = 1/2
  double tail = 0.0;
  for (long long i = 0; i <= k; ++i) {
    double logp = std::lgamma(double(nd + 1)) - std::lgamma(double(i + 1)) -
                  std::lgamma(double(nd - i + 1)) - double(nd) * std::log(2.0);
    tail += std::exp(logp);
  }
  return std::min(1.0, 2.0 * tail);
}

std::vector<std::vector<long long>> confusion_matrix(const std::vector<int>& assignment,
                                                     const ClusterFloorMapping& mapping,
                                                     const std::vector<std::string>& truth,
                                                     std::vector<std::string>& label_order_out) {
  std::set<std::string> labels(truth.begin(), truth.end());
  label_order_out.assign(labels.begin(), labels.end());
  std::map<std::string, int> index;
  for (size_t i = 0; i < label_order_out.size(); ++i) index[label_order_out[i]] = int(i);
  std::vector<std::vector<long long>> m(label_order_out.size(),
                                        std::vector<long long>(label_order_out.size(), 0));
  for (size_t i = 0; i < assignment.size(); ++i)
    ++m[index.at(truth[i])][index.at(mapping.at(assignment[i]))];
  return m;
}

void write_confusion_csv(const std::vector<std::vector<long long>>& m,
                         const std::vector<std::string>& labels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  out << "true\\pred";
  for (const auto& l : labels) out << "," << l;
  out << "\n";
  for (size_t i = 0; i < m.size(); ++i) {
    out << labels[i];
    for (long long v : m[i]) out << "," << v;
    out << "\n";
  }
}

std::vector<int> trajectory_consistent_view(const std::vector<int>& assignment,
                                            const std::vector<Trajectory>& trajectories) {
  std::vector<int> out = assignment;
  for (const auto& t : trajectories) {
    std::map<int, int> counts;
    for (int id : t.fingerprint_ids) ++counts[assignment[id]];
    if (counts.empty()) continue;
    auto best = counts.begin();  // smallest cluster id wins ties
    for (auto it = counts.begin(); it != counts.end(); ++it)
      if (it->second > best->second) best = it;
    for (int id : t.fingerprint_ids) out[id] = best->first;
  }
  return out;
}

EvaluationReport evaluate(const std::vector<int>& assignment, const std::vector<std::string>& truth,
                          int bootstrap_B, double level, uint64_t seed) {
  EvaluationReport r;
  r.bootstrap_B = bootstrap_B;
  r.level = level;
  auto mapping = map_clusters(assignment, truth);
  r.accuracy = mapped_accuracy(assignment, mapping, truth);
  r.f1_weighted = weighted_f1(assignment, mapping, truth);
  auto truth_codes = dense_codes(truth);
  r.ari = ari(truth_codes, assignment);
  r.nmi = nmi(truth_codes, assignment);
  r.purity = purity(truth_codes, assignment);
  r.confusion = confusion_matrix(assignment, mapping, truth, r.label_order);

  std::vector<double> flags(assignment.size());
  std::vector<std::string> pred(assignment.size());
  for (size_t i = 0; i < assignment.size(); ++i) {
    pred[i] = mapping.at(assignment[i]);
    flags[i] = pred[i] == truth[i] ? 1.0 : 0.0;
  }
  r.ci_accuracy = bootstrap_ci(flags, bootstrap_B, level, Rng::substream(seed, "ci-acc"));

  // weighted F1 is not a per-sample mean, so resample (truth, pred) pairs
  {
    const size_t n = truth.size();
    std::vector<double> stats(bootstrap_B);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (int b = 0; b < bootstrap_B; ++b) {
      Rng rng(Rng::substream(seed, "ci-f1", uint64_t(b)));
      std::vector<std::string> t(n), p(n);
      for (size_t i = 0; i < n; ++i) {
        size_t j = rng.next_below(n);
        t[i] = truth[j];
        p[i] = pred[j];
      }
      stats[b] = weighted_f1_impl(t, p);
    }
    double sum = 0.0;
    for (double s : stats) sum += s;
    r.ci_f1.mean = sum / bootstrap_B;
    std::sort(stats.begin(), stats.end());
    double alpha = (1.0 - level) / 2.0;
    r.ci_f1.lo = percentile(stats, alpha);
    r.ci_f1.hi = percentile(stats, 1.0 - alpha);
  }
  return r;
}

std::string report_to_json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["accuracy"] = r.accuracy;
  j["f1_weighted"] = r.f1_weighted;
  j["ari"] = r.ari;
  j["nmi"] = r.nmi;
  j["purity"] = r.purity;
  j["ci_accuracy"] = {r.ci_accuracy.lo, r.ci_accuracy.hi};
  j["ci_f1"] = {r.ci_f1.lo, r.ci_f1.hi};
  j["bootstrap_B"] = r.bootstrap_B;
  j["level"] = r.level;
  j["labels"] = r.label_order;
  return j.dump(2);
}

void write_report_json(const EvaluationReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  out << report_to_json(r) << "\n";
}

}  // namespace floorsep
