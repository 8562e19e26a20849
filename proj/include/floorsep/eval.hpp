#pragma once
#include <map>
#include <string>
#include <vector>

#include "floorsep/types.hpp"

namespace floorsep {

// cluster id -> floor label, by majority vote within each cluster.
using ClusterFloorMapping = std::map<int, std::string>;

struct BootstrapCi {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct EvaluationReport {
  double accuracy = 0.0;
  double f1_weighted = 0.0;
  double ari = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
  BootstrapCi ci_accuracy;
  BootstrapCi ci_f1;
  std::vector<std::string> label_order;             // lexicographic
  std::vector<std::vector<long long>> confusion;    // rows true, cols predicted
  int bootstrap_B = 1000;
  double level = 0.95;
};

ClusterFloorMapping map_clusters(const std::vector<int>& assignment,
                                 const std::vector<std::string>& truth);

double mapped_accuracy(const std::vector<int>& assignment, const ClusterFloorMapping& mapping,
                       const std::vector<std::string>& truth);

double weighted_f1(const std::vector<int>& assignment, const ClusterFloorMapping& mapping,
                   const std::vector<std::string>& truth);

// Pair-counting adjusted Rand index over two integer labelings.
double ari(const std::vector<int>& truth, const std::vector<int>& pred);
// NMI with arithmetic-mean normalization; 0/0 -> 0.
double nmi(const std::vector<int>& truth, const std::vector<int>& pred);
double purity(const std::vector<int>& truth, const std::vector<int>& pred);

// Convenience overloads taking string truth labels.
double ari(const std::vector<std::string>& truth, const std::vector<int>& pred);
double nmi(const std::vector<std::string>& truth, const std::vector<int>& pred);
double purity(const std::vector<std::string>& truth, const std::vector<int>& pred);

// Percentile bootstrap over the mean of `values` (0/1 flags or per-sample
// scores). parallel=false runs the serial reference.
BootstrapCi bootstrap_ci(const std::vector<double>& values, int B, double level, uint64_t seed,
                         bool parallel = true);

// Exact two-sided binomial McNemar test over paired correctness flags.
double mcnemar(const std::vector<int>& correct_a, const std::vector<int>& correct_b);

std::vector<std::vector<long long>> confusion_matrix(const std::vector<int>& assignment,
                                                     const ClusterFloorMapping& mapping,
                                                     const std::vector<std::string>& truth,
                                                     std::vector<std::string>& label_order_out);

void write_confusion_csv(const std::vector<std::vector<long long>>& m,
                         const std::vector<std::string>& labels, const std::string& path);

// Majority-vote smoothing within trajectories; opt-in view.
std::vector<int> trajectory_consistent_view(const std::vector<int>& assignment,
                                            const std::vector<Trajectory>& trajectories);

EvaluationReport evaluate(const std::vector<int>& assignment, const std::vector<std::string>& truth,
                          int bootstrap_B = 1000, double level = 0.95, uint64_t seed = 0);

std::string report_to_json(const EvaluationReport& r);
void write_report_json(const EvaluationReport& r, const std::string& path);

std::vector<int> dense_codes(const std::vector<std::string>& labels);

}  // namespace floorsep
