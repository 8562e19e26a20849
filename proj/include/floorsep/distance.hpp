#pragma once
#include <vector>

#include "floorsep/types.hpp"

namespace floorsep {

enum class DistanceSourceKind { Provided, Geometric, SignalHeuristic };

// Log-distance path-loss constants for the signal heuristic. A trained
// distance model can replace this whole provider behind DistanceProvider.
struct SignalModelConfig {
  double p0 = -40.0;    // dBm at 1 m
  double gamma = 3.0;   // path-loss exponent
  double d_max = 50.0;  // fallback / clamp, meters
};

struct PairingPolicy {
  int knn_m = 10;  // signal-space neighbors per fingerprint, besides step pairs
};

// Validated passthrough of the dataset's own distance file.
std::vector<DistanceRecord> provided_distances(const RawDataset& ds);

// Planar Euclidean distance from stored coordinates, for the listed pairs.
std::vector<DistanceRecord> geometric_distances(const RawDataset& ds,
                                                const std::vector<std::pair<int, int>>& pairs);

// Symmetric range-difference heuristic over shared APs; d_max when disjoint.
double signal_distance(const Fingerprint& a, const Fingerprint& b,
                       const SignalModelConfig& cfg = {});

// Intra-trajectory consecutive pairs plus per-node top-m signal neighbors,
// symmetric-deduplicated (a < b). parallel=false runs the serial reference.
std::vector<std::pair<int, int>> candidate_pairs(const RawDataset& ds, const PairingPolicy& policy,
                                                 const SignalModelConfig& cfg = {},
                                                 bool parallel = true);

std::vector<DistanceRecord> signal_distances(const RawDataset& ds,
                                             const std::vector<std::pair<int, int>>& pairs,
                                             const SignalModelConfig& cfg = {},
                                             bool parallel = true);

// Pluggable provider so a learned model can slot in without graph changes.
class DistanceProvider {
public:
  virtual ~DistanceProvider() = default;
  virtual std::vector<DistanceRecord> distances(const RawDataset& ds,
                                                const std::vector<std::pair<int, int>>& pairs) = 0;
};

class SignalHeuristicProvider final : public DistanceProvider {
public:
  explicit SignalHeuristicProvider(SignalModelConfig cfg = {}) : cfg_(cfg) {}
  std::vector<DistanceRecord> distances(const RawDataset& ds,
                                        const std::vector<std::pair<int, int>>& pairs) override {
    return signal_distances(ds, pairs, cfg_);
  }

private:
  SignalModelConfig cfg_;
};

void write_distances_csv(const std::vector<DistanceRecord>& records, const std::string& path);
std::vector<DistanceRecord> read_distances_csv(const std::string& path);

}  // namespace floorsep
