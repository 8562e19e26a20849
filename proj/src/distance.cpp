#include "floorsep/distance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace floorsep {
namespace {

void check_id(const RawDataset& ds, int id, const char* what) {
  if (id < 0 || size_t(id) >= ds.size())
    throw IntegrityError(std::string(what) + ": id " + std::to_string(id) + " does not resolve");
}

int shared_ap_count(const Fingerprint& a, const Fingerprint& b) {
  int count = 0;
  size_t i = 0, j = 0;
  while (i < a.rssi.size() && j < b.rssi.size()) {
    if (a.rssi[i].first < b.rssi[j].first)
      ++i;
    else if (a.rssi[i].first > b.rssi[j].first)
      ++j;
    else
      ++count, ++i, ++j;
  }
  return count;
}

}  // namespace

std::vector<DistanceRecord> provided_distances(const RawDataset& ds) {
  if (!ds.has_provided_distances)
    throw ConfigError(
        "dataset carries no provided distances; use --distance-source geometric or signal");
  std::vector<DistanceRecord> out;
  out.reserve(ds.provided_distances.size());
  for (const auto& r : ds.provided_distances) {
    check_id(ds, r.a, "provided distance");
    check_id(ds, r.b, "provided distance");
    if (r.a == r.b)
      throw IntegrityError("provided distance: self pair id " + std::to_string(r.a));
    if (!(r.meters >= 0.0) || !std::isfinite(r.meters))
      throw IntegrityError("provided distance (" + std::to_string(r.a) + "," +
                           std::to_string(r.b) + "): invalid meters " + std::to_string(r.meters));
    out.push_back(r);
  }
  return out;
}

std::vector<DistanceRecord> geometric_distances(const RawDataset& ds,
                                                const std::vector<std::pair<int, int>>& pairs) {
  if (!ds.has_coordinates) throw ConfigError("dataset has no coordinates for geometric distances");
  std::vector<DistanceRecord> out;
  out.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    check_id(ds, a, "geometric distance");
    check_id(ds, b, "geometric distance");
    auto [xa, ya] = ds.coordinates[a];
    auto [xb, yb] = ds.coordinates[b];
    out.push_back({a, b, std::hypot(xa - xb, ya - yb)});
  }
  return out;
}

double signal_distance(const Fingerprint& a, const Fingerprint& b, const SignalModelConfig& cfg) {
  if (a.rssi.empty() || b.rssi.empty())
    throw ConfigError("signal_distance: empty rssi map (id " +
                      std::to_string(a.rssi.empty() ? a.id : b.id) + ")");
  double sum = 0.0;
  int shared = 0;
  size_t i = 0, j = 0;
  while (i < a.rssi.size() && j < b.rssi.size()) {
    if (a.rssi[i].first < b.rssi[j].first) {
      ++i;
    } else if (a.rssi[i].first > b.rssi[j].first) {
      ++j;
    } else {
      // per-AP range under the log-distance model
      double ra = std::pow(10.0, (cfg.p0 - a.rssi[i].second) / (10.0 * cfg.gamma));
      double rb = std::pow(10.0, (cfg.p0 - b.rssi[j].second) / (10.0 * cfg.gamma));
      sum += std::fabs(ra - rb);
      ++shared;
      ++i;
      ++j;
    }
  }
  if (shared == 0) return cfg.d_max;
  return std::min(sum / shared, cfg.d_max);
}

std::vector<std::pair<int, int>> candidate_pairs(const RawDataset& ds, const PairingPolicy& policy,
                                                 const SignalModelConfig& cfg, bool parallel) {
  std::set<std::pair<int, int>> pairs;
  for (const auto& t : ds.trajectories)
    for (size_t i = 0; i + 1 < t.fingerprint_ids.size(); ++i) {
      int a = t.fingerprint_ids[i], b = t.fingerprint_ids[i + 1];
      pairs.emplace(std::min(a, b), std::max(a, b));
    }

  const int n = int(ds.size());
  const int m = policy.knn_m;
  if (m > 0 && n > 1) {
    std::vector<std::vector<int>> knn(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
#endif
    for (int i = 0; i < n; ++i) {
      // rank by shared-AP count (desc), then heuristic distance (asc), then id
      std::vector<std::tuple<int, double, int>> cand;
      cand.reserve(n - 1);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        int shared = shared_ap_count(ds.fingerprints[i], ds.fingerprints[j]);
        double d = shared ? signal_distance(ds.fingerprints[i], ds.fingerprints[j], cfg)
                          : cfg.d_max;
        cand.emplace_back(-shared, d, j);
      }
      size_t keep = std::min<size_t>(m, cand.size());
      std::partial_sort(cand.begin(), cand.begin() + keep, cand.end());
      for (size_t r = 0; r < keep; ++r) knn[i].push_back(std::get<2>(cand[r]));
    }
    (void)parallel;
    for (int i = 0; i < n; ++i)
      for (int j : knn[i]) pairs.emplace(std::min(i, j), std::max(i, j));
  }
  return {pairs.begin(), pairs.end()};
}

std::vector<DistanceRecord> signal_distances(const RawDataset& ds,
                                             const std::vector<std::pair<int, int>>& pairs,
                                             const SignalModelConfig& cfg, bool parallel) {
  std::vector<DistanceRecord> out(pairs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (long long i = 0; i < (long long)pairs.size(); ++i) {
    auto [a, b] = pairs[i];
    out[i] = {a, b, signal_distance(ds.fingerprints[a], ds.fingerprints[b], cfg)};
  }
  (void)parallel;
  return out;
}

void write_distances_csv(const std::vector<DistanceRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  out << "id1,id2,distance\n";
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", r.a, r.b, r.meters);
    out << buf;
  }
}

std::vector<DistanceRecord> read_distances_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("missing file: " + path);
  std::vector<DistanceRecord> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("id1", 0) == 0) continue;
    }
    DistanceRecord r;
    if (std::sscanf(line.c_str(), "%d,%d,%lf", &r.a, &r.b, &r.meters) != 3)
      throw FormatError(path + ": malformed line '" + line + "'");
    out.push_back(r);
  }
  return out;
}

}  // namespace floorsep
