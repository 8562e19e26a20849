#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace floorsep {

struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One timestamped Wi-Fi scan; a node of the trajectory graph.
struct Fingerprint {
  int id = -1;
  int trajectory_id = -1;
  double timestamp = 0.0;
  // (AP index, RSSI dBm), sorted by AP index. AP identifiers are interned
  // to dense ints at ingest; names live in RawDataset::ap_names.
  std::vector<std::pair<int, int>> rssi;
};

struct Trajectory {
  int id = -1;
  std::vector<int> fingerprint_ids;  // ordered by timestamp
};

struct DistanceRecord {
  int a = -1;
  int b = -1;
  double meters = 0.0;
};

struct RawDataset {
  std::vector<Fingerprint> fingerprints;   // index == Fingerprint::id
  std::vector<Trajectory> trajectories;    // index == Trajectory::id
  std::vector<std::pair<int, int>> step_pairs;
  std::vector<std::pair<int, int>> elevation_pairs;
  std::vector<DistanceRecord> provided_distances;
  bool has_provided_distances = false;
  std::vector<std::string> ground_truth;   // per id; empty string = unknown
  bool has_ground_truth = false;
  std::vector<std::pair<double, double>> coordinates;  // per id, meters
  bool has_coordinates = false;
  std::vector<std::string> ap_names;

  size_t size() const { return fingerprints.size(); }
};

struct DatasetSummary {
  size_t fingerprints = 0;
  size_t trajectories = 0;
  size_t aps = 0;
  size_t labels = 0;
  size_t step_pairs = 0;
  size_t elevation_pairs = 0;
  size_t distance_records = 0;
};

DatasetSummary dataset_summary(const RawDataset& ds);

}  // namespace floorsep
