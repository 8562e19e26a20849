#pragma once
#include <string>

#include "floorsep/types.hpp"

namespace floorsep {

struct SyntheticBuildingConfig {
  int floors = 5;
  double floor_width = 50.0;   // meters
  double floor_depth = 30.0;
  double floor_height = 3.0;
  int aps_per_floor = 8;
  double gamma = 3.0;             // path-loss exponent
  double p0 = -40.0;              // dBm at 1 m
  double floor_attenuation = 15;  // dB per floor crossed
  double noise_sigma = 2.0;       // dB
  double detect_threshold = -95;  // dBm; weaker readings are dropped
  int trajectories = 40;
  int steps_per_trajectory = 30;
  double step_length = 1.5;
  double elevator_prob = 0.2;  // one vertical transition per trajectory
  uint64_t seed = 0;
};

SyntheticBuildingConfig load_synth_config(const std::string& path);

// Noise-free log-distance RSSI at 3D distance d3 with floors_crossed slabs
// in between; the generator adds Gaussian noise on top of this.
double synth_rssi(double d3, int floors_crossed, const SyntheticBuildingConfig& cfg);

// Synthetic multistory dataset with ground truth, coordinates, and
// elevation pairs. Labels follow the "B0-F<floor>" convention.
RawDataset generate(const SyntheticBuildingConfig& cfg);

// Emit the dataset in each supported on-disk layout; both re-ingest to an
// equivalent dataset.
void write_huawei_format(const RawDataset& ds, const std::string& dir);
void write_uji_format(const RawDataset& ds, const std::string& path);

}  // namespace floorsep
