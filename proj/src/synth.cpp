#include "floorsep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "floorsep/rng.hpp"
#include "json.hpp"

namespace floorsep {
namespace {

void validate(const SyntheticBuildingConfig& c) {
  if (c.floors < 2 || c.aps_per_floor < 1 || c.trajectories < 1 || c.steps_per_trajectory < 1 ||
      c.floor_width <= 0 || c.floor_depth <= 0 || c.floor_height <= 0 || c.step_length <= 0 ||
      c.elevator_prob < 0 || c.elevator_prob > 1)
    throw ConfigError("invalid synthetic building config");
}

int parse_floor_label(const std::string& label) {
  auto pos = label.find("-F");
  if (pos == std::string::npos) throw FormatError("label '" + label + "' is not B<b>-F<f>");
  return std::stoi(label.substr(pos + 2));
}

}  // namespace

double synth_rssi(double d3, int floors_crossed, const SyntheticBuildingConfig& cfg) {
  d3 = std::max(d3, 1.0);  // reference distance
  return cfg.p0 - 10.0 * cfg.gamma * std::log10(d3) - cfg.floor_attenuation * floors_crossed;
}

SyntheticBuildingConfig load_synth_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("missing config file: " + path);
  nlohmann::json j;
  in >> j;
  SyntheticBuildingConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  get("floors", c.floors);
  get("floor_width", c.floor_width);
  get("floor_depth", c.floor_depth);
  get("floor_height", c.floor_height);
  get("aps_per_floor", c.aps_per_floor);
  get("gamma", c.gamma);
  get("p0", c.p0);
  get("floor_attenuation", c.floor_attenuation);
  get("noise_sigma", c.noise_sigma);
  get("detect_threshold", c.detect_threshold);
  get("trajectories", c.trajectories);
  get("steps_per_trajectory", c.steps_per_trajectory);
  get("step_length", c.step_length);
  get("elevator_prob", c.elevator_prob);
  get("seed", c.seed);
  return c;
}

RawDataset generate(const SyntheticBuildingConfig& cfg) {
  validate(cfg);
  Rng rng(Rng::substream(cfg.seed, "synth"));

  struct Ap {
    double x, y;
    int floor;
  };
  std::vector<Ap> aps;
  RawDataset ds;
  for (int f = 0; f < cfg.floors; ++f)
    for (int i = 0; i < cfg.aps_per_floor; ++i) {
      aps.push_back({rng.uniform(0, cfg.floor_width), rng.uniform(0, cfg.floor_depth), f});
      ds.ap_names.push_back("AP" + std::to_string(aps.size() - 1));
    }

  ds.has_ground_truth = true;
  ds.has_coordinates = true;

  auto emit_fp = [&](double x, double y, int floor, int traj_id, double timestamp) {
    Fingerprint fp;
    fp.id = int(ds.fingerprints.size());
    fp.trajectory_id = traj_id;
    fp.timestamp = timestamp;
    int strongest_ap = -1;
    double strongest = -1e9;
    for (size_t a = 0; a < aps.size(); ++a) {
      double dz = cfg.floor_height * std::abs(aps[a].floor - floor);
      double d3 = std::sqrt((x - aps[a].x) * (x - aps[a].x) + (y - aps[a].y) * (y - aps[a].y) +
                            dz * dz);
      double v = synth_rssi(d3, std::abs(aps[a].floor - floor), cfg);
      if (cfg.noise_sigma > 0) v += rng.normal(0.0, cfg.noise_sigma);
      v = std::max(v, -100.0);
      if (v > strongest) {
        strongest = v;
        strongest_ap = int(a);
      }
      if (v >= cfg.detect_threshold) fp.rssi.emplace_back(int(a), int(std::lround(v)));
    }
    if (fp.rssi.empty())  // keep the nearest AP so no fingerprint is blind
      fp.rssi.emplace_back(strongest_ap, int(std::lround(strongest)));
    ds.ground_truth.push_back("B0-F" + std::to_string(floor));
    ds.coordinates.emplace_back(x, y);
    int id = fp.id;
    ds.trajectories[traj_id].fingerprint_ids.push_back(id);
    ds.fingerprints.push_back(std::move(fp));
    return id;
  };

  double clock = 0.0;
  for (int t = 0; t < cfg.trajectories; ++t) {
    int floor = int(rng.next_below(cfg.floors));
    int transition_at = -1, next_floor = floor;
    if (rng.next_double() < cfg.elevator_prob && cfg.steps_per_trajectory >= 2) {
      transition_at = 1 + int(rng.next_below(cfg.steps_per_trajectory - 1));
      if (floor == 0)
        next_floor = 1;
      else if (floor == cfg.floors - 1)
        next_floor = floor - 1;
      else
        next_floor = floor + (rng.next_double() < 0.5 ? -1 : 1);
    }

    double x = rng.uniform(0, cfg.floor_width), y = rng.uniform(0, cfg.floor_depth);
    int traj_id = int(ds.trajectories.size());
    ds.trajectories.push_back(Trajectory{traj_id, {}});
    clock += 100000.0;  // well past any segmentation threshold
    int prev_id = -1;
    for (int s = 0; s < cfg.steps_per_trajectory; ++s) {
      if (s == transition_at) {
        // vertical transition: new trajectory id per floor segment
        int new_traj = int(ds.trajectories.size());
        ds.trajectories.push_back(Trajectory{new_traj, {}});
        clock += 100000.0;
        int first_id = emit_fp(x, y, next_floor, new_traj, clock);
        ds.elevation_pairs.emplace_back(prev_id, first_id);
        traj_id = new_traj;
        floor = next_floor;
        prev_id = first_id;
        continue;
      }
      double angle = rng.uniform(0, 2.0 * 3.14159265358979323846);
      x = std::clamp(x + cfg.step_length * std::cos(angle), 0.0, cfg.floor_width);
      y = std::clamp(y + cfg.step_length * std::sin(angle), 0.0, cfg.floor_depth);
      clock += 1.0;
      prev_id = emit_fp(x, y, floor, traj_id, clock);
    }
  }
  return ds;
}

void write_huawei_format(const RawDataset& ds, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    nlohmann::ordered_json j;
    for (const auto& fp : ds.fingerprints) {
      nlohmann::ordered_json scan;
      for (auto& [ap, v] : fp.rssi) scan[ds.ap_names[ap]] = v;
      j[std::to_string(fp.id)] = std::move(scan);
    }
    std::ofstream out(dir + "/fingerprints.json");
    if (!out) throw IngestError("cannot write " + dir + "/fingerprints.json");
    out << j.dump(1) << "\n";
  }
  {
    std::ofstream out(dir + "/steps.csv");
    out << "id1,id2\n";
    for (const auto& t : ds.trajectories)
      for (size_t i = 0; i + 1 < t.fingerprint_ids.size(); ++i)
        out << t.fingerprint_ids[i] << "," << t.fingerprint_ids[i + 1] << "\n";
  }
  {
    std::ofstream out(dir + "/elevations.csv");
    out << "id1,id2\n";
    for (auto [a, b] : ds.elevation_pairs) out << a << "," << b << "\n";
  }
  {
    std::ofstream out(dir + "/estimated_wifi_distances.csv");
    out << "id1,id2,distance\n";
    if (ds.has_coordinates) {
      char buf[96];
      for (const auto& t : ds.trajectories)
        for (size_t i = 0; i + 1 < t.fingerprint_ids.size(); ++i) {
          int a = t.fingerprint_ids[i], b = t.fingerprint_ids[i + 1];
          double d = std::hypot(ds.coordinates[a].first - ds.coordinates[b].first,
                                ds.coordinates[a].second - ds.coordinates[b].second);
          std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", a, b, d);
          out << buf;
        }
    }
  }
  if (ds.has_ground_truth) {
    nlohmann::ordered_json j;
    for (const auto& fp : ds.fingerprints) j[std::to_string(fp.id)] = ds.ground_truth[fp.id];
    std::ofstream out(dir + "/GT.json");
    out << j.dump(1) << "\n";
  }
}

void write_uji_format(const RawDataset& ds, const std::string& path) {
  if (ds.ap_names.size() > 520)
    throw ConfigError("UJI layout holds at most 520 APs; dataset has " +
                      std::to_string(ds.ap_names.size()));
  if (!ds.has_ground_truth || !ds.has_coordinates)
    throw ConfigError("UJI layout needs ground truth and coordinates");
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  for (int i = 1; i <= 520; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "WAP%03d", i);
    out << buf << ",";
  }
  out << "LONGITUDE,LATITUDE,FLOOR,BUILDINGID,SPACEID,RELATIVEPOSITION,USERID,PHONEID,TIMESTAMP\n";

  char buf[64];
  for (const auto& t : ds.trajectories) {
    for (int id : t.fingerprint_ids) {
      const auto& fp = ds.fingerprints[id];
      std::vector<int> row(520, 100);
      for (auto& [ap, v] : fp.rssi) row[ap] = v;
      for (int v : row) out << v << ",";
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,", ds.coordinates[id].first,
                    ds.coordinates[id].second);
      out << buf << parse_floor_label(ds.ground_truth[id]) << ",0,0,1," << t.id << ",0,"
          << (long long)fp.timestamp << "\n";
    }
  }
}

}  // namespace floorsep
