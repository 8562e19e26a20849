#include "floorsep/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace floorsep {
namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("missing mandatory file: " + path);
  return in;
}

// Two- or three-column numeric CSV, header line optional.
std::vector<std::vector<std::string>> read_csv_rows(const std::string& path, size_t ncols) {
  auto in = open_or_throw(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (first) {
      first = false;
      if (!is_number(fields[0])) continue;  // header
    }
    if (fields.size() != ncols)
      throw FormatError(path + ": line " + std::to_string(lineno) + ": expected " +
                        std::to_string(ncols) + " columns, got " + std::to_string(fields.size()));
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

DatasetSummary dataset_summary(const RawDataset& ds) {
  DatasetSummary s;
  s.fingerprints = ds.fingerprints.size();
  s.trajectories = ds.trajectories.size();
  s.aps = ds.ap_names.size();
  if (ds.has_ground_truth) {
    std::set<std::string> labels(ds.ground_truth.begin(), ds.ground_truth.end());
    labels.erase("");
    s.labels = labels.size();
  }
  s.step_pairs = ds.step_pairs.size();
  s.elevation_pairs = ds.elevation_pairs.size();
  s.distance_records = ds.provided_distances.size();
  return s;
}

RawDataset parse_huawei(const std::string& dir) {
  RawDataset ds;
  nlohmann::json fj;
  {
    auto in = open_or_throw(dir + "/fingerprints.json");
    in >> fj;
  }
  if (!fj.is_object()) throw FormatError(dir + "/fingerprints.json: expected an object keyed by id");

  // Dense ids in numeric key order; remap every file reference through this.
  std::map<long long, const nlohmann::json*> by_key;
  for (auto it = fj.begin(); it != fj.end(); ++it) {
    long long key;
    try {
      key = std::stoll(it.key());
    } catch (...) {
      throw FormatError("fingerprints.json: non-integer id key '" + it.key() + "'");
    }
    by_key[key] = &it.value();
  }
  std::unordered_map<long long, int> id_map;
  std::unordered_map<std::string, int> ap_map;
  for (auto& [key, val] : by_key) {
    Fingerprint fp;
    fp.id = int(ds.fingerprints.size());
    id_map[key] = fp.id;
    for (auto it = val->begin(); it != val->end(); ++it) {
      auto [pos, inserted] = ap_map.try_emplace(it.key(), int(ds.ap_names.size()));
      if (inserted) ds.ap_names.push_back(it.key());
      fp.rssi.emplace_back(pos->second, it.value().get<int>());
    }
    std::sort(fp.rssi.begin(), fp.rssi.end());
    ds.fingerprints.push_back(std::move(fp));
  }

  auto resolve = [&](const std::string& field, const std::string& file, size_t row) {
    long long key;
    try {
      key = std::stoll(field);
    } catch (...) {
      throw FormatError(file + ": row " + std::to_string(row) + ": bad id '" + field + "'");
    }
    auto it = id_map.find(key);
    if (it == id_map.end())
      throw IntegrityError(file + ": row " + std::to_string(row) + ": dangling id " + field);
    return it->second;
  };

  for (size_t i = 0; auto& row : read_csv_rows(dir + "/steps.csv", 2)) {
    ds.step_pairs.emplace_back(resolve(row[0], "steps.csv", i), resolve(row[1], "steps.csv", i));
    ++i;
  }
  for (size_t i = 0; auto& row : read_csv_rows(dir + "/elevations.csv", 2)) {
    ds.elevation_pairs.emplace_back(resolve(row[0], "elevations.csv", i),
                                    resolve(row[1], "elevations.csv", i));
    ++i;
  }
  for (size_t i = 0; auto& row : read_csv_rows(dir + "/estimated_wifi_distances.csv", 3)) {
    DistanceRecord r;
    r.a = resolve(row[0], "estimated_wifi_distances.csv", i);
    r.b = resolve(row[1], "estimated_wifi_distances.csv", i);
    r.meters = std::stod(row[2]);
    ds.provided_distances.push_back(r);
    ++i;
  }
  ds.has_provided_distances = true;

  {
    std::ifstream gt(dir + "/GT.json");
    if (gt) {
      nlohmann::json gj;
      gt >> gj;
      ds.ground_truth.assign(ds.fingerprints.size(), "");
      for (auto it = gj.begin(); it != gj.end(); ++it) {
        long long key = std::stoll(it.key());
        auto found = id_map.find(key);
        if (found == id_map.end()) throw IntegrityError("GT.json: dangling id " + it.key());
        ds.ground_truth[found->second] =
            it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
      }
      for (size_t i = 0; i < ds.ground_truth.size(); ++i)
        if (ds.ground_truth[i].empty())
          throw IntegrityError("GT.json: no label for fingerprint id " + std::to_string(i));
      ds.has_ground_truth = true;
    }
  }

  // Trajectories from step-edge chains. Branching is an integrity error.
  size_t n = ds.fingerprints.size();
  std::vector<std::vector<int>> nbr(n);
  for (auto& [a, b] : ds.step_pairs) {
    nbr[a].push_back(b);
    nbr[b].push_back(a);
  }
  for (size_t i = 0; i < n; ++i)
    if (nbr[i].size() > 2)
      throw IntegrityError("steps.csv: node " + std::to_string(i) + " has " +
                           std::to_string(nbr[i].size()) + " step neighbors; chains expected");
  std::vector<char> seen(n, 0);
  auto walk_chain = [&](int start) {
    Trajectory t;
    t.id = int(ds.trajectories.size());
    int prev = -1, cur = start;
    while (cur != -1) {
      seen[cur] = 1;
      t.fingerprint_ids.push_back(cur);
      int next = -1;
      for (int v : nbr[cur])
        if (v != prev && !seen[v]) next = v;
      prev = cur;
      cur = next;
    }
    for (size_t pos = 0; pos < t.fingerprint_ids.size(); ++pos) {
      auto& fp = ds.fingerprints[t.fingerprint_ids[pos]];
      fp.trajectory_id = t.id;
      fp.timestamp = double(pos);  // no timestamps in this layout; positional
    }
    ds.trajectories.push_back(std::move(t));
  };
  for (size_t i = 0; i < n; ++i)
    if (!seen[i] && nbr[i].size() <= 1) walk_chain(int(i));
  for (size_t i = 0; i < n; ++i)
    if (!seen[i]) walk_chain(int(i));  // cycles, if any, become one chain

  return ds;
}

RawDataset parse_uji(const std::string& csv_path, double delta_t) {
  auto in = open_or_throw(csv_path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(csv_path + ": empty file");
  auto header = split_csv(strip_cr(line));

  std::vector<int> wap_cols;
  int c_lon = -1, c_lat = -1, c_floor = -1, c_bld = -1, c_user = -1, c_phone = -1, c_time = -1;
  for (int i = 0; i < int(header.size()); ++i) {
    const auto& h = header[i];
    if (h.rfind("WAP", 0) == 0)
      wap_cols.push_back(i);
    else if (h == "LONGITUDE")
      c_lon = i;
    else if (h == "LATITUDE")
      c_lat = i;
    else if (h == "FLOOR")
      c_floor = i;
    else if (h == "BUILDINGID")
      c_bld = i;
    else if (h == "USERID")
      c_user = i;
    else if (h == "PHONEID")
      c_phone = i;
    else if (h == "TIMESTAMP")
      c_time = i;
  }
  if (wap_cols.size() != 520)
    throw FormatError(csv_path + ": expected 520 WAP columns, found " +
                      std::to_string(wap_cols.size()));
  if (c_lon < 0 || c_lat < 0 || c_floor < 0 || c_bld < 0 || c_user < 0 || c_phone < 0 ||
      c_time < 0)
    throw FormatError(csv_path + ": missing required column");

  struct Row {
    std::vector<std::pair<int, int>> rssi;
    double lon, lat, timestamp;
    int floor, building, user, phone;
    size_t file_pos;
  };
  std::vector<Row> rows;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != header.size())
      throw FormatError(csv_path + ": line " + std::to_string(lineno) + ": expected " +
                        std::to_string(header.size()) + " columns, got " +
                        std::to_string(f.size()));
    Row r;
    try {
      for (int wi = 0; wi < int(wap_cols.size()); ++wi) {
        int v = std::stoi(f[wap_cols[wi]]);
        if (v != 100) r.rssi.emplace_back(wi, v);  // 100 = AP not detected
      }
      r.lon = std::stod(f[c_lon]);
      r.lat = std::stod(f[c_lat]);
      r.floor = std::stoi(f[c_floor]);
      r.building = std::stoi(f[c_bld]);
      r.user = std::stoi(f[c_user]);
      r.phone = std::stoi(f[c_phone]);
      r.timestamp = std::stod(f[c_time]);
    } catch (const std::exception&) {
      throw FormatError(csv_path + ": line " + std::to_string(lineno) + ": malformed row");
    }
    if (r.rssi.empty()) continue;  // nothing to embed
    r.file_pos = lineno;
    rows.push_back(std::move(r));
  }

  // Group by (user, phone); sort by timestamp, file position breaking ties.
  std::map<std::pair<int, int>, std::vector<size_t>> groups;
  for (size_t i = 0; i < rows.size(); ++i) groups[{rows[i].user, rows[i].phone}].push_back(i);
  for (auto& [key, idx] : groups)
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      if (rows[a].timestamp != rows[b].timestamp) return rows[a].timestamp < rows[b].timestamp;
      return rows[a].file_pos < rows[b].file_pos;
    });

  RawDataset ds;
  ds.ap_names.resize(520);
  for (int i = 0; i < 520; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "WAP%03d", i + 1);
    ds.ap_names[i] = buf;
  }
  ds.has_ground_truth = true;
  ds.has_coordinates = true;

  auto emit = [&](const Row& r, int traj_id) {
    Fingerprint fp;
    fp.id = int(ds.fingerprints.size());
    fp.trajectory_id = traj_id;
    fp.timestamp = r.timestamp;
    fp.rssi = r.rssi;
    ds.ground_truth.push_back("B" + std::to_string(r.building) + "-F" + std::to_string(r.floor));
    ds.coordinates.emplace_back(r.lon, r.lat);
    ds.trajectories[traj_id].fingerprint_ids.push_back(fp.id);
    ds.fingerprints.push_back(std::move(fp));
  };

  for (auto& [key, idx] : groups) {
    const Row* prev = nullptr;
    int traj = -1;
    for (size_t i : idx) {
      const Row& r = rows[i];
      bool fresh = prev == nullptr || r.timestamp - prev->timestamp > delta_t ||
                   r.floor != prev->floor || r.building != prev->building;
      if (fresh) {
        traj = int(ds.trajectories.size());
        ds.trajectories.push_back(Trajectory{traj, {}});
      }
      emit(r, traj);
      prev = &r;
    }
  }
  return ds;
}

}  // namespace floorsep
