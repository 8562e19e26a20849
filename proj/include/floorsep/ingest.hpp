#pragma once
#include <string>

#include "floorsep/types.hpp"

namespace floorsep {

// Huawei challenge layout: fingerprints.json, steps.csv, elevations.csv,
// estimated_wifi_distances.csv, optional GT.json. Trajectories are rebuilt
// from step-edge chains; a node with more than two step neighbors is an
// integrity error.
RawDataset parse_huawei(const std::string& dir);

// UJIIndoorLoc CSV (520 WAP columns). Rows are grouped by (USERID, PHONEID),
// sorted by timestamp; a new trajectory starts when the gap exceeds delta_t
// seconds or when BUILDINGID/FLOOR changes. RSSI sentinel 100 is removed;
// fingerprints left with no APs are dropped before segmentation.
RawDataset parse_uji(const std::string& csv_path, double delta_t = 600.0);

}  // namespace floorsep
