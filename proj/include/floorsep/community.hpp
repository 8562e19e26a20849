#pragma once
#include <string>
#include <vector>

#include "floorsep/graph.hpp"

namespace floorsep {

struct Partition {
  std::vector<int> labels;  // node id -> community id, dense 0..count-1
  int count = 0;
};

Partition make_dense(std::vector<int> labels);

// Weighted Newman modularity, resolution 1.0.
double modularity(const TrajectoryGraph& g, const Partition& part, double resolution = 1.0);

Partition louvain(const TrajectoryGraph& g, uint64_t seed, double resolution = 1.0);

// Louvain plus a refinement phase; every returned community induces a
// connected subgraph.
Partition leiden(const TrajectoryGraph& g, uint64_t seed, double resolution = 1.0);

Partition label_propagation(const TrajectoryGraph& g, uint64_t seed, int max_passes = 100);

// CNM-style greedy agglomeration; deterministic.
Partition fast_greedy(const TrajectoryGraph& g, double resolution = 1.0);

void write_partition_csv(const Partition& p, const std::string& path);
Partition read_partition_csv(const std::string& path);

}  // namespace floorsep
