#include "floorsep/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace floorsep {

const char* edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Step: return "step";
    case EdgeKind::Distance: return "distance";
    case EdgeKind::Elevation: return "elevation";
    case EdgeKind::Synthetic: return "synthetic";
  }
  return "?";
}

EdgeKind edge_kind_from_name(const std::string& s) {
  if (s == "step") return EdgeKind::Step;
  if (s == "distance") return EdgeKind::Distance;
  if (s == "elevation") return EdgeKind::Elevation;
  if (s == "synthetic") return EdgeKind::Synthetic;
  throw FormatError("unknown edge kind '" + s + "'");
}

void TrajectoryGraph::rebuild_adjacency() {
  adj.assign(n, {});
  for (const auto& e : edges) {
    adj[e.u].emplace_back(e.v, e.w);
    adj[e.v].emplace_back(e.u, e.w);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
}

bool TrajectoryGraph::has_edge(int u, int v) const {
  const auto& a = adj[u];
  auto it = std::lower_bound(a.begin(), a.end(), std::make_pair(v, -1.0));
  return it != a.end() && it->first == v;
}

double TrajectoryGraph::weighted_degree(int u) const {
  double s = 0.0;
  for (auto& [v, w] : adj[u]) s += w;
  return s;
}

double TrajectoryGraph::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.w;
  return s;
}

std::vector<int> TrajectoryGraph::component_labels() const {
  std::vector<int> comp(n, -1);
  int c = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    stack.push_back(s);
    comp[s] = c;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto& [v, w] : adj[u])
        if (comp[v] == -1) {
          comp[v] = c;
          stack.push_back(v);
        }
    }
    ++c;
  }
  return comp;
}

double distance_to_weight(double meters, double sigma) {
  if (!std::isfinite(meters) || !std::isfinite(sigma) || meters < 0.0 || sigma <= 0.0)
    throw ConfigError("distance_to_weight: need finite meters >= 0 and sigma > 0");
  return std::exp(-meters / sigma);
}

TrajectoryGraph build_graph(const RawDataset& ds, const std::vector<DistanceRecord>& dists,
                            const GraphConfig& cfg) {
  TrajectoryGraph g;
  g.n = int(ds.size());

  double sigma = cfg.sigma;
  if (sigma <= 0.0) {
    std::vector<double> meters;
    meters.reserve(dists.size());
    for (const auto& r : dists) meters.push_back(r.meters);
    if (!meters.empty()) {
      size_t mid = meters.size() / 2;
      std::nth_element(meters.begin(), meters.begin() + mid, meters.end());
      sigma = meters[mid];
    }
    if (sigma <= 0.0) sigma = 1.0;
  }

  std::map<std::pair<int, int>, double> dist_by_pair;
  for (const auto& r : dists) {
    if (r.a < 0 || r.a >= g.n || r.b < 0 || r.b >= g.n)
      throw IntegrityError("distance record references unknown id");
    auto key = std::minmax(r.a, r.b);
    auto [it, fresh] = dist_by_pair.try_emplace({key.first, key.second}, r.meters);
    if (!fresh) it->second = std::min(it->second, r.meters);
  }

  std::set<std::pair<int, int>> blocked;  // elevation pairs under ExcludeAndSplit
  if (cfg.elevation_policy == ElevationPolicy::ExcludeAndSplit)
    for (auto [a, b] : ds.elevation_pairs) blocked.insert(std::minmax(a, b));

  // max weight wins on duplicates; Step kind outranks Distance
  std::map<std::pair<int, int>, std::pair<double, EdgeKind>> acc;
  auto add = [&](int u, int v, double w, EdgeKind kind) {
    if (u == v) return;
    auto key = std::minmax(u, v);
    if (blocked.count(key)) return;
    auto [it, fresh] = acc.try_emplace(key, std::make_pair(w, kind));
    if (!fresh) {
      it->second.first = std::max(it->second.first, w);
      if (kind == EdgeKind::Step || it->second.second == EdgeKind::Step)
        it->second.second = EdgeKind::Step;
    }
  };

  for (const auto& t : ds.trajectories)
    for (size_t i = 0; i + 1 < t.fingerprint_ids.size(); ++i) {
      int a = t.fingerprint_ids[i], b = t.fingerprint_ids[i + 1];
      auto key = std::minmax(a, b);
      auto it = dist_by_pair.find({key.first, key.second});
      double w = it != dist_by_pair.end() ? distance_to_weight(it->second, sigma)
                                          : cfg.step_default_weight;
      add(a, b, w, EdgeKind::Step);
    }

  for (const auto& [key, meters] : dist_by_pair)
    add(key.first, key.second, distance_to_weight(meters, sigma), EdgeKind::Distance);

  if (cfg.elevation_policy == ElevationPolicy::Include)
    for (auto [a, b] : ds.elevation_pairs) {
      auto key = std::minmax(a, b);
      acc[{key.first, key.second}] = {cfg.elevation_weight, EdgeKind::Elevation};
    }

  for (const auto& [key, wk] : acc)
    g.edges.push_back({key.first, key.second, wk.first, wk.second});
  g.rebuild_adjacency();
  return g;
}

TrajectoryGraph ensure_connected(TrajectoryGraph g, const RawDataset& ds, const GraphConfig& cfg,
                                 bool parallel) {
  if (g.n == 0) return g;
  while (true) {
    auto comp = g.component_labels();
    int c = *std::max_element(comp.begin(), comp.end()) + 1;
    if (c <= 1) break;

    std::vector<std::vector<int>> members(c);
    for (int i = 0; i < g.n; ++i) members[comp[i]].push_back(i);
    // two largest components; smaller first-member id breaks size ties
    std::vector<int> order(c);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (members[a].size() != members[b].size()) return members[a].size() > members[b].size();
      return members[a][0] < members[b][0];
    });
    const auto& A = members[order[0]];
    const auto& B = members[order[1]];

    struct Best {
      double d = std::numeric_limits<double>::infinity();
      int a = -1, b = -1;
      bool better_than(const Best& o) const {
        if (d != o.d) return d < o.d;
        if (a != o.a) return a < o.a;
        return b < o.b;
      }
    };
    std::vector<Best> local(std::max<size_t>(1, A.size()));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
#endif
    for (long long i = 0; i < (long long)A.size(); ++i) {
      Best best;
      for (int b : B) {
        Best cand{signal_distance(ds.fingerprints[A[i]], ds.fingerprints[b], cfg.signal),
                  std::min(A[i], b), std::max(A[i], b)};
        if (cand.better_than(best)) best = cand;
      }
      local[i] = best;
    }
    (void)parallel;
    Best best;
    for (const auto& cand : local)
      if (cand.better_than(best)) best = cand;

    g.edges.push_back({best.a, best.b, cfg.synthetic_weight, EdgeKind::Synthetic});
    g.adj[best.a].emplace_back(best.b, cfg.synthetic_weight);
    g.adj[best.b].emplace_back(best.a, cfg.synthetic_weight);
    std::sort(g.adj[best.a].begin(), g.adj[best.a].end());
    std::sort(g.adj[best.b].begin(), g.adj[best.b].end());
  }
  return g;
}

GraphStats graph_stats(const TrajectoryGraph& g) {
  GraphStats s;
  s.n = g.n;
  s.m = g.edges.size();
  s.components = g.n ? g.component_count() : 0;
  if (!g.edges.empty()) {
    s.min_weight = s.max_weight = g.edges[0].w;
    for (const auto& e : g.edges) {
      s.min_weight = std::min(s.min_weight, e.w);
      s.max_weight = std::max(s.max_weight, e.w);
    }
    for (const auto& e : g.edges) {
      ++s.kind_counts[size_t(e.kind)];
      int bin = s.max_weight > 0 ? int(e.w / s.max_weight * 10) : 0;
      ++s.weight_histogram[std::min(bin, 9)];
    }
  }
  return s;
}

void write_edge_list(const TrajectoryGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  auto edges = g.edges;
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  out << "# n " << g.n << "\n";
  char buf[96];
  for (const auto& e : edges) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g %s\n", e.u, e.v, e.w, edge_kind_name(e.kind));
    out << buf;
  }
}

TrajectoryGraph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("missing file: " + path);
  TrajectoryGraph g;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::sscanf(line.c_str(), "# n %d", &g.n);
      continue;
    }
    int u, v;
    double w;
    char kind[32];
    if (std::sscanf(line.c_str(), "%d %d %lf %31s", &u, &v, &w, kind) != 4)
      throw FormatError(path + ": malformed line '" + line + "'");
    g.edges.push_back({u, v, w, edge_kind_from_name(kind)});
    g.n = std::max(g.n, std::max(u, v) + 1);
  }
  g.rebuild_adjacency();
  return g;
}

}  // namespace floorsep
