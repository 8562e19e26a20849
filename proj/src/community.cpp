#include "floorsep/community.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "floorsep/rng.hpp"

namespace floorsep {
namespace {

// Working graph for the modularity optimizers; self-loops appear after
// aggregation and hold intra-community weight.
struct WGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
  std::vector<double> self_w;
  std::vector<double> degree;  // weighted, self-loop counted twice
  double m2 = 0.0;             // sum of degrees

  static WGraph from(const TrajectoryGraph& g) {
    WGraph w;
    w.n = g.n;
    w.adj.assign(g.n, {});
    w.self_w.assign(g.n, 0.0);
    for (const auto& e : g.edges) {
      w.adj[e.u].emplace_back(e.v, e.w);
      w.adj[e.v].emplace_back(e.u, e.w);
    }
    w.finish();
    return w;
  }

  void finish() {
    degree.assign(n, 0.0);
    for (int u = 0; u < n; ++u) {
      degree[u] = 2.0 * self_w[u];
      for (auto& [v, wt] : adj[u]) degree[u] += wt;
    }
    m2 = std::accumulate(degree.begin(), degree.end(), 0.0);
  }
};

void shuffle(std::vector<int>& order, Rng& rng) {
  for (size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.next_below(i)]);
}

// One pass of greedy local moves. node_comm is updated in place; returns
// whether anything moved.
bool local_move(const WGraph& g, std::vector<int>& node_comm, double resolution, Rng& rng) {
  std::vector<double> comm_tot(g.n, 0.0);
  for (int u = 0; u < g.n; ++u) comm_tot[node_comm[u]] += g.degree[u];

  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);

  std::unordered_map<int, double> w_to_comm;
  bool moved_any = false;
  bool moved_this_pass = true;
  while (moved_this_pass) {
    moved_this_pass = false;
    for (int u : order) {
      int old_c = node_comm[u];
      w_to_comm.clear();
      w_to_comm[old_c] = 0.0;
      for (auto& [v, wt] : g.adj[u])
        if (v != u) w_to_comm[node_comm[v]] += wt;

      comm_tot[old_c] -= g.degree[u];
      int best_c = old_c;
      double best_gain = w_to_comm[old_c] - resolution * g.degree[u] * comm_tot[old_c] / g.m2;
      for (auto& [c, w] : w_to_comm) {
        double gain = w - resolution * g.degree[u] * comm_tot[c] / g.m2;
        if (gain > best_gain + 1e-12 || (std::abs(gain - best_gain) <= 1e-12 && c < best_c)) {
          best_gain = gain;
          best_c = c;
        }
      }
      comm_tot[best_c] += g.degree[u];
      if (best_c != old_c) {
        node_comm[u] = best_c;
        moved_any = moved_this_pass = true;
      }
    }
  }
  return moved_any;
}

// Collapse communities into super-nodes. comm ids must be dense.
WGraph aggregate(const WGraph& g, const std::vector<int>& node_comm, int n_comms) {
  WGraph out;
  out.n = n_comms;
  out.adj.assign(n_comms, {});
  out.self_w.assign(n_comms, 0.0);
  std::map<std::pair<int, int>, double> acc;
  for (int u = 0; u < g.n; ++u) {
    out.self_w[node_comm[u]] += g.self_w[u];
    for (auto& [v, wt] : g.adj[u]) {
      if (v < u) continue;  // each undirected edge once
      int a = node_comm[u], b = node_comm[v];
      if (a == b)
        out.self_w[a] += wt;
      else
        acc[std::minmax(a, b)] += wt;
    }
  }
  for (auto& [key, wt] : acc) {
    out.adj[key.first].emplace_back(key.second, wt);
    out.adj[key.second].emplace_back(key.first, wt);
  }
  out.finish();
  return out;
}

std::vector<int> densify(std::vector<int> labels, int* count_out) {
  std::unordered_map<int, int> remap;
  for (int& l : labels) {
    auto [it, fresh] = remap.try_emplace(l, int(remap.size()));
    l = it->second;
  }
  if (count_out) *count_out = int(remap.size());
  return labels;
}

// Split every community into its connected components (never lowers Q).
std::vector<int> split_disconnected(const WGraph& g, const std::vector<int>& node_comm) {
  std::vector<int> out(g.n, -1);
  int next = 0;
  std::vector<int> stack;
  for (int s = 0; s < g.n; ++s) {
    if (out[s] != -1) continue;
    int c = next++;
    out[s] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto& [v, wt] : g.adj[u])
        if (out[v] == -1 && node_comm[v] == node_comm[u]) {
          out[v] = c;
          stack.push_back(v);
        }
    }
  }
  return out;
}

Partition modularity_loop(const TrajectoryGraph& tg, uint64_t seed, double resolution,
                          bool refine) {
  Partition p;
  p.labels.assign(tg.n, 0);
  std::iota(p.labels.begin(), p.labels.end(), 0);
  p.count = tg.n;
  if (tg.edges.empty()) return p;  // nothing to optimize; singletons

  WGraph g = WGraph::from(tg);
  // membership[i] = community of original node i at the current level
  std::vector<int> membership(tg.n);
  std::iota(membership.begin(), membership.end(), 0);

  Rng rng(Rng::substream(seed, refine ? "leiden" : "louvain"));
  for (int level = 0; level < 64; ++level) {
    std::vector<int> node_comm(g.n);
    std::iota(node_comm.begin(), node_comm.end(), 0);
    bool moved = local_move(g, node_comm, resolution, rng);

    std::vector<int> refined = refine ? split_disconnected(g, node_comm) : node_comm;
    int n_comms;
    refined = densify(std::move(refined), &n_comms);
    if (!moved && n_comms == g.n) break;

    for (int& m : membership) m = refined[m];
    if (n_comms == g.n) break;
    g = aggregate(g, refined, n_comms);
  }

  // final guarantee pass: communities must induce connected subgraphs
  if (refine) {
    WGraph orig = WGraph::from(tg);
    membership = split_disconnected(orig, membership);
  }
  p.labels = densify(std::move(membership), &p.count);
  return p;
}

}  // namespace

Partition make_dense(std::vector<int> labels) {
  Partition p;
  p.labels = densify(std::move(labels), &p.count);
  return p;
}

double modularity(const TrajectoryGraph& g, const Partition& part, double resolution) {
  if (g.edges.empty()) throw ConfigError("modularity: graph has no edges");
  double m = g.total_weight();
  std::vector<double> comm_deg(part.count, 0.0), comm_in(part.count, 0.0);
  for (int u = 0; u < g.n; ++u) comm_deg[part.labels[u]] += g.weighted_degree(u);
  for (const auto& e : g.edges)
    if (part.labels[e.u] == part.labels[e.v]) comm_in[part.labels[e.u]] += e.w;
  double q = 0.0;
  for (int c = 0; c < part.count; ++c) {
    double frac = comm_deg[c] / (2.0 * m);
    q += comm_in[c] / m - resolution * frac * frac;
  }
  return q;
}

Partition louvain(const TrajectoryGraph& g, uint64_t seed, double resolution) {
  return modularity_loop(g, seed, resolution, false);
}

Partition leiden(const TrajectoryGraph& g, uint64_t seed, double resolution) {
  return modularity_loop(g, seed, resolution, true);
}

Partition label_propagation(const TrajectoryGraph& g, uint64_t seed, int max_passes) {
  Partition p;
  p.labels.assign(g.n, 0);
  std::iota(p.labels.begin(), p.labels.end(), 0);
  Rng rng(Rng::substream(seed, "lpa"));
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::unordered_map<int, double> score;
  std::vector<int> best;
  for (int pass = 0; pass < max_passes; ++pass) {
    shuffle(order, rng);
    bool changed = false;
    for (int u : order) {
      if (g.adj[u].empty()) continue;
      score.clear();
      for (auto& [v, w] : g.adj[u]) score[p.labels[v]] += w;
      double mx = -1.0;
      for (auto& [l, s] : score) mx = std::max(mx, s);
      best.clear();
      for (auto& [l, s] : score)
        if (s == mx) best.push_back(l);
      std::sort(best.begin(), best.end());
      int pick = best[rng.next_below(best.size())];
      if (pick != p.labels[u]) {
        p.labels[u] = pick;
        changed = true;
      }
    }
    if (!changed) break;
  }
  p.labels = densify(std::move(p.labels), &p.count);
  return p;
}

Partition fast_greedy(const TrajectoryGraph& g, double resolution) {
  Partition p;
  p.labels.assign(g.n, 0);
  std::iota(p.labels.begin(), p.labels.end(), 0);
  p.count = g.n;
  if (g.edges.empty()) return p;

  const double m2 = 2.0 * g.total_weight();
  std::vector<double> a(g.n, 0.0);  // tot_c / 2m
  for (int u = 0; u < g.n; ++u) a[u] = g.weighted_degree(u) / m2;

  // e[c][d] = inter-community weight / 2m (both directions stored)
  std::vector<std::map<int, double>> e(g.n);
  for (const auto& edge : g.edges) {
    if (edge.u == edge.v) continue;
    e[edge.u][edge.v] += edge.w / m2;
    e[edge.v][edge.u] += edge.w / m2;
  }
  std::vector<char> alive(g.n, 1);

  while (true) {
    double best_dq = 0.0;
    int bc = -1, bd = -1;
    for (int c = 0; c < g.n; ++c) {
      if (!alive[c]) continue;
      for (auto& [d, w] : e[c]) {
        if (d <= c) continue;
        double dq = 2.0 * (w - resolution * a[c] * a[d]);
        if (dq > best_dq + 1e-15 ||
            (std::abs(dq - best_dq) <= 1e-15 && bc != -1 &&
             std::make_pair(c, d) < std::make_pair(bc, bd) && dq > 0.0)) {
          best_dq = dq;
          bc = c;
          bd = d;
        }
      }
    }
    if (bc < 0) break;

    // merge bd into bc
    for (auto& [x, w] : e[bd]) {
      if (x == bc) continue;
      e[x].erase(bd);
      e[x][bc] += w;
      e[bc][x] += w;
    }
    e[bc].erase(bd);
    e[bd].clear();
    a[bc] += a[bd];
    alive[bd] = 0;
    for (int& l : p.labels)
      if (l == bd) l = bc;
  }
  p.labels = densify(std::move(p.labels), &p.count);
  return p;
}

void write_partition_csv(const Partition& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  out << "node_id,community_id\n";
  for (size_t i = 0; i < p.labels.size(); ++i) out << i << "," << p.labels[i] << "\n";
}

Partition read_partition_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("missing file: " + path);
  std::string line;
  std::vector<int> labels;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("node_id", 0) == 0) continue;
    }
    int id, c;
    if (std::sscanf(line.c_str(), "%d,%d", &id, &c) != 2)
      throw FormatError(path + ": malformed line '" + line + "'");
    if (int(labels.size()) <= id) labels.resize(id + 1, -1);
    labels[id] = c;
  }
  Partition p;
  p.labels = std::move(labels);
  int mx = -1;
  for (int l : p.labels) {
    if (l < 0) throw FormatError(path + ": missing node id in partition");
    mx = std::max(mx, l);
  }
  p.count = mx + 1;
  return p;
}

}  // namespace floorsep
