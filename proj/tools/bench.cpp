// Serial vs OpenMP timing for the data-parallel kernels.
#include <chrono>
#include <cstdio>

#include "floorsep/cluster.hpp"
#include "floorsep/distance.hpp"
#include "floorsep/embed.hpp"
#include "floorsep/eval.hpp"
#include "floorsep/graph.hpp"
#include "floorsep/rng.hpp"
#include "floorsep/synth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace floorsep;
using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f) {
  auto t0 = Clock::now();
  f();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; both columns run serial code\n");
#endif

  SyntheticBuildingConfig scfg;
  scfg.floors = 5;
  scfg.trajectories = 60;
  scfg.steps_per_trajectory = 40;
  scfg.seed = 7;
  auto ds = generate(scfg);
  std::printf("dataset: %zu fingerprints\n\n", ds.size());
  std::printf("%-24s %10s %10s %8s\n", "kernel", "serial ms", "omp ms", "speedup");

  auto report = [](const char* name, double ser, double par) {
    std::printf("%-24s %10.1f %10.1f %8.2fx\n", name, ser, par, ser / par);
  };

  PairingPolicy pol;
  std::vector<std::pair<int, int>> pairs_s, pairs_p;
  double t_ser = time_ms([&] { pairs_s = candidate_pairs(ds, pol, {}, false); });
  double t_par = time_ms([&] { pairs_p = candidate_pairs(ds, pol, {}, true); });
  report("candidate_pairs (knn)", t_ser, t_par);
  if (pairs_s != pairs_p) std::printf("  MISMATCH!\n");

  std::vector<DistanceRecord> dist_s, dist_p;
  t_ser = time_ms([&] { dist_s = signal_distances(ds, pairs_s, {}, false); });
  t_par = time_ms([&] { dist_p = signal_distances(ds, pairs_s, {}, true); });
  report("signal_distances", t_ser, t_par);

  auto g = ensure_connected(build_graph(ds, dist_s), ds);
  WalkConfig wcfg;
  wcfg.seed = 1;
  std::vector<std::vector<int>> walks_s, walks_p;
  t_ser = time_ms([&] { walks_s = generate_walks(g, wcfg, false); });
  t_par = time_ms([&] { walks_p = generate_walks(g, wcfg, true); });
  report("generate_walks", t_ser, t_par);
  if (walks_s != walks_p) std::printf("  MISMATCH!\n");

  SgnsConfig sg;
  sg.epochs = 1;
  sg.seed = 1;
  EmbeddingMatrix emb;
  double t_det = time_ms([&] { emb = train_sgns(walks_s, g.n, sg); });
  sg.parallel = true;
  double t_hog = time_ms([&] { (void)train_sgns(walks_s, g.n, sg); });
  report("train_sgns (hogwild)", t_det, t_hog);

  ChSweep sweep_s, sweep_p;
  t_ser = time_ms([&] { sweep_s = auto_k(emb, 3, 12, 1, {}, false); });
  t_par = time_ms([&] { sweep_p = auto_k(emb, 3, 12, 1, {}, true); });
  report("auto_k sweep", t_ser, t_par);
  if (sweep_s.k_opt != sweep_p.k_opt) std::printf("  MISMATCH!\n");

  std::vector<double> flags(ds.size());
  Rng rng(3);
  for (auto& f : flags) f = rng.next_double() < 0.7 ? 1.0 : 0.0;
  BootstrapCi ci_s, ci_p;
  t_ser = time_ms([&] { ci_s = bootstrap_ci(flags, 2000, 0.95, 5, false); });
  t_par = time_ms([&] { ci_p = bootstrap_ci(flags, 2000, 0.95, 5, true); });
  report("bootstrap_ci", t_ser, t_par);
  if (ci_s.lo != ci_p.lo || ci_s.hi != ci_p.hi) std::printf("  MISMATCH!\n");

  return 0;
}
