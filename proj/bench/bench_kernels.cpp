// Serial reference versus OpenMP kernels: energy scan and wavepacket propagation.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <CLI11.hpp>

#include "scatter1d/config.hpp"
#include "scatter1d/fdsolver.hpp"
#include "scatter1d/wavepacket.hpp"

using namespace scatter1d;

namespace {

/// Best of `repeats` wall-clock timings in seconds.
double best_of(int repeats, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* kernel, double serial, double parallel, int threads, bool identical) {
  std::printf("%-22s serial=%9.4f s  openmp=%9.4f s  threads=%d  speedup=%6.2f  identical=%s\n", kernel, serial,
              parallel, threads, serial / parallel, identical ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark serial and OpenMP kernels"};
  std::size_t points = 2000;
  int repeats = 3, threads = 0, nodes = 400;
  app.add_option("--points", points, "energies in the scan");
  app.add_option("--repeats", repeats, "timing repeats (best is reported)");
  app.add_option("--threads", threads, "OpenMP threads (0: runtime default; SCATTER1D_THREADS overrides)");
  app.add_option("--nodes", nodes, "wavepacket quadrature nodes");
  CLI11_PARSE(app, argc, argv);

  const int n_threads = resolve_threads(threads);
  if (n_threads > 0) omp_set_num_threads(n_threads);
  const int used = omp_get_max_threads();

  const auto v = jolanta_potential();
  const PhysicsConstants pc{};
  const auto grid = EnergyGrid::linspace(0.1, 2.0, points);
  FdOptions fo;
  fo.store_psi = false;

  std::vector<ScanPoint> s, p;
  const double ts = best_of(repeats, [&] { s = transmission_scan_serial(v, pc, grid, fo); });
  const double tp = best_of(repeats, [&] { p = transmission_scan(v, pc, grid, fo); });
  bool same = s.size() == p.size();
  for (std::size_t i = 0; same && i < s.size(); ++i) same = s[i].transmission == p[i].transmission && s[i].reflection == p[i].reflection;
  row("fd energy scan", ts, tp, used, same);

  const auto packet = gaussian_packet(3.0, 0.3, nodes);
  std::vector<ScatteringSolution> states_serial, states;
  const double ss = best_of(1, [&] {
    omp_set_num_threads(1);
    states_serial = packet_states(v, pc, packet);
    omp_set_num_threads(used);
  });
  const double sp = best_of(1, [&] { states = packet_states(v, pc, packet); });
  row("packet states", ss, sp, used, states_serial.size() == states.size());

  const auto x = uniform_grid(-300.0, 300.0, 6001);
  std::vector<cplx> a, b;
  const double ps = best_of(repeats, [&] {
    omp_set_num_threads(1);
    a = propagate(packet, states, 50.0, x);
    omp_set_num_threads(used);
  });
  const double pp = best_of(repeats, [&] { b = propagate(packet, states, 50.0, x); });
  row("propagate", ps, pp, used, a == b);
  return 0;
}
