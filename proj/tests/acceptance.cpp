// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
// --known-failures 5,... exits 0 when exactly the listed criteria fail, so a
// regression or an unexpected pass is still caught.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scatter1d/error.hpp"
#include "scatter1d/fdsolver.hpp"
#include "scatter1d/green.hpp"
#include "scatter1d/peaks.hpp"
#include "scatter1d/siegert.hpp"
#include "scatter1d/wavepacket.hpp"

using namespace scatter1d;

namespace {

const PhysicsConstants pc{};

struct Item {
  std::string what;
  double value;
  double tol;
  bool pass;
};

class Criterion {
 public:
  explicit Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  /// value <= tol
  void at_most(const std::string& what, double value, double tol) { items_.push_back({what, value, tol, value <= tol}); }
  void at_least(const std::string& what, double value, double bound) {
    items_.push_back({what, value, bound, value >= bound});
  }
  void holds(const std::string& what, bool ok) { items_.push_back({what, ok ? 1.0 : 0.0, 1.0, ok}); }
  void fail(const std::string& what) { items_.push_back({what, NAN, NAN, false}); }
  void info(const std::string& text) { notes_.push_back(text); }

  bool report(std::ostream& out) const {
    bool ok = !items_.empty();
    for (const auto& i : items_) ok = ok && i.pass;
    out << (ok ? "PASS" : "FAIL") << " criterion " << id_ << ": " << title_ << '\n';
    char buf[256];
    for (const auto& i : items_) {
      std::snprintf(buf, sizeof buf, "    %s %s value=%.6g bound=%.6g\n", i.pass ? "ok  " : "FAIL", i.what.c_str(),
                    i.value, i.tol);
      out << buf;
    }
    for (const auto& n : notes_) out << "    info: " << n << '\n';
    out.flush();
    return ok;
  }

 private:
  int id_;
  std::string title_;
  std::vector<Item> items_;
  std::vector<std::string> notes_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

/// Resonance of the spectrum with real energy nearest `target`.
std::optional<std::size_t> resonance_near(const SiegertSpectrum& s, double target) {
  std::optional<std::size_t> best;
  for (const auto& [i, m] : classify_spectrum(s).resonances) {
    if (!best || std::abs(s.energy(i).real() - target) < std::abs(s.energy(*best).real() - target)) best = i;
  }
  return best;
}

/// Runs body; a library error fails the criterion instead of aborting the run.
bool run(Criterion& c, const std::function<void(Criterion&)>& body) {
  try {
    body(c);
  } catch (const std::exception& e) {
    c.fail(std::string("error: ") + e.what());
  }
  return c.report(std::cout);
}

std::set<int> failed;

bool record(int id, bool ok) {
  if (!ok) failed.insert(id);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  if (argc == 3 && std::string(argv[1]) == "--known-failures") {
    std::stringstream list(argv[2]);
    for (std::string item; std::getline(list, item, ',');) known.insert(std::stoi(item));
  } else if (argc != 1) {
    std::cerr << "usage: acceptance [--known-failures 5,...]\n";
    return 2;
  }
  const auto v = jolanta_potential();
  const FdOptions fd{};
  FdOptions fd_nopsi = fd;
  fd_nopsi.store_psi = false;
  auto t2 = [&](double e) { return std::norm(solve_right_incident(v, pc, e, fd_nopsi).transmission); };
  const auto scan_grid = EnergyGrid::linspace(0.1, 2.0, 2000);
  std::vector<ScanPoint> scan;
  bool all = true;

  std::cout << "jolanta half range a = " << v.half_range() << ", threads = " << omp_get_max_threads() << "\n";

  Criterion c1(1, "two sharp |T|^2 maxima at 0.621 and 1.327 (+-0.005), runtime <= 60 s");
  all &= record(1, run(c1, [&](Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    scan = transmission_scan(v, pc, scan_grid, fd);
    const auto peaks = find_peaks(scan, t2);
    const double elapsed = seconds_since(t0);
    c.holds("exactly two sharp peaks", peaks.size() == 2);
    if (peaks.size() >= 1) c.at_most("|E_peak1 - 0.621|", std::abs(peaks[0].energy - 0.621), 0.005);
    if (peaks.size() >= 2) c.at_most("|E_peak2 - 1.327|", std::abs(peaks[1].energy - 1.327), 0.005);
    c.at_most("runtime [s]", elapsed, 60.0);
    for (const auto& p : peaks) c.info(fmt("peak E = %.8f, |T|^2 = %.6f, prominence = %.4f", p.energy, p.height, p.prominence));
  }));

  Criterion c2(2, "|T|^2 <= 0.05 at E = 0.02 and >= 0.99 at E = 50");
  all &= record(2, run(c2, [&](Criterion& c) {
    c.at_most("|T(0.02)|^2", t2(0.02), 0.05);
    c.at_least("|T(50)|^2", t2(50.0), 0.99);
  }));

  Criterion c3(3, "unitarity over the scan <= 1e-6");
  all &= record(3, run(c3, [&](Criterion& c) {
    if (scan.empty()) scan = transmission_scan(v, pc, scan_grid, fd);
    double worst = 0.0;
    for (const auto& p : scan) worst = std::max(worst, p.unitarity_residual());
    c.at_most("max ||T|^2 + |R|^2 - 1|", worst, 1e-6);
  }));

  Criterion c4(4, "direction symmetry over 50 energies <= 1e-8");
  all &= record(4, run(c4, [&](Criterion& c) {
    const auto grid = EnergyGrid::linspace(0.1, 2.0, 50);
    const auto l = transmission_scan(v, pc, grid, fd, Incidence::from_left);
    const auto r = transmission_scan(v, pc, grid, fd, Incidence::from_right);
    double worst = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) worst = std::max(worst, std::abs(l[i].transmission - r[i].transmission));
    c.at_most("max |T(+1) - T(-1)|", worst, 1e-8);
  }));

  // Spectra shared by the Siegert criteria.
  std::optional<SiegertSpectrum> s40;
  std::optional<SiegertSpectrum> s80;
  double s40_seconds = 0.0;
  auto spectrum80 = [&]() -> const SiegertSpectrum& {
    if (!s80) s80.emplace(siegert_spectrum(v, pc, BasisKind::legendre, std::max(v.half_range(), 15.0), 80));
    return *s80;
  };

  Criterion c5(5, "N = 40, a = 15: max |T_siegert - T_fd| over 200 energies <= 1e-3, runtime <= 120 s");
  all &= record(5, run(c5, [&](Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    s40.emplace(siegert_spectrum(v, pc, BasisKind::legendre, 15.0, 40));
    s40_seconds = seconds_since(t0);
    const auto grid = EnergyGrid::linspace(0.1, 2.0, 200);
    const auto fdt = transmission_scan(v, pc, grid, fd);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, std::abs(siegert_transmission(*s40, grid.energies[i]) - fdt[i].transmission));
    }
    c.at_most("max |T_siegert - T_fd|", worst, 1e-3);
    c.at_most("runtime [s]", seconds_since(t0), 120.0);
    c.info(fmt("eigensolve %.2f s", s40_seconds));
    const auto& s = spectrum80();
    double worst80 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst80 = std::max(worst80, std::abs(siegert_transmission(s, grid.energies[i]) - fdt[i].transmission));
    }
    c.info(fmt("same comparison with N = 80, a = %.5f: %.3g", s.basis().a(), worst80));
  }));

  Criterion c6(6, "Siegert algebra: QEP, normalization, closures <= 1e-8; M(lambda)^-1 <= 1e-6 at 5 lambda");
  all &= record(6, run(c6, [&](Criterion& c) {
    const std::vector<cplx> probes{{0.3, 0.7}, {-0.45, 0.2}, {1.1, -0.35}, {0.05, -1.3}, {-0.8, -0.6}};
    auto check = [&](const SiegertSpectrum& s, const std::string& tag) {
      const auto r = algebra_report(s);
      c.at_most(tag + " QEP residual", r.qep_residual, 1e-8);
      c.at_most(tag + " normalization", r.normalization_residual, 1e-8);
      c.at_most(tag + " closure sum d d^T", r.closure_inverse, 1e-8);
      c.at_most(tag + " closure sum lambda d d^T", r.closure_identity, 1e-8);
      c.at_most(tag + " closure sum lambda^2 d d^T", r.closure_b, 1e-8);
      double worst = 0.0;
      for (cplx l : probes) worst = std::max(worst, m_inverse_residual(s, l));
      c.at_most(tag + " M(lambda)^-1", worst, 1e-6);
    };
    if (!s40) s40.emplace(siegert_spectrum(v, pc, BasisKind::legendre, 15.0, 40));
    check(*s40, "N=40 a=15");
    check(spectrum80(), "N=80 a=" + fmt("%.5f", spectrum80().basis().a()));
  }));

  Criterion c7(7, "resonance at 0.621 +- 0.005: Gamma vs FWHM within 10%, BW rms <= 0.05 over +-2 Gamma, Q = 1 within 20%");
  all &= record(7, run(c7, [&](Criterion& c) {
    const auto& s = spectrum80();
    const auto i = resonance_near(s, 0.621);
    if (!i) {
      c.fail("no resonance in the spectrum");
      return;
    }
    const double er = s.energy(*i).real(), gamma = -2.0 * s.energy(*i).imag();
    c.at_most("|Re E - 0.621|", std::abs(er - 0.621), 0.005);
    const double peak = golden_maximize(t2, er - 10.0 * gamma, er + 10.0 * gamma);
    const double fwhm = measure_fwhm(t2, peak, t2(peak), 0.01);
    c.at_most("|FWHM / Gamma - 1|", std::abs(fwhm / gamma - 1.0), 0.10);
    const auto curve = transmission_scan(v, pc, EnergyGrid::linspace(er - 6 * gamma, er + 6 * gamma, 241), fd);
    const auto rec = breit_wigner_report(s, curve, *i);
    c.at_most("Breit-Wigner rms", rec.fit_rms, 0.05);
    c.at_most("|Q - 1|", std::abs(rec.q - 1.0), 0.20);
    c.info(fmt("E_res = %.8f, Gamma = %.4g, FWHM = %.4g", er, gamma, fwhm));
    c.info(fmt("Q = %.5f over %.0f window points", rec.q, static_cast<double>(rec.window_points)));
  }));

  Criterion c8(8, "Green identities: jump within 5%, endpoint identities within 1e-3, on-shell within 1e-5 over 50 energies");
  all &= record(8, run(c8, [&](Criterion& c) {
    const auto grid = EnergyGrid::linspace(0.1, 2.0, 50);
    double jump = 0.0, endpoint = 0.0, siegert_endpoint = 0.0, onshell = 0.0;
    const auto& s = spectrum80();
    const double sa = s.basis().a();
    for (double e : grid.energies) {
      jump = std::max(jump, free_green_ode_check(pc, e, 0.0, fd.dx).relative_error());
      const auto plus = solve_right_incident(v, pc, e, fd);
      const auto minus = solve_left_incident(v, pc, e, fd);
      endpoint = std::max(endpoint, green_endpoint_identity(plus, minus).relative_residual());
      const cplx closed = siegert_endpoint_closed_form(s, e, plus.transmission);
      siegert_endpoint = std::max(siegert_endpoint, std::abs(siegert_green(s, e, -sa, sa) - closed) / std::abs(closed));
      for (int eta : {1, -1}) {
        onshell = std::max(onshell, std::abs(onshell_t_matrix(v, plus, eta) - onshell_t_matrix_expected(plus, eta)));
      }
    }
    c.at_most("free Green jump relative error", jump, 0.05);
    c.at_most("FD endpoint identity (relative)", endpoint, 1e-3);
    c.at_most("Siegert endpoint identity (relative)", siegert_endpoint, 1e-3);
    c.at_most("on-shell T-matrix identities", onshell, 1e-5);
  }));

  Criterion c9(9, "Born: |T_born - T_fd| <= 0.05 |T_fd - 1| for 0.01 Jolanta at E = 1");
  all &= record(9, run(c9, [&](Criterion& c) {
    const auto weak = v.scaled(0.01);
    const cplx tfd = solve_right_incident(weak, pc, 1.0, fd_nopsi).transmission;
    const cplx tb = born_transmission(weak, pc, 1.0, 1);
    c.at_most("|T_born - T_fd| / |T_fd - 1|", std::abs(tb - tfd) / std::abs(tfd - 1.0), 0.05);
  }));

  Criterion c10(10, "wavepacket: norm drift <= 1e-6 at 5 times, p_T + p_R = 1 within 1e-4, narrow p_T = |T|^2 within 1e-3, SPA <= 5% at t = 200");
  all &= record(10, run(c10, [&](Criterion& c) {
    // Quadrature of 3000 nodes over k0 +- 6 sigma keeps plane-wave revivals (period 2 pi / dk)
    // outside the +-1000 window; dx = 5e-4 holds the interior wavefunction error below 1e-6.
    const auto p = gaussian_packet(3.0, 0.3, 3000);
    FdOptions fine = fd;
    fine.dx = 5e-4;
    const auto states = packet_states(v, pc, p, fine);
    const auto x = uniform_grid(-1000.0, 1000.0, 20001);
    const double h = x[1] - x[0];
    double drift = 0.0;
    std::vector<cplx> psi200;
    for (double t : {-200.0, -50.0, 0.0, 50.0, 200.0}) {
      auto psi = propagate(p, states, t, x);
      drift = std::max(drift, std::abs(spatial_norm(psi, h) - 1.0));
      if (t == 200.0) psi200 = std::move(psi);
    }
    c.at_most("norm drift", drift, 1e-6);
    c.at_most("|p_T + p_R - 1|", std::abs(branch_populations(p, states).sum() - 1.0), 1e-4);

    const auto narrow = gaussian_packet(2.0, 1e-3, 129);
    const double t2_0 = t2(pc.energy(2.0));
    c.at_most("narrow |p_T - |T(E0)|^2|", std::abs(branch_populations(narrow, packet_states(v, pc, narrow, fd_nopsi)).transmitted - t2_0), 1e-3);

    const auto coeffs = CoefficientCurve::from_states(states);
    const double a = v.half_range();
    double worst = 0.0, lobe = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] <= a) continue;
      worst = std::max(worst, std::abs(spa_branch(p, coeffs, pc, a, 200.0, x[i], SpaBranch::transmitted) - psi200[i]));
      lobe = std::max(lobe, std::abs(psi200[i]));
    }
    c.at_most("SPA transmitted lobe error / max|psi|", worst / lobe, 0.05);
    c.info("packet k0 = 3, sigma = 0.3 (clear of the narrow resonances), 3000 nodes, x in [-1000, 1000], h = 0.1");
  }));

  Criterion c11(11, "bound state vs shooting oracle within 1e-4");
  all &= record(11, run(c11, [&](Criterion& c) {
    const auto& s = spectrum80();
    const auto cls = classify_spectrum(s);
    c.holds("exactly one bound state", cls.bound.size() == 1);
    const testing::ShootingOracle oracle(v, pc, 20.0);
    const auto levels = oracle.bound_states(-0.79, -1e-3);
    c.holds("oracle finds one level", levels.size() == 1);
    if (cls.bound.empty() || levels.empty()) return;
    const double e = s.energy(cls.bound[0]).real();
    c.at_most("|E_siegert - E_shooting|", std::abs(e - levels[0]), 1e-4);
    c.info(fmt("E_siegert = %.12f, E_shooting = %.12f", e, levels[0]));
  }));

  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << '\n';
  if (argc == 1) return all ? 0 : 1;
  std::cout << "known failures match: " << (failed == known ? "yes" : "no") << '\n';
  return failed == known ? 0 : 1;
}
