#include "scatter1d/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "scatter1d/config.hpp"
#include "scatter1d/error.hpp"
#include "scatter1d/fdsolver.hpp"
#include "scatter1d/green.hpp"
#include "scatter1d/siegert.hpp"
#include "scatter1d/wavepacket.hpp"

namespace scatter1d {

namespace {

using json = nlohmann::json;

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

/// Values given on the command line; unset ones fall back to the config file, then defaults.
struct Overrides {
  std::string config;
  std::optional<std::string> potential, table;
  std::optional<double> threshold, hbar, mass, dx, emin, emax, box_a, k0, sigma;
  std::optional<std::size_t> points;
  std::optional<int> n, nodes, threads;
  std::optional<std::string> basis;

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config.empty()) cfg.apply(read_key_values(config));
    if (potential) cfg.potential.name = *potential;
    if (table) {
      cfg.potential.name = "table";
      cfg.potential.file = *table;
    }
    if (threshold) cfg.potential.range_threshold = *threshold;
    if (hbar) cfg.constants.hbar = *hbar;
    if (mass) cfg.constants.mass = *mass;
    if (dx) cfg.fd.dx = *dx;
    if (emin) cfg.emin = *emin;
    if (emax) cfg.emax = *emax;
    if (points) cfg.points = *points;
    if (n) cfg.siegert_n = *n;
    if (box_a) cfg.box_a = *box_a;
    if (basis) cfg.basis = basis_kind_from_string(*basis);
    if (k0) cfg.k0 = *k0;
    if (sigma) cfg.sigma = *sigma;
    if (nodes) cfg.packet_nodes = *nodes;
    if (threads) cfg.threads = *threads;
    cfg.validate();
    return cfg;
  }
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "key = value config file")->check(CLI::ExistingFile);
  app->add_option("--potential", o.potential, "jolanta, zero, barrier, step or table");
  app->add_option("--table", o.table, "CSV potential table (x,V); implies --potential table");
  app->add_option("--range-threshold", o.threshold, "support detection threshold");
  app->add_option("--hbar", o.hbar);
  app->add_option("--mass", o.mass);
  app->add_option("--threads", o.threads, "worker threads (SCATTER1D_THREADS overrides)");
}

void add_fd(CLI::App* app, Overrides& o) { app->add_option("--dx", o.dx, "finite-difference grid spacing"); }

void add_grid(CLI::App* app, Overrides& o, const char* points_flag) {
  app->add_option("--emin", o.emin);
  app->add_option("--emax", o.emax);
  app->add_option(points_flag, o.points, "number of energies");
}

void add_siegert(CLI::App* app, Overrides& o) {
  app->add_option("--n", o.n, "basis size N");
  app->add_option("--box-a", o.box_a, "box half-width a");
  app->add_option("--basis", o.basis, "legendre or fourier");
}

void apply_threads(const RunConfig& cfg) {
  const int t = resolve_threads(cfg.threads);
  if (t > 0) omp_set_num_threads(t);
}

/// Output sink: a file when a path is given, otherwise `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::io_error, "cannot write " + path);
    }
    out_ = path.empty() ? &fallback : &file_;
    *out_ << std::setprecision(17);
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

void write_json(const json& j, const std::string& path, std::ostream& fallback) {
  Sink s(path, fallback);
  *s << j.dump(2) << '\n';
}

QepOptions qep_options(const Potential& v) {
  QepOptions o;
  o.allow_zero_modes = v.is_zero();
  return o;
}

SiegertSpectrum make_spectrum(const RunConfig& cfg, const Potential& v) {
  return siegert_spectrum(v, cfg.constants, cfg.basis, cfg.siegert_box(v), cfg.siegert_n, cfg.box_tolerance,
                          qep_options(v));
}

void write_scan_csv(std::ostream& out, std::span<const ScanPoint> scan) {
  out << "E,ReT,ImT,ReR,ImR,T2,R2,unitarity_residual\n";
  for (const auto& p : scan) {
    out << p.energy << ',' << p.transmission.real() << ',' << p.transmission.imag() << ',' << p.reflection.real()
        << ',' << p.reflection.imag() << ',' << p.t2() << ',' << p.r2() << ',' << p.unitarity_residual() << '\n';
  }
}

std::vector<ScanPoint> read_scan_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
  std::vector<ScanPoint> out;
  std::string line;
  std::getline(in, line);  // header
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double e, tr, ti, rr, ri;
    if (!(row >> e >> tr >> ti >> rr >> ri)) {
      throw Error(ErrorKind::io_error, path + ":" + std::to_string(lineno) + ": expected E,ReT,ImT,ReR,ImR");
    }
    out.push_back({e, {tr, ti}, {rr, ri}});
  }
  if (out.empty()) throw Error(ErrorKind::io_error, path + " holds no data rows");
  return out;
}

bool resonance_in_range(cplx e, double lo, double hi) {
  const double gamma = -2.0 * e.imag();
  return e.real() >= lo && e.real() <= hi && gamma > 1e-10 * std::abs(e.real()) && gamma <= hi - lo;
}

/// Breit-Wigner records for the resonances inside [lo, hi], each fitted against a dense
/// FD curve over E_res +- 6 Gamma.
json resonance_table(const SiegertSpectrum& spectrum, const Potential& v, const RunConfig& cfg, double lo, double hi) {
  json rows = json::array();
  const auto cls = classify_spectrum(spectrum);
  for (const auto& [i, mirror] : cls.resonances) {
    const cplx e = spectrum.energy(i);
    if (!resonance_in_range(e, lo, hi)) continue;
    const double gamma = -2.0 * e.imag();
    if (e.real() - 6.0 * gamma <= 0.0) continue;
    const auto curve =
        transmission_scan(v, cfg.constants, EnergyGrid::linspace(e.real() - 6.0 * gamma, e.real() + 6.0 * gamma, 241), cfg.fd);
    const auto r = breit_wigner_report(spectrum, curve, i);
    rows.push_back({{"index", i}, {"E_res", r.e_res}, {"Gamma", r.gamma}, {"k", cjson(r.k)}, {"Q", r.q},
                    {"fit_rms", r.fit_rms}, {"window_points", r.window_points}});
  }
  return rows;
}

int cmd_scan(const Overrides& o, const std::string& out_path, std::ostream& out) {
  const auto cfg = o.resolve();
  apply_threads(cfg);
  const auto v = cfg.make_potential();
  const auto scan = transmission_scan(v, cfg.constants, cfg.energy_grid(), cfg.fd);
  Sink s(out_path, out);
  write_scan_csv(*s, scan);
  return exit_ok;
}

int cmd_siegert(const Overrides& o, const std::string& out_path, std::ostream& out) {
  const auto cfg = o.resolve();
  apply_threads(cfg);
  const auto v = cfg.make_potential();
  const auto spectrum = make_spectrum(cfg, v);
  const auto cls = classify_spectrum(spectrum);
  const auto alg = algebra_report(spectrum);
  json states = json::array();
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const auto& s = spectrum.states()[i];
    auto c = [](const cquad& z) { return cplx(static_cast<double>(z.real()), static_cast<double>(z.imag())); };
    states.push_back({{"index", i},
                      {"lambda", cjson(spectrum.lambda(i))},
                      {"k", cjson(spectrum.k(i))},
                      {"E", cjson(spectrum.energy(i))},
                      {"class", to_string(cls.classes[i])},
                      {"phi_minus", cjson(c(s.phi_minus))},
                      {"phi_plus", cjson(c(s.phi_plus))},
                      {"phi_product", cjson(boundary_product(spectrum, i))}});
  }
  json j = {{"potential", v.tag()},
            {"basis", to_string(cfg.basis)},
            {"N", cfg.siegert_n},
            {"a", spectrum.basis().a()},
            {"hbar", cfg.constants.hbar},
            {"mass", cfg.constants.mass},
            {"algebra",
             {{"qep_residual", alg.qep_residual},
              {"normalization_residual", alg.normalization_residual},
              {"closure_inverse", alg.closure_inverse},
              {"closure_identity", alg.closure_identity},
              {"closure_b", alg.closure_b},
              {"conjugation", alg.conjugation}}},
            {"states", states}};
  write_json(j, out_path, out);
  return exit_ok;
}

int cmd_resonances(const std::string& spectrum_path, const std::string& curve_path, const std::string& out_path,
                   std::ostream& out, std::ostream& err) {
  std::ifstream in(spectrum_path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + spectrum_path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io_error, spectrum_path + ": " + e.what());
  }
  const auto curve = read_scan_csv(curve_path);
  PhysicsConstants pc;
  pc.hbar = doc.value("hbar", 1.0);
  pc.mass = doc.value("mass", 1.0);
  auto z = [](const json& a) { return cplx(a.at(0).get<double>(), a.at(1).get<double>()); };
  const double lo = curve.front().energy, hi = curve.back().energy;
  Sink s(out_path, out);
  *s << "index,E_res,Gamma,Re_k,Im_k,Q,fit_rms,window_points,status\n";
  for (const auto& st : doc.at("states")) {
    if (st.at("class").get<std::string>() != "resonance") continue;
    const cplx e = z(st.at("E")), k = z(st.at("k"));
    if (!resonance_in_range(e, lo, hi)) continue;
    const auto index = st.at("index").get<std::size_t>();
    try {
      const auto r = breit_wigner_from_values(e, k, z(st.at("phi_product")), pc, curve);
      *s << index << ',' << r.e_res << ',' << r.gamma << ',' << k.real() << ',' << k.imag() << ',' << r.q << ','
         << r.fit_rms << ',' << r.window_points << ",ok\n";
    } catch (const Error& e2) {
      err << "scatter1d: resonance " << index << ": " << e2.what() << '\n';
      const double q = breit_wigner_q(e, k, z(st.at("phi_product")), pc);
      *s << index << ',' << e.real() << ',' << -2.0 * e.imag() << ',' << k.real() << ',' << k.imag() << ',' << q
         << ",nan,0," << to_string(e2.kind()) << '\n';
    }
  }
  return exit_ok;
}

int cmd_compare(const Overrides& o, const std::string& out_path, const std::string& report_path, std::ostream& out) {
  const auto cfg = o.resolve();
  apply_threads(cfg);
  const auto v = cfg.make_potential();
  const auto grid = cfg.energy_grid();
  const auto fd = transmission_scan(v, cfg.constants, grid, cfg.fd);
  const auto spectrum = make_spectrum(cfg, v);
  std::vector<cplx> ts(grid.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid.size()); ++i) {
    ts[static_cast<std::size_t>(i)] = siegert_transmission(spectrum, grid.energies[static_cast<std::size_t>(i)]);
  }
  double max_diff = 0.0, worst_unitarity = 0.0;
  {
    Sink s(out_path, out);
    *s << "E,ReT_fd,ImT_fd,ReT_siegert,ImT_siegert,abs_diff\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = std::abs(ts[i] - fd[i].transmission);
      max_diff = std::max(max_diff, d);
      worst_unitarity = std::max(worst_unitarity, fd[i].unitarity_residual());
      *s << fd[i].energy << ',' << fd[i].transmission.real() << ',' << fd[i].transmission.imag() << ','
         << ts[i].real() << ',' << ts[i].imag() << ',' << d << '\n';
    }
  }
  json j = {{"potential", v.tag()},
            {"basis", to_string(cfg.basis)},
            {"N", cfg.siegert_n},
            {"a", spectrum.basis().a()},
            {"dx", cfg.fd.dx},
            {"points", grid.size()},
            {"emin", cfg.emin},
            {"emax", cfg.emax},
            {"max_abs_diff", max_diff},
            {"worst_unitarity", worst_unitarity},
            {"resonances", resonance_table(spectrum, v, cfg, cfg.emin, cfg.emax)}};
  if (!report_path.empty() || !out_path.empty()) {
    write_json(j, report_path, out);
  } else {
    out << j.dump(2) << '\n';
  }
  return exit_ok;
}

double pick_energy(const RunConfig& cfg) { return std::clamp(0.5, cfg.emin, cfg.emax); }

json green_report(const RunConfig& cfg, const Potential& v, double energy, bool with_siegert) {
  const auto& pc = cfg.constants;
  const auto plus = solve_right_incident(v, pc, energy, cfg.fd);
  const auto minus = solve_left_incident(v, pc, energy, cfg.fd);
  const double dx = cfg.fd.dx;

  const auto jump = free_green_ode_check(pc, energy, 0.0, dx);
  double free_sym = 0.0, adv = 0.0, full_sym = 0.0;
  const double a = std::max(v.half_range(), 1.0);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double x = std::round((-a + 2.0 * a * (i + 0.37) / 10.0) / dx) * dx;
      const double y = std::round((-a + 2.0 * a * (j + 0.61) / 10.0) / dx) * dx;
      free_sym = std::max(free_sym, std::abs(free_green(pc, energy, x, y) - free_green(pc, energy, y, x)));
      adv = std::max(adv, std::abs(free_green(pc, energy, x, y, Branch::advanced) -
                                   std::conj(free_green(pc, energy, x, y))));
      full_sym = std::max(full_sym, std::abs(full_green_retarded(plus, minus, x, y) - full_green_retarded(plus, minus, y, x)));
    }
  }
  const double y0 = 0.0;
  const cplx g0 = full_green_retarded(plus, minus, y0, y0);
  const cplx gp = full_green_retarded(plus, minus, y0 + dx, y0);
  const cplx gm = full_green_retarded(plus, minus, y0 - dx, y0);
  const cplx full_jump = (gp - g0) / dx - (g0 - gm) / dx;
  const auto ep = green_endpoint_identity(plus, minus);
  const auto w = wronskian(plus, minus);

  json j = {{"energy", energy},
            {"dx", dx},
            {"potential", v.tag()},
            {"free",
             {{"jump", cjson(jump.jump)},
              {"expected_jump", jump.expected},
              {"jump_relative_error", jump.relative_error()},
              {"ode_residual", jump.ode_residual},
              {"symmetry", free_sym},
              {"advanced_conjugate", adv}}},
            {"full",
             {{"symmetry", full_sym},
              {"continuity", std::abs(gp - gm)},
              {"jump", cjson(full_jump)},
              {"jump_relative_error", std::abs(full_jump - pc.kinetic_scale()) / pc.kinetic_scale()},
              {"endpoint_lhs", cjson(ep.lhs)},
              {"endpoint_rhs", cjson(ep.rhs)},
              {"endpoint_relative_residual", ep.relative_residual()}}},
            {"onshell",
             {{"eta_plus_residual", std::abs(onshell_t_matrix(v, plus, 1) - onshell_t_matrix_expected(plus, 1))},
              {"eta_minus_residual", std::abs(onshell_t_matrix(v, plus, -1) - onshell_t_matrix_expected(plus, -1))}}},
            {"wronskian",
             {{"constancy", w.max_constancy_deviation}, {"versus_transmission", w.max_expected_deviation}}},
            {"unitarity", plus.unitarity_residual()}};
  if (with_siegert) {
    const auto spectrum = make_spectrum(cfg, v);
    const double sa = spectrum.basis().a();
    const cplx direct = siegert_green(spectrum, energy, -sa, sa);
    const cplx closed = siegert_endpoint_closed_form(spectrum, energy, plus.transmission);
    j["siegert"] = {{"N", cfg.siegert_n},
                    {"a", sa},
                    {"endpoint_direct", cjson(direct)},
                    {"endpoint_closed_form", cjson(closed)},
                    {"endpoint_relative_residual", std::abs(direct - closed) / std::abs(closed)},
                    {"transmission_difference", std::abs(siegert_transmission(spectrum, energy) - plus.transmission)}};
  }
  return j;
}

int cmd_green(const Overrides& o, double energy, bool with_siegert, const std::string& out_path, std::ostream& out) {
  const auto cfg = o.resolve();
  apply_threads(cfg);
  const auto v = cfg.make_potential();
  write_json(green_report(cfg, v, energy, with_siegert), out_path, out);
  return exit_ok;
}

std::vector<double> parse_times(const std::string& s) {
  std::vector<double> t;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      t.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::config_error, "bad time '" + item + "'");
    }
  }
  if (t.empty()) throw Error(ErrorKind::config_error, "no times given");
  return t;
}

int cmd_wavepacket(const Overrides& o, const std::string& times, std::optional<double> xmax,
                   std::optional<std::size_t> xpoints, const std::string& out_path, const std::string& report_path,
                   std::ostream& out) {
  const auto cfg = o.resolve();
  apply_threads(cfg);
  const auto ts = parse_times(times);
  const auto v = cfg.make_potential();
  const auto& pc = cfg.constants;
  const auto packet = gaussian_packet(cfg.k0, cfg.sigma, cfg.packet_nodes);
  const auto states = packet_states(v, pc, packet, cfg.fd);
  double tmax = 0.0;
  for (double t : ts) tmax = std::max(tmax, std::abs(t));
  const double vmax = pc.hbar * packet.k_max() / pc.mass;
  const double half = xmax.value_or(v.half_range() + 50.0 + 6.0 / packet.sigma + vmax * tmax);
  const double h_target = std::min(0.05, std::numbers::pi / (4.0 * packet.k_max()));
  const std::size_t n = xpoints.value_or(static_cast<std::size_t>(std::ceil(2.0 * half / h_target)) + 1);
  const auto x = uniform_grid(-half, half, n);
  const double h = x[1] - x[0];

  json norms = json::array();
  {
    Sink s(out_path, out);
    *s << "t,x,Re_psi,Im_psi,abs2\n";
    for (double t : ts) {
      const auto psi = propagate(packet, states, t, x);
      for (std::size_t i = 0; i < n; ++i) {
        *s << t << ',' << x[i] << ',' << psi[i].real() << ',' << psi[i].imag() << ',' << std::norm(psi[i]) << '\n';
      }
      norms.push_back({{"t", t}, {"norm", spatial_norm(psi, h)}});
    }
  }
  const auto pop = branch_populations(packet, states);
  json j = {{"k0", packet.k0},
            {"sigma", packet.sigma},
            {"nodes", packet.size()},
            {"packet_norm", packet.norm()},
            {"mean_momentum", packet.mean_momentum()},
            {"p_trans", pop.transmitted},
            {"p_refl", pop.reflected},
            {"sum", pop.sum()},
            {"x_half_width", half},
            {"norms", norms}};
  if (!report_path.empty()) {
    write_json(j, report_path, out);
  } else if (out_path.empty()) {
    // CSV already went to stdout; keep the report on its own stream line
    out << j.dump() << '\n';
  } else {
    out << j.dump(2) << '\n';
  }
  return exit_ok;
}

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

template <typename F>
void run_check(std::vector<Check>& checks, const std::string& name, double tolerance, F&& f) {
  Check c;
  c.name = name;
  c.tolerance = tolerance;
  try {
    c.residual = f();
    c.pass = c.residual <= tolerance;
  } catch (const std::exception& e) {
    c.residual = std::nan("");
    c.note = e.what();
  }
  checks.push_back(std::move(c));
}

int cmd_validate(const Overrides& o, std::ostream& out) {
  const auto cfg = o.resolve();
  apply_threads(cfg);
  const auto v = cfg.make_potential();
  const auto& pc = cfg.constants;
  const double e0 = pick_energy(cfg);
  std::vector<Check> checks;

  run_check(checks, "unitarity", 1e-6, [&] {
    double worst = 0.0;
    for (const auto& p : transmission_scan(v, pc, cfg.energy_grid(), cfg.fd)) worst = std::max(worst, p.unitarity_residual());
    return worst;
  });
  const auto grid50 = EnergyGrid::linspace(cfg.emin, cfg.emax, 50);
  run_check(checks, "direction-symmetry", 1e-8, [&] {
    const auto l = transmission_scan(v, pc, grid50, cfg.fd, Incidence::from_left);
    const auto r = transmission_scan(v, pc, grid50, cfg.fd, Incidence::from_right);
    double worst = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) worst = std::max(worst, std::abs(l[i].transmission - r[i].transmission));
    return worst;
  });
  run_check(checks, "off-diagonal-unitarity", 1e-6, [&] {
    const auto l = transmission_scan(v, pc, grid50, cfg.fd, Incidence::from_left);
    const auto r = transmission_scan(v, pc, grid50, cfg.fd, Incidence::from_right);
    double worst = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
      worst = std::max(worst, std::abs(std::conj(l[i].transmission) * r[i].reflection +
                                       std::conj(l[i].reflection) * r[i].transmission));
    }
    return worst;
  });
  std::optional<json> green;
  run_check(checks, "wronskian", 1e-6, [&] {
    green = green_report(cfg, v, e0, false);
    return std::max((*green)["wronskian"]["constancy"].get<double>(), (*green)["wronskian"]["versus_transmission"].get<double>());
  });
  run_check(checks, "free-green-jump", 0.05, [&] { return free_green_ode_check(pc, e0, 0.0, cfg.fd.dx).relative_error(); });
  run_check(checks, "green-endpoint", 1e-5, [&] {
    if (!green) throw Error(ErrorKind::internal_inconsistency, "green report unavailable");
    return (*green)["full"]["endpoint_relative_residual"].get<double>();
  });
  run_check(checks, "onshell-t-matrix", 1e-5, [&] {
    double worst = 0.0;
    for (double e : grid50.energies) {
      const auto s = solve_right_incident(v, pc, e, cfg.fd);
      worst = std::max(worst, std::abs(onshell_t_matrix(v, s, 1) - onshell_t_matrix_expected(s, 1)));
      worst = std::max(worst, std::abs(onshell_t_matrix(v, s, -1) - onshell_t_matrix_expected(s, -1)));
    }
    return worst;
  });

  std::optional<SiegertSpectrum> spectrum;
  std::optional<AlgebraReport> alg;
  run_check(checks, "siegert-qep", 1e-8, [&] {
    spectrum.emplace(make_spectrum(cfg, v));
    alg = algebra_report(*spectrum);
    return alg->qep_residual;
  });
  auto alg_check = [&](const std::string& name, double tol, double AlgebraReport::*field) {
    run_check(checks, name, tol, [&] {
      if (!alg) throw Error(ErrorKind::internal_inconsistency, "no Siegert spectrum");
      return (*alg).*field;
    });
  };
  alg_check("siegert-normalization", 1e-8, &AlgebraReport::normalization_residual);
  alg_check("siegert-closure-inverse", 1e-8, &AlgebraReport::closure_inverse);
  alg_check("siegert-closure-identity", 1e-8, &AlgebraReport::closure_identity);
  alg_check("siegert-closure-b", 1e-8, &AlgebraReport::closure_b);
  run_check(checks, "siegert-m-inverse", 1e-6, [&] {
    if (!spectrum) throw Error(ErrorKind::internal_inconsistency, "no Siegert spectrum");
    double worst = 0.0;
    for (cplx l : {cplx(0.3, 0.7), cplx(-0.45, 0.2), cplx(1.1, -0.35), cplx(0.05, -1.3), cplx(-0.8, -0.6)}) {
      worst = std::max(worst, m_inverse_residual(*spectrum, l));
    }
    return worst;
  });
  run_check(checks, "siegert-endpoint", 1e-3, [&] {
    if (!spectrum) throw Error(ErrorKind::internal_inconsistency, "no Siegert spectrum");
    const double sa = spectrum->basis().a();
    const auto s = solve_right_incident(v, pc, e0, cfg.fd);
    const cplx closed = siegert_endpoint_closed_form(*spectrum, e0, s.transmission);
    return std::abs(siegert_green(*spectrum, e0, -sa, sa) - closed) / std::abs(closed);
  });
  run_check(checks, "siegert-vs-fd", 1e-3, [&] {
    if (!spectrum) throw Error(ErrorKind::internal_inconsistency, "no Siegert spectrum");
    const auto grid = EnergyGrid::linspace(cfg.emin, cfg.emax, 200);
    const auto fd = transmission_scan(v, pc, grid, cfg.fd);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, std::abs(siegert_transmission(*spectrum, grid.energies[i]) - fd[i].transmission));
    }
    return worst;
  });
  run_check(checks, "population-sum-rule", 1e-4, [&] {
    const auto packet = gaussian_packet(cfg.k0, cfg.sigma, cfg.packet_nodes);
    FdOptions fo = cfg.fd;
    fo.store_psi = false;
    std::vector<cplx> t(packet.size()), r(packet.size());
    for (std::size_t j = 0; j < packet.size(); ++j) {
      const auto s = solve_right_incident(v, pc, pc.energy(packet.k[j]), fo);
      t[j] = s.transmission;
      r[j] = s.reflection;
    }
    return std::abs(branch_populations(packet, t, r).sum() - 1.0);
  });

  bool all = true;
  out << std::setprecision(3);
  for (const auto& c : checks) {
    all = all && c.pass;
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " residual=" << c.residual << " tol=" << c.tolerance;
    if (!c.note.empty()) out << " error=\"" << c.note << '"';
    out << '\n';
  }
  return all ? exit_ok : exit_validation;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"1D scattering: finite-difference and Siegert pseudostate routes"};
  app.require_subcommand(1);
  Overrides o;
  std::string out_path, report_path, spectrum_path, curve_path, times = "-200,0,200";
  double energy = 0.5;
  int green_siegert_n = -1;
  std::optional<double> xmax;
  std::optional<std::size_t> xpoints;

  auto* scan = app.add_subcommand("scan", "FD transmission scan to CSV");
  add_common(scan, o);
  add_fd(scan, o);
  add_grid(scan, o, "--n");
  scan->add_option("--out", out_path, "CSV output (stdout if omitted)");

  auto* sieg = app.add_subcommand("siegert", "Siegert pseudostate spectrum to JSON");
  add_common(sieg, o);
  add_siegert(sieg, o);
  sieg->add_option("--out", out_path, "JSON output (stdout if omitted)");

  auto* res = app.add_subcommand("resonances", "Breit-Wigner table from a spectrum and an FD curve");
  res->add_option("--spectrum", spectrum_path, "spectrum JSON from `siegert`")->required()->check(CLI::ExistingFile);
  res->add_option("--fd-curve", curve_path, "CSV from `scan`")->required()->check(CLI::ExistingFile);
  res->add_option("--out", out_path, "CSV output (stdout if omitted)");

  auto* cmp = app.add_subcommand("compare", "FD versus Siegert transmission on a shared grid");
  add_common(cmp, o);
  add_fd(cmp, o);
  add_grid(cmp, o, "--points");
  add_siegert(cmp, o);
  cmp->add_option("--out", out_path, "per-energy CSV");
  cmp->add_option("--report", report_path, "summary JSON");

  auto* green = app.add_subcommand("green-check", "Green-function identity residuals as JSON");
  add_common(green, o);
  add_fd(green, o);
  green->add_option("--energy", energy);
  green->add_option("--siegert-n", green_siegert_n, "also check the Siegert endpoint identity with this N (0 skips)");
  green->add_option("--box-a", o.box_a);
  green->add_option("--out", out_path, "JSON output (stdout if omitted)");

  auto* wp = app.add_subcommand("wavepacket", "spectral wavepacket evolution");
  add_common(wp, o);
  add_fd(wp, o);
  wp->add_option("--k0", o.k0);
  wp->add_option("--sigma", o.sigma);
  wp->add_option("--nodes", o.nodes);
  wp->add_option("--times", times, "comma separated times");
  wp->add_option("--xmax", xmax, "spatial window half-width");
  wp->add_option("--xpoints", xpoints, "spatial samples");
  wp->add_option("--out", out_path, "CSV output (stdout if omitted)");
  wp->add_option("--report", report_path, "population JSON");

  auto* val = app.add_subcommand("validate", "run the invariant suite; exit 3 on failures");
  add_common(val, o);
  add_fd(val, o);
  add_grid(val, o, "--points");
  add_siegert(val, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*scan) return cmd_scan(o, out_path, out);
    if (*sieg) return cmd_siegert(o, out_path, out);
    if (*res) return cmd_resonances(spectrum_path, curve_path, out_path, out, err);
    if (*cmp) return cmd_compare(o, out_path, report_path, out);
    if (*green) {
      Overrides g = o;
      if (green_siegert_n > 0) g.n = green_siegert_n;
      return cmd_green(g, energy, green_siegert_n != 0, out_path, out);
    }
    if (*wp) return cmd_wavepacket(o, times, xmax, xpoints, out_path, report_path, out);
    if (*val) return cmd_validate(o, out);
  } catch (const Error& e) {
    err << "scatter1d: error: " << e.what() << '\n';
    return e.kind() == ErrorKind::config_error ? exit_usage : exit_computation;
  } catch (const std::exception& e) {
    err << "scatter1d: error: " << e.what() << '\n';
    return exit_computation;
  }
  return exit_usage;
}

}  // namespace scatter1d
