#include "scatter1d/fdsolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "scatter1d/error.hpp"

namespace scatter1d {

namespace {

constexpr cplx I{0.0, 1.0};

void check_energy(double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw Error(ErrorKind::invalid_energy, "energy must be positive, got " + std::to_string(energy));
  }
}

}  // namespace

EnergyGrid EnergyGrid::linspace(double emin, double emax, std::size_t n) {
  EnergyGrid g;
  if (n == 1) {
    g.energies = {emin};
  } else {
    g.energies.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      g.energies[i] = emin + (emax - emin) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
  }
  g.validate();
  return g;
}

void EnergyGrid::validate() const {
  if (energies.empty()) throw Error(ErrorKind::invalid_argument, "energy grid is empty");
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (!(energies[i] > 0.0)) throw Error(ErrorKind::invalid_argument, "energy grid must be positive");
    if (i > 0 && !(energies[i] > energies[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "energy grid must be strictly increasing");
    }
  }
}

double continuum_normalization(const PhysicsConstants& constants, double wavenumber) {
  return std::sqrt(constants.mass / (2.0 * std::numbers::pi * constants.hbar * constants.hbar * wavenumber));
}

cplx ScatteringSolution::psi_at_index(std::ptrdiff_t n) const {
  if (psi.empty()) throw Error(ErrorKind::missing_wavefunction, "solution was computed without psi");
  if (n < first_index || n > last_index()) {
    throw Error(ErrorKind::grid_mismatch, "index " + std::to_string(n) + " outside the stored grid");
  }
  return psi[static_cast<std::size_t>(n - first_index)];
}

cplx ScatteringSolution::psi_at(double x) const {
  const double r = x / dx;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-6) {
    throw Error(ErrorKind::grid_mismatch, "x = " + std::to_string(x) + " is not a grid point");
  }
  return psi_at_index(static_cast<std::ptrdiff_t>(n));
}

cplx ScatteringSolution::asymptotic_form(double x) const {
  const double k = lattice_wavenumber;
  if (incidence == Incidence::from_left) {
    if (x <= -support) return std::exp(I * k * x) + reflection * std::exp(-I * k * x);
    if (x >= support) return transmission * std::exp(I * k * x);
  } else {
    if (x >= support) return std::exp(-I * k * x) + reflection * std::exp(I * k * x);
    if (x <= -support) return transmission * std::exp(-I * k * x);
  }
  return psi_at(x);
}

SampledPotential::SampledPotential(const Potential& potential, double dx, std::ptrdiff_t half_count)
    : dx_(dx), support_(potential.half_range()), half_count_(half_count),
      values_(static_cast<std::size_t>(2 * half_count + 1), 0.0) {
  if (potential.is_zero()) return;
  for (std::ptrdiff_t n = -half_count; n <= half_count; ++n) {
    const double x = static_cast<double>(n) * dx;
    if (std::abs(x) < support_) values_[static_cast<std::size_t>(n + half_count)] = potential(x);
  }
}

std::ptrdiff_t fd_half_count(double support, double wavenumber, const FdOptions& options) {
  const double pad = options.pad_wavelengths * 2.0 * std::numbers::pi / wavenumber;
  return static_cast<std::ptrdiff_t>(std::ceil((support + pad) / options.dx)) + 2;
}

ScatteringSolution solve_incident(const SampledPotential& samples, const PhysicsConstants& constants,
                                  double energy, Incidence incidence, const FdOptions& options) {
  check_energy(energy);
  constants.validate();
  const double dx = options.dx;
  if (!(dx > 0.0)) throw Error(ErrorKind::invalid_argument, "dx must be positive");
  if (std::abs(samples.dx() - dx) > 1e-15 * dx) {
    throw Error(ErrorKind::grid_mismatch, "potential samples were taken with a different dx");
  }
  const double kc = constants.wavenumber(energy);
  if (!(kc * dx < options.max_k_dx)) {
    throw Error(ErrorKind::grid_too_coarse,
                "K dx = " + std::to_string(kc * dx) + " exceeds " + std::to_string(options.max_k_dx));
  }
  const double k = 2.0 * std::asin(0.5 * kc * dx) / dx;
  const cplx den = std::exp(I * k * dx) - std::exp(-I * k * dx);
  if (std::abs(den) < 1e-12) throw Error(ErrorKind::degenerate_extraction, "K dx is a multiple of pi");

  const std::ptrdiff_t m = fd_half_count(samples.support(), kc, options);
  if (m > samples.half_count()) {
    throw Error(ErrorKind::grid_mismatch, "potential samples do not span the solver grid");
  }
  const std::size_t count = static_cast<std::size_t>(2 * m + 1);
  const double f0 = constants.kinetic_scale() * dx * dx;
  // Propagation runs from the seed end; index j counts steps away from it.
  const int dir = incidence == Incidence::from_left ? -1 : +1;  // direction of travel in n
  auto n_of = [&](std::size_t j) { return dir < 0 ? m - static_cast<std::ptrdiff_t>(j) : -m + static_cast<std::ptrdiff_t>(j); };
  const double sgn = static_cast<double>(static_cast<int>(incidence));  // seed exp(i sgn K x)

  std::vector<cplx> psi;
  if (options.store_psi) psi.resize(count);
  cplx p_prev = std::exp(I * sgn * k * static_cast<double>(n_of(0)) * dx);
  cplx p_cur = std::exp(I * sgn * k * static_cast<double>(n_of(1)) * dx);
  if (options.store_psi) {
    psi[0] = p_prev;
    psi[1] = p_cur;
  }
  // Carrying the first difference avoids the cancellation in 2 p_cur - p_prev.
  cplx diff = p_cur - p_prev;
  for (std::size_t j = 1; j + 1 < count; ++j) {
    const double f = f0 * (energy - samples.at(n_of(j)));
    diff -= f * p_cur;
    p_prev = p_cur;
    p_cur += diff;
    if (options.store_psi) psi[j + 1] = p_cur;
  }
  // p_cur sits at the far end n_e, p_prev one step back at n_e - dir.
  const double x_in = static_cast<double>(n_of(count - 2)) * dx;
  const cplx a = (std::exp(I * k * dx) * p_prev - p_cur) / den / std::exp(I * sgn * k * x_in);
  const cplx b = -(std::exp(-I * k * dx) * p_prev - p_cur) / den / std::exp(-I * sgn * k * x_in);
  if (!(std::abs(a) > 0.0) || !std::isfinite(std::abs(a)) || !std::isfinite(std::abs(b))) {
    throw Error(ErrorKind::degenerate_extraction, "extraction produced a non-finite amplitude");
  }

  ScatteringSolution s;
  s.energy = energy;
  s.wavenumber = kc;
  s.lattice_wavenumber = k;
  s.incidence = incidence;
  s.transmission = 1.0 / a;
  s.reflection = b / a;
  s.constants = constants;
  s.support = samples.support();
  s.dx = dx;
  s.first_index = -m;
  if (options.store_psi) {
    if (dir < 0) std::reverse(psi.begin(), psi.end());
    const cplx inv = 1.0 / a;
    for (auto& v : psi) v *= inv;
    s.psi = std::move(psi);
  }
  return s;
}

namespace {

ScatteringSolution solve_direct(const Potential& potential, const PhysicsConstants& constants, double energy,
                                Incidence incidence, const FdOptions& options) {
  check_energy(energy);
  if (!(options.dx > 0.0)) throw Error(ErrorKind::invalid_argument, "dx must be positive");
  const double k = constants.wavenumber(energy);
  if (!(k * options.dx < options.max_k_dx)) {
    throw Error(ErrorKind::grid_too_coarse,
                "K dx = " + std::to_string(k * options.dx) + " exceeds " + std::to_string(options.max_k_dx));
  }
  const SampledPotential samples(potential, options.dx, fd_half_count(potential.half_range(), k, options));
  return solve_incident(samples, constants, energy, incidence, options);
}

std::optional<SampledPotential> scan_samples(const Potential& potential, const PhysicsConstants& constants,
                                             const EnergyGrid& grid, const FdOptions& options) {
  grid.validate();
  constants.validate();
  if (!(options.dx > 0.0)) throw Error(ErrorKind::invalid_argument, "dx must be positive");
  const double kmin = constants.wavenumber(grid.energies.front());
  return SampledPotential(potential, options.dx, fd_half_count(potential.half_range(), kmin, options));
}

ScanPoint scan_one(const SampledPotential& samples, const PhysicsConstants& constants, double energy,
                   const FdOptions& options, Incidence incidence) {
  const auto s = solve_incident(samples, constants, energy, incidence, options);
  return {energy, s.transmission, s.reflection};
}

}  // namespace

ScatteringSolution solve_right_incident(const Potential& potential, const PhysicsConstants& constants,
                                        double energy, const FdOptions& options) {
  return solve_direct(potential, constants, energy, Incidence::from_left, options);
}

ScatteringSolution solve_left_incident(const Potential& potential, const PhysicsConstants& constants,
                                       double energy, const FdOptions& options) {
  return solve_direct(potential, constants, energy, Incidence::from_right, options);
}

std::vector<ScanPoint> transmission_scan_serial(const Potential& potential, const PhysicsConstants& constants,
                                                const EnergyGrid& grid, const FdOptions& options,
                                                Incidence incidence) {
  FdOptions opts = options;
  opts.store_psi = false;
  const auto samples = scan_samples(potential, constants, grid, opts);
  std::vector<ScanPoint> out;
  out.reserve(grid.size());
  for (double e : grid.energies) {
    try {
      out.push_back(scan_one(*samples, constants, e, opts, incidence));
    } catch (const Error& err) {
      throw ScanError(err, e);
    }
  }
  return out;
}

std::vector<ScanPoint> transmission_scan(const Potential& potential, const PhysicsConstants& constants,
                                         const EnergyGrid& grid, const FdOptions& options, Incidence incidence) {
  FdOptions opts = options;
  opts.store_psi = false;
  const auto samples = scan_samples(potential, constants, grid, opts);
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  std::vector<ScanPoint> out(grid.size());
  std::vector<std::optional<Error>> errors(grid.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double e = grid.energies[static_cast<std::size_t>(i)];
    try {
      out[static_cast<std::size_t>(i)] = scan_one(*samples, constants, e, opts, incidence);
    } catch (const Error& err) {
      errors[static_cast<std::size_t>(i)] = err;
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) throw ScanError(*errors[i], grid.energies[i]);
  }
  return out;
}

WronskianReport wronskian(const ScatteringSolution& right_incident, const ScatteringSolution& left_incident) {
  const auto& p = right_incident;
  const auto& q = left_incident;
  if (p.incidence != Incidence::from_left || q.incidence != Incidence::from_right) {
    throw Error(ErrorKind::invalid_argument, "wronskian takes a left-incident and a right-incident state");
  }
  if (p.energy != q.energy || p.dx != q.dx || p.constants.hbar != q.constants.hbar ||
      p.constants.mass != q.constants.mass) {
    throw Error(ErrorKind::grid_mismatch, "states differ in energy, dx or constants");
  }
  if (!p.has_psi() || !q.has_psi()) throw Error(ErrorKind::missing_wavefunction, "wronskian needs psi samples");
  const std::ptrdiff_t lo = std::max(p.first_index, q.first_index);
  const std::ptrdiff_t hi = std::min(p.last_index(), q.last_index());
  if (hi - lo < 1) throw Error(ErrorKind::grid_mismatch, "states share fewer than two grid points");

  const double c = continuum_normalization(p.constants, p.wavenumber);
  const double c2 = c * c;
  WronskianReport r;
  r.expected = I * p.constants.mass * p.transmission / (std::numbers::pi * p.constants.hbar * p.constants.hbar);
  cplx mean = 0.0;
  for (std::ptrdiff_t n = lo; n < hi; ++n) {
    const cplx w = c2 * (q.psi_at_index(n) * p.psi_at_index(n + 1) - p.psi_at_index(n) * q.psi_at_index(n + 1)) / p.dx;
    r.x.push_back((static_cast<double>(n) + 0.5) * p.dx);
    r.w.push_back(w);
    mean += w;
  }
  mean /= static_cast<double>(r.w.size());
  r.max_constancy_deviation = 0.0;
  r.max_expected_deviation = 0.0;
  for (const auto& w : r.w) {
    r.max_constancy_deviation = std::max(r.max_constancy_deviation, std::abs(w - mean) / std::abs(mean));
    r.max_expected_deviation = std::max(r.max_expected_deviation, std::abs(w - r.expected) / std::abs(r.expected));
  }
  return r;
}

}  // namespace scatter1d
