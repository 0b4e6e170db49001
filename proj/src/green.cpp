#include "scatter1d/green.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "scatter1d/error.hpp"

namespace scatter1d {

namespace {

constexpr cplx I{0.0, 1.0};

void check_pair(const ScatteringSolution& plus, const ScatteringSolution& minus) {
  if (plus.incidence != Incidence::from_left || minus.incidence != Incidence::from_right) {
    throw Error(ErrorKind::invalid_argument, "expected (left-incident, right-incident) states");
  }
  if (plus.energy != minus.energy || plus.dx != minus.dx) {
    throw Error(ErrorKind::grid_mismatch, "states differ in energy or dx");
  }
  if (!plus.has_psi() || !minus.has_psi()) {
    throw Error(ErrorKind::missing_wavefunction, "Green function needs psi samples");
  }
  if (std::abs(plus.transmission) < 1e-14) {
    throw Error(ErrorKind::internal_inconsistency, "|T| below 1e-14; the Wronskian forbids this");
  }
}

}  // namespace

cplx free_green(const PhysicsConstants& constants, double energy, double x, double y, Branch branch) {
  if (!(energy > 0.0)) throw Error(ErrorKind::invalid_energy, "energy must be positive");
  const double k = constants.wavenumber(energy);
  const double s = branch == Branch::retarded ? 1.0 : -1.0;
  const double pref = constants.mass / (constants.hbar * constants.hbar * k);
  return -s * I * pref * std::exp(s * I * k * std::abs(x - y));
}

cplx full_green_retarded(const ScatteringSolution& plus, const ScatteringSolution& minus, double x, double y) {
  check_pair(plus, minus);
  const double c = continuum_normalization(plus.constants, plus.wavenumber);
  const cplx pref = -2.0 * std::numbers::pi * I / plus.transmission * (c * c);
  if (x >= y) return pref * minus.psi_at(y) * plus.psi_at(x);
  return pref * plus.psi_at(y) * minus.psi_at(x);
}

cplx full_green_advanced(const ScatteringSolution& plus, const ScatteringSolution& minus, double x, double y) {
  return std::conj(full_green_retarded(plus, minus, x, y));
}

EndpointIdentity green_endpoint_identity(const ScatteringSolution& plus, const ScatteringSolution& minus) {
  check_pair(plus, minus);
  EndpointIdentity r;
  r.a = std::round(plus.support / plus.dx) * plus.dx;
  r.lhs = full_green_retarded(plus, minus, -r.a, r.a);
  const auto& pc = plus.constants;
  const double k = plus.wavenumber;
  r.rhs = -I * pc.mass / (pc.hbar * pc.hbar * k) * plus.transmission *
          std::exp(I * plus.lattice_wavenumber * 2.0 * r.a);
  return r;
}

cplx onshell_t_matrix(const Potential& potential, const ScatteringSolution& solution, int eta) {
  if (eta != 1 && eta != -1) throw Error(ErrorKind::invalid_argument, "eta must be +1 or -1");
  if (solution.incidence != Incidence::from_left) {
    throw Error(ErrorKind::invalid_argument, "on-shell matrix element needs the left-incident state");
  }
  if (!solution.has_psi()) throw Error(ErrorKind::missing_wavefunction, "solution was computed without psi");
  if (potential.is_zero()) return 0.0;
  const double a = solution.support;
  const double k = solution.wavenumber;
  // V vanishes at and beyond +-a on the solver grid, so the end terms of the trapezoid are zero.
  cplx sum = 0.0;
  for (std::size_t i = 0; i < solution.psi.size(); ++i) {
    const double x = solution.x_at(i);
    if (std::abs(x) >= a) continue;
    sum += std::exp(-static_cast<double>(eta) * I * solution.lattice_wavenumber * x) * potential(x) * solution.psi[i];
  }
  const auto& pc = solution.constants;
  return pc.mass / (2.0 * std::numbers::pi * pc.hbar * pc.hbar * k) * sum * solution.dx;
}

cplx onshell_t_matrix_expected(const ScatteringSolution& solution, int eta) {
  const cplx f = I / (2.0 * std::numbers::pi);
  return eta == 1 ? f * (solution.transmission - 1.0) : f * solution.reflection;
}

cplx born_transmission(const Potential& potential, const PhysicsConstants& constants, double energy, int order,
                       int points) {
  if (order != 1 && order != 2) throw Error(ErrorKind::order_unsupported, "Born order must be 1 or 2");
  if (!(energy > 0.0)) throw Error(ErrorKind::invalid_energy, "energy must be positive");
  if (points < 3) throw Error(ErrorKind::invalid_size, "Born grid needs at least three points");
  if (potential.is_zero() || potential.half_range() == 0.0) return 1.0;
  const double k = constants.wavenumber(energy);
  const double a = potential.half_range();
  const double h = 2.0 * a / (points - 1);
  const auto n = static_cast<std::size_t>(points);
  std::vector<double> x(n), v(n), w(n, h);
  w.front() = w.back() = 0.5 * h;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = -a + h * static_cast<double>(i);
    v[i] = potential(x[i]);
  }
  const double g = constants.mass / (constants.hbar * constants.hbar * k);
  std::vector<cplx> psi(n);
  for (std::size_t i = 0; i < n; ++i) psi[i] = std::exp(I * k * x[i]);
  if (order == 2) {
    std::vector<cplx> corr(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        s += w[j] * std::exp(I * k * std::abs(x[static_cast<std::size_t>(i)] - x[j])) * v[j] * std::exp(I * k * x[j]);
      }
      corr[static_cast<std::size_t>(i)] = -I * g * s;
    }
    for (std::size_t i = 0; i < n; ++i) psi[i] += corr[i];
  }
  cplx integral = 0.0;
  for (std::size_t i = 0; i < n; ++i) integral += w[i] * std::exp(-I * k * x[i]) * v[i] * psi[i];
  const cplx matel = g / (2.0 * std::numbers::pi) * integral;
  return 1.0 - 2.0 * std::numbers::pi * I * matel;
}

JumpCheck free_green_ode_check(const PhysicsConstants& constants, double energy, double y, double h) {
  auto g = [&](double x) { return free_green(constants, energy, x, y); };
  JumpCheck r;
  r.jump = (g(y + h) - g(y)) / h - (g(y) - g(y - h)) / h;
  r.expected = constants.kinetic_scale();
  const double k = constants.wavenumber(energy);
  r.ode_residual = 0.0;
  for (int j = 2; j <= 200; ++j) {
    for (double s : {-1.0, 1.0}) {
      const double x = y + s * j * h;
      const cplx d2 = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
      r.ode_residual = std::max(r.ode_residual, std::abs(d2 + k * k * g(x)));
    }
  }
  return r;
}

}  // namespace scatter1d
