#include "scatter1d/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "scatter1d/error.hpp"
#include "scatter1d/quadrature.hpp"

namespace scatter1d {

namespace {
constexpr cplx I{0.0, 1.0};
}

double SpectralWavepacket::norm() const {
  double s = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) s += weights[j] * std::norm(F[j]);
  return 2.0 * std::numbers::pi * s;
}

double SpectralWavepacket::mean_momentum() const {
  double s = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) s += weights[j] * std::norm(F[j]) * k[j];
  return 2.0 * std::numbers::pi * s / norm();
}

cplx SpectralWavepacket::amplitude(double kk) const {
  if (kk < k_min() || kk > k_max()) return 0.0;
  const double u = (kk - k0) / sigma;
  return scale * std::exp(-0.25 * u * u);
}

SpectralWavepacket gaussian_packet(double k0, double sigma, int nodes) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::invalid_argument, "sigma must be positive");
  if (nodes < 2) throw Error(ErrorKind::invalid_size, "packet needs at least two nodes");
  if (!(k0 - 5.0 * sigma > 0.0)) {
    throw Error(ErrorKind::support_touches_zero, "k0 - 5 sigma must be positive");
  }
  SpectralWavepacket p;
  p.k0 = k0;
  p.sigma = sigma;
  auto rule = gauss_legendre(nodes, k0 - 6.0 * sigma, k0 + 6.0 * sigma);
  p.k = std::move(rule.nodes);
  p.weights = std::move(rule.weights);
  p.F.resize(p.k.size());
  p.scale = 1.0;
  for (std::size_t j = 0; j < p.k.size(); ++j) p.F[j] = p.amplitude(p.k[j]);
  p.scale = 1.0 / std::sqrt(p.norm());
  for (auto& f : p.F) f *= p.scale;
  return p;
}

std::vector<ScatteringSolution> packet_states(const Potential& potential, const PhysicsConstants& constants,
                                              const SpectralWavepacket& packet, const FdOptions& options) {
  FdOptions opts = options;
  opts.store_psi = true;
  const auto n = static_cast<std::ptrdiff_t>(packet.size());
  std::vector<ScatteringSolution> states(packet.size());
  std::vector<std::optional<Error>> errors(packet.size());
  const std::ptrdiff_t keep = static_cast<std::ptrdiff_t>(std::ceil(potential.half_range() / opts.dx)) + 2;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    try {
      auto s = solve_right_incident(potential, constants, constants.energy(packet.k[ju]), opts);
      // Beyond +-a the closed asymptotic form takes over; keep only the interaction region.
      const std::ptrdiff_t lo = std::max(s.first_index, -keep);
      const std::ptrdiff_t hi = std::min(s.last_index(), keep);
      std::vector<cplx> trimmed(s.psi.begin() + (lo - s.first_index), s.psi.begin() + (hi - s.first_index) + 1);
      s.psi = std::move(trimmed);
      s.first_index = lo;
      states[ju] = std::move(s);
    } catch (const Error& e) {
      errors[ju] = e;
    }
  }
  for (std::size_t j = 0; j < errors.size(); ++j) {
    if (errors[j]) throw ScanError(*errors[j], constants.energy(packet.k[j]));
  }
  return states;
}

cplx stationary_value(const ScatteringSolution& s, double x) {
  if (!s.has_psi()) return s.asymptotic_form(x);
  const double r = x / s.dx;
  const auto first = static_cast<double>(s.first_index), last = static_cast<double>(s.last_index());
  if (r < first || r > last) return s.asymptotic_form(x);
  auto n0 = static_cast<std::ptrdiff_t>(std::floor(r));
  n0 = std::clamp<std::ptrdiff_t>(n0, s.first_index + 1, s.last_index() - 2);
  const double u = r - static_cast<double>(n0);
  if (std::abs(u) < 1e-12) return s.psi_at_index(n0);
  // 4-point Lagrange through n0-1 .. n0+2
  const double w0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
  const double w1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
  const double w2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
  const double w3 = (u + 1.0) * u * (u - 1.0) / 6.0;
  return w0 * s.psi_at_index(n0 - 1) + w1 * s.psi_at_index(n0) + w2 * s.psi_at_index(n0 + 1) +
         w3 * s.psi_at_index(n0 + 2);
}

std::vector<cplx> propagate(const SpectralWavepacket& packet, std::span<const ScatteringSolution> states, double t,
                            std::span<const double> x) {
  if (states.size() != packet.size()) {
    throw Error(ErrorKind::node_mismatch, "expected one stationary state per packet node");
  }
  std::vector<cplx> coeff(packet.size());
  for (std::size_t j = 0; j < packet.size(); ++j) {
    const auto& s = states[j];
    if (s.incidence != Incidence::from_left || std::abs(s.wavenumber - packet.k[j]) > 1e-12 * packet.k[j]) {
      throw Error(ErrorKind::node_mismatch, "state " + std::to_string(j) + " does not match its node");
    }
    const double e = s.constants.energy(packet.k[j]);
    coeff[j] = packet.weights[j] * packet.F[j] * std::exp(-I * e * t / s.constants.hbar);
  }
  std::vector<cplx> out(x.size());
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    cplx sum = 0.0;
    for (std::size_t j = 0; j < coeff.size(); ++j) sum += coeff[j] * stationary_value(states[j], xi);
    out[static_cast<std::size_t>(i)] = sum;
  }
  return out;
}

std::vector<cplx> propagate_free(const SpectralWavepacket& packet, const PhysicsConstants& constants, double t,
                                 std::span<const double> x) {
  std::vector<cplx> coeff(packet.size());
  for (std::size_t j = 0; j < packet.size(); ++j) {
    coeff[j] = packet.weights[j] * packet.F[j] * std::exp(-I * constants.energy(packet.k[j]) * t / constants.hbar);
  }
  std::vector<cplx> out(x.size());
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < coeff.size(); ++j) sum += coeff[j] * std::exp(I * packet.k[j] * x[static_cast<std::size_t>(i)]);
    out[static_cast<std::size_t>(i)] = sum;
  }
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::invalid_size, "grid needs at least two points");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return x;
}

double spatial_norm(std::span<const cplx> psi, double h) {
  std::vector<double> d(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) d[i] = std::norm(psi[i]);
  return trapezoid<double>(d, h);
}

Populations branch_populations(const SpectralWavepacket& packet, std::span<const cplx> transmission,
                               std::span<const cplx> reflection) {
  if (transmission.size() != packet.size() || reflection.size() != packet.size()) {
    throw Error(ErrorKind::node_mismatch, "need T and R at every packet node");
  }
  Populations p;
  for (std::size_t j = 0; j < packet.size(); ++j) {
    const double w = 2.0 * std::numbers::pi * packet.weights[j] * std::norm(packet.F[j]);
    p.transmitted += w * std::norm(transmission[j]);
    p.reflected += w * std::norm(reflection[j]);
  }
  return p;
}

Populations branch_populations(const SpectralWavepacket& packet, std::span<const ScatteringSolution> states) {
  std::vector<cplx> t, r;
  for (const auto& s : states) {
    t.push_back(s.transmission);
    r.push_back(s.reflection);
  }
  return branch_populations(packet, t, r);
}

CoefficientCurve CoefficientCurve::from_states(std::span<const ScatteringSolution> states) {
  std::vector<double> k;
  std::vector<cplx> t, r;
  for (const auto& s : states) {
    k.push_back(s.wavenumber);
    t.push_back(s.transmission);
    r.push_back(s.reflection);
  }
  return {ComplexSpline(k, t), ComplexSpline(k, r)};
}

CoefficientCurve CoefficientCurve::from_scan(std::span<const ScanPoint> scan, const PhysicsConstants& constants) {
  std::vector<double> k;
  std::vector<cplx> t, r;
  for (const auto& p : scan) {
    k.push_back(constants.wavenumber(p.energy));
    t.push_back(p.transmission);
    r.push_back(p.reflection);
  }
  return {ComplexSpline(k, t), ComplexSpline(k, r)};
}

cplx spa_branch(const SpectralWavepacket& packet, const CoefficientCurve& coefficients,
                const PhysicsConstants& constants, double support, double t, double x, SpaBranch branch) {
  const double m = constants.mass, hbar = constants.hbar;
  switch (branch) {
    case SpaBranch::transmitted:
      if (!(x > support && t > 0.0)) throw Error(ErrorKind::branch_domain, "transmitted branch needs x > a, t > 0");
      break;
    case SpaBranch::incoming:
      if (!(x < -support && t < 0.0)) throw Error(ErrorKind::branch_domain, "incoming branch needs x < -a, t < 0");
      break;
    case SpaBranch::reflected:
      if (!(x < -support && t > 0.0)) throw Error(ErrorKind::branch_domain, "reflected branch needs x < -a, t > 0");
      break;
  }
  const double ks = m * x / (hbar * t);
  const double amp = std::sqrt(2.0 * std::numbers::pi * m / (hbar * std::abs(t)));
  const cplx phase = std::exp(I * m * x * x / (2.0 * hbar * t));
  const double q = std::numbers::pi / 4.0;
  switch (branch) {
    case SpaBranch::transmitted: {
      const cplx f = packet.amplitude(ks);
      if (f == 0.0) return 0.0;
      return std::exp(-I * q) * amp * phase * f * coefficients.transmission(ks);
    }
    case SpaBranch::incoming:
      return std::exp(I * q) * amp * phase * packet.amplitude(ks);
    case SpaBranch::reflected: {
      const cplx f = packet.amplitude(-ks);
      if (f == 0.0) return 0.0;
      return std::exp(-I * q) * amp * phase * f * coefficients.reflection(-ks);
    }
  }
  return 0.0;
}

double momentum_sign(std::span<const cplx> psi) {
  const std::size_t n = psi.size();
  if (n < 4) throw Error(ErrorKind::invalid_size, "momentum sign test needs at least four samples");
  double plus = 0.0, minus = 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::ptrdiff_t q = -half; q <= half; ++q) {
    if (q == 0) continue;
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += psi[i] * std::exp(-I * two_pi * static_cast<double>(q) * static_cast<double>(i) / static_cast<double>(n));
    }
    (q > 0 ? plus : minus) += std::norm(s);
  }
  return (plus - minus) / (plus + minus);
}

}  // namespace scatter1d
