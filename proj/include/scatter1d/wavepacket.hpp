#pragma once

#include <span>
#include <vector>

#include "scatter1d/constants.hpp"
#include "scatter1d/fdsolver.hpp"
#include "scatter1d/potential.hpp"
#include "scatter1d/spline.hpp"

namespace scatter1d {

/// Momentum amplitude F(k) on a Gauss-Legendre grid of positive k.
struct SpectralWavepacket {
  std::vector<double> k;
  std::vector<double> weights;
  std::vector<cplx> F;
  double k0 = 0.0;
  double sigma = 0.0;
  double scale = 1.0;  // F(k) = scale * exp(-(k - k0)^2 / (4 sigma^2))

  std::size_t size() const { return k.size(); }
  /// 2 pi sum w |F|^2
  double norm() const;
  double mean_momentum() const;
  /// F at an arbitrary momentum (zero outside the node interval).
  cplx amplitude(double k) const;
  double k_min() const { return k0 - 6.0 * sigma; }
  double k_max() const { return k0 + 6.0 * sigma; }
};

/// F(k) proportional to exp(-(k - k0)^2 / (4 sigma^2)) on [k0 - 6 sigma, k0 + 6 sigma].
/// Throws support_touches_zero unless k0 - 5 sigma > 0.
SpectralWavepacket gaussian_packet(double k0, double sigma, int nodes);

/// Left-incident FD states at every packet node (parallel over nodes).
std::vector<ScatteringSolution> packet_states(const Potential& potential, const PhysicsConstants& constants,
                                              const SpectralWavepacket& packet, const FdOptions& options = {});

/// psi-tilde_k(x): grid samples (4-point Lagrange) inside the stored grid, closed
/// asymptotic form beyond it.
cplx stationary_value(const ScatteringSolution& state, double x);

/// psi(t, x) = sum_j w_j F_j exp(-i hbar k_j^2 t / 2m) psi-tilde_{k_j}(x); parallel over x.
std::vector<cplx> propagate(const SpectralWavepacket& packet, std::span<const ScatteringSolution> states,
                            double t, std::span<const double> x);

/// Free evolution of the same F (psi-tilde = exp(ikx)).
std::vector<cplx> propagate_free(const SpectralWavepacket& packet, const PhysicsConstants& constants,
                                 double t, std::span<const double> x);

/// Uniform grid of n points from lo to hi inclusive.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// Trapezoid of |psi|^2 on a uniform grid with spacing h.
double spatial_norm(std::span<const cplx> psi, double h);

struct Populations {
  double transmitted = 0.0;
  double reflected = 0.0;
  double sum() const { return transmitted + reflected; }
};

/// 2 pi sum w |F|^2 |T|^2 and 2 pi sum w |F|^2 |R|^2; T, R given per node.
Populations branch_populations(const SpectralWavepacket& packet, std::span<const cplx> transmission,
                               std::span<const cplx> reflection);
Populations branch_populations(const SpectralWavepacket& packet, std::span<const ScatteringSolution> states);

enum class SpaBranch { transmitted, incoming, reflected };

/// T(k), R(k) splined over a set of momenta (a scan curve or the packet nodes).
struct CoefficientCurve {
  ComplexSpline transmission;
  ComplexSpline reflection;

  static CoefficientCurve from_states(std::span<const ScatteringSolution> states);
  static CoefficientCurve from_scan(std::span<const ScanPoint> scan, const PhysicsConstants& constants);
};

/// Leading stationary-phase term at k_s = m x / (hbar t):
///   transmitted (x > a, t > 0): e^{-i pi/4} sqrt(2 pi m / hbar t) e^{i m x^2 / 2 hbar t} F(k_s) T(k_s)
///   incoming (x < -a, t < 0):   e^{+i pi/4} sqrt(2 pi m / hbar |t|) e^{i m x^2 / 2 hbar t} F(k_s)
///   reflected (x < -a, t > 0):  e^{-i pi/4} sqrt(2 pi m / hbar t) e^{i m x^2 / 2 hbar t} F(-k_s) R(-k_s)
/// Zero when the stationary momentum is outside the packet support.
cplx spa_branch(const SpectralWavepacket& packet, const CoefficientCurve& coefficients,
                const PhysicsConstants& constants, double support, double t, double x, SpaBranch branch);

/// Sign of the momentum content of uniformly spaced samples: (P+ - P-) / (P+ + P-)
/// with P+- the DFT power at positive / negative frequencies (zero frequency dropped).
double momentum_sign(std::span<const cplx> psi);

}  // namespace scatter1d
