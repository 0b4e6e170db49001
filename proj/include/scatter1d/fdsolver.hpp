#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "scatter1d/constants.hpp"
#include "scatter1d/potential.hpp"

namespace scatter1d {

using cplx = std::complex<double>;

/// Ordered list of positive energies.
struct EnergyGrid {
  std::vector<double> energies;

  /// n equally spaced energies from emin to emax inclusive.
  static EnergyGrid linspace(double emin, double emax, std::size_t n);

  /// Throws invalid_argument unless strictly increasing and positive.
  void validate() const;
  std::size_t size() const { return energies.size(); }
};

struct FdOptions {
  double dx = 1e-3;
  /// Padding beyond +-a in wavelengths; 2 wavelengths = 4 pi / K.
  double pad_wavelengths = 2.0;
  bool store_psi = true;
  /// K dx must stay below this.
  double max_k_dx = 0.5;
};

/// Incidence direction: +1 means the incoming wave e^{+iKx} travels towards +x.
enum class Incidence : int { from_left = +1, from_right = -1 };

/// Stationary scattering state with T, R and (optionally) samples of the
/// unit-amplitude wavefunction on the uniform grid x_n = n dx.
struct ScatteringSolution {
  double energy = 0.0;
  double wavenumber = 0.0;
  // q with cos(q dx) = 1 - K^2 dx^2 / 2: the recursion propagates e^{+-iqx} exactly outside the support.
  double lattice_wavenumber = 0.0;
  Incidence incidence = Incidence::from_left;
  cplx transmission;
  cplx reflection;
  PhysicsConstants constants;
  double support = 0.0;  // half range a of the potential
  double dx = 0.0;
  std::ptrdiff_t first_index = 0;  // psi[i] lives at x = (first_index + i) dx
  std::vector<cplx> psi;

  int eta() const { return static_cast<int>(incidence); }
  bool has_psi() const { return !psi.empty(); }
  std::ptrdiff_t last_index() const {
    return first_index + static_cast<std::ptrdiff_t>(psi.size()) - 1;
  }
  double x_at(std::size_t i) const { return static_cast<double>(first_index + static_cast<std::ptrdiff_t>(i)) * dx; }
  /// Sample at grid index n (x = n dx); throws grid_mismatch outside the stored grid.
  cplx psi_at_index(std::ptrdiff_t n) const;
  /// Sample at a position that must coincide with a grid point.
  cplx psi_at(double x) const;
  /// Closed-form asymptotic value outside [-a, a] (or the sample inside).
  cplx asymptotic_form(double x) const;

  double unitarity_residual() const {
    return std::abs(std::norm(transmission) + std::norm(reflection) - 1.0);
  }
};

/// V sampled at x_n = n dx for |n| <= half_count; zero outside the declared support.
class SampledPotential {
 public:
  SampledPotential(const Potential& potential, double dx, std::ptrdiff_t half_count);

  double dx() const { return dx_; }
  std::ptrdiff_t half_count() const { return half_count_; }
  double support() const { return support_; }
  double at(std::ptrdiff_t n) const { return values_[static_cast<std::size_t>(n + half_count_)]; }

 private:
  double dx_;
  double support_;
  std::ptrdiff_t half_count_;
  std::vector<double> values_;
};

/// Number of grid points on each side of zero needed for energy E.
std::ptrdiff_t fd_half_count(double support, double wavenumber, const FdOptions& options);

/// Incoming e^{+iKx} from the left: seeds e^{+iKx} at the two rightmost points,
/// propagates leftwards and extracts A_E, B_E from the two leftmost points.
ScatteringSolution solve_right_incident(const Potential& potential, const PhysicsConstants& constants,
                                        double energy, const FdOptions& options = {});

/// Mirror image: incoming e^{-iKx} from the right.
ScatteringSolution solve_left_incident(const Potential& potential, const PhysicsConstants& constants,
                                       double energy, const FdOptions& options = {});

/// Same as the two above but reuses precomputed potential samples (must span the grid).
ScatteringSolution solve_incident(const SampledPotential& samples, const PhysicsConstants& constants,
                                  double energy, Incidence incidence, const FdOptions& options);

struct ScanPoint {
  double energy;
  cplx transmission;
  cplx reflection;

  double t2() const { return std::norm(transmission); }
  double r2() const { return std::norm(reflection); }
  double unitarity_residual() const { return std::abs(t2() + r2() - 1.0); }
};

/// Serial reference implementation of the energy scan.
std::vector<ScanPoint> transmission_scan_serial(const Potential& potential, const PhysicsConstants& constants,
                                                const EnergyGrid& grid, const FdOptions& options = {},
                                                Incidence incidence = Incidence::from_left);

/// OpenMP-parallel scan over energies; results in input order, bitwise equal to the serial one.
std::vector<ScanPoint> transmission_scan(const Potential& potential, const PhysicsConstants& constants,
                                         const EnergyGrid& grid, const FdOptions& options = {},
                                         Incidence incidence = Incidence::from_left);

struct WronskianReport {
  std::vector<double> x;  // midpoints of adjacent grid points
  std::vector<cplx> w;
  cplx expected;                      // i m T / (pi hbar^2)
  double max_constancy_deviation;     // max |w - w_mean| / |w_mean|
  double max_expected_deviation;      // max |w - expected| / |expected|
};

/// Wronskian of the normalized psi_{E(-1)}, psi_{E(+1)} pair, evaluated with the
/// two-point (Casoratian) difference so that it is constant for the discrete equation.
WronskianReport wronskian(const ScatteringSolution& right_incident, const ScatteringSolution& left_incident);

/// sqrt(m / (2 pi hbar^2 K)), the factor between psi and the unit-amplitude psi-tilde.
double continuum_normalization(const PhysicsConstants& constants, double wavenumber);

}  // namespace scatter1d
