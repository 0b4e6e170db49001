#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "scatter1d/constants.hpp"
#include "scatter1d/fdsolver.hpp"
#include "scatter1d/potential.hpp"

namespace scatter1d {

// The companion eigensolve and everything downstream of the normalization runs in
// 50-digit arithmetic: pseudostates near exceptional points are nearly
// self-orthogonal in the bilinear form, so their normalized vectors are huge and the
// dyadic sums cancel by up to 30 digits.
using quad = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                           boost::multiprecision::et_off>;
using cquad = std::complex<quad>;
using QuadMatrix = Eigen::Matrix<quad, Eigen::Dynamic, Eigen::Dynamic>;
using CQuadMatrix = Eigen::Matrix<cquad, Eigen::Dynamic, Eigen::Dynamic>;
using CQuadVector = Eigen::Matrix<cquad, Eigen::Dynamic, 1>;

enum class BasisKind { legendre, fourier };

const char* to_string(BasisKind kind) noexcept;
BasisKind basis_kind_from_string(const std::string& name);

/// Real orthonormal basis on [-a, a].
/// legendre: b_v(x) = sqrt((2v+1)/(2a)) P_v(x/a).
/// fourier: 1/sqrt(2a), then cos(j pi x / a)/sqrt(a), sin(j pi x / a)/sqrt(a) alternating.
/// The real cos/sin pairs span the same space as exp(i v pi x / a), |v| <= N/2.
class BasisSet {
 public:
  BasisSet(BasisKind kind, double a, int size);

  BasisKind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  int size() const noexcept { return n_; }

  /// b_v(x) and b_v'(x) for all v; |x| <= a.
  void evaluate(double x, std::span<double> values, std::span<double> derivatives) const;
  std::vector<double> values(double x) const;
  std::vector<double> derivatives(double x) const;

  /// Gram matrix by Gauss-Legendre quadrature with `nodes` points.
  Eigen::MatrixXd gram(int nodes) const;

 private:
  BasisKind kind_;
  double a_;
  int n_;
};

BasisSet build_basis(BasisKind kind, double a, int size);

struct SiegertMatrices {
  Eigen::MatrixXd H;
  Eigen::MatrixXd L;
  Eigen::MatrixXd A;  // (2m/hbar^2) H
  Eigen::MatrixXd B;  // -(2m/hbar^2) L
};

/// Default tolerance for |V(+-a)| in build_matrices.
inline constexpr double kDefaultBoxTolerance = 1e-6;

/// H from Gauss-Legendre quadrature with 2N+16 nodes, L from the boundary dyads.
/// Throws support_exceeds_box if |V(+-a)| > box_tolerance.
SiegertMatrices build_matrices(const Potential& potential, const PhysicsConstants& constants,
                               const BasisSet& basis, double box_tolerance = kDefaultBoxTolerance);

/// c is normalized so that 2 lambda c^T c + c^T B c = 2 lambda. Every dyadic sum is
/// evaluated through d = c / sqrt(lambda) (c c^T = lambda d d^T), which stays finite
/// when lambda tends to zero.
struct SiegertState {
  cquad lambda;
  CQuadVector c;
  CQuadVector d;
  cquad phi_minus;    // phi(-a) from c
  cquad phi_plus;     // phi(+a) from c
  cquad phid_minus;   // same from d
  cquad phid_plus;
  double consistency = 0.0;  // |c_lower - lambda c_upper| / |c_lower| from the raw eigenvector

  cplx lambda_d() const { return {static_cast<double>(lambda.real()), static_cast<double>(lambda.imag())}; }
};

struct QepOptions {
  double lambda_zero_tol = 1e-10;
  /// Keep |lambda| < lambda_zero_tol states (their dyads have a finite limit) instead of
  /// throwing zero_eigenvalue. A boxed V = 0 has an exact lambda = 0 state.
  bool allow_zero_modes = false;
  double degeneracy_tol = 1e-10;
  double residual_tol = 1e-8;
};

class SiegertSpectrum {
 public:
  SiegertSpectrum(BasisSet basis, PhysicsConstants constants, QuadMatrix a_matrix,
                  QuadMatrix b_matrix, std::vector<SiegertState> states);

  const BasisSet& basis() const { return basis_; }
  const PhysicsConstants& constants() const { return constants_; }
  const QuadMatrix& A() const { return a_; }
  const QuadMatrix& B() const { return b_; }
  const std::vector<SiegertState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }

  cplx lambda(std::size_t n) const { return states_[n].lambda_d(); }
  /// k = -i lambda
  cplx k(std::size_t n) const;
  /// E = -hbar^2 lambda^2 / (2m)
  cplx energy(std::size_t n) const;
  /// phi_n(x) = sum_v c_v b_v(x)
  cplx phi(std::size_t n, double x) const;

 private:
  BasisSet basis_;
  PhysicsConstants constants_;
  QuadMatrix a_, b_;
  std::vector<SiegertState> states_;
};

/// All 2N eigenpairs of the companion matrix [[0, I], [-A, -B]], normalized.
SiegertSpectrum solve_qep(const SiegertMatrices& matrices, const BasisSet& basis,
                          const PhysicsConstants& constants, const QepOptions& options = {});

/// Convenience: basis + matrices + solve.
SiegertSpectrum siegert_spectrum(const Potential& potential, const PhysicsConstants& constants,
                                 BasisKind kind, double a, int size,
                                 double box_tolerance = kDefaultBoxTolerance,
                                 const QepOptions& options = {});

struct AlgebraReport {
  double qep_residual = 0.0;            // max_n |(A + lB + l^2) c| / |c|
  double normalization_residual = 0.0;  // max_{n,n'} |(l+l')c^T c' + c^T B c' - 2 l delta|
  double closure_inverse = 0.0;         // max |sum c c^T / l|
  double closure_identity = 0.0;        // max |sum c c^T - 2I|
  double closure_b = 0.0;               // max |sum l c c^T + 2B|
  double consistency = 0.0;             // max raw eigenvector consistency
  double conjugation = 0.0;             // multiset distance between spectrum and its conjugate
};

AlgebraReport algebra_report(const SiegertSpectrum& spectrum);

/// |M(l) sum c c^T / (2 l_n (l - l_n)) - I| in max norm, M(l) = A + lB + l^2 I.
double m_inverse_residual(const SiegertSpectrum& spectrum, cplx lambda);

/// G^+(x, y) = (m/hbar^2) sum phi(x) phi(y) / (k_n (k - k_n)); |x|, |y| <= a.
cplx siegert_green(const SiegertSpectrum& spectrum, double energy, double x, double y);

/// T = i k exp(-2ika) sum phi(-a) phi(a) / (k_n (k - k_n)).
cplx siegert_transmission(const SiegertSpectrum& spectrum, double energy);

/// Closed form the endpoint Green function should equal: (-i) m/(hbar^2 k) T exp(2ika).
cplx siegert_endpoint_closed_form(const SiegertSpectrum& spectrum, double energy, cplx transmission);

enum class StateClass { bound, antibound, resonance, other };

const char* to_string(StateClass c) noexcept;

struct Classification {
  std::vector<StateClass> classes;  // per state
  std::vector<std::size_t> bound;
  std::vector<std::size_t> antibound;
  /// (resonance index with Re k > 0, its mirror -k* index or npos if not found)
  std::vector<std::pair<std::size_t, std::size_t>> resonances;
  std::vector<std::size_t> other;
};

struct ClassifyOptions {
  double axis_scale = 1e-6;   // tol_axis = axis_scale * (1 + |k|)
  double mirror_tol = 1e-8;   // relative tolerance for pairing k with -k*
};

Classification classify_spectrum(const SiegertSpectrum& spectrum, const ClassifyOptions& options = {});

struct ResonanceRecord {
  std::size_t index = 0;
  double e_res = 0.0;
  double gamma = 0.0;
  cplx k;
  double q = 0.0;
  double fit_rms = 0.0;
  std::size_t window_points = 0;

  /// Q (Gamma/2)^2 / ((E - E_res)^2 + (Gamma/2)^2)
  double lorentzian(double energy) const;
};

/// Breit-Wigner record for state `index` against an FD curve of |T|^2.
/// The curve must cover [E_res - 5 Gamma, E_res + 5 Gamma]; the rms is taken over the
/// curve points inside +-2 Gamma (at least min_window_points of them).
ResonanceRecord breit_wigner_report(const SiegertSpectrum& spectrum, std::span<const ScanPoint> fd_curve,
                                    std::size_t index, std::size_t min_window_points = 5);

/// Same record from raw values: the complex energy, k, and phi(-a) phi(a) of one state.
ResonanceRecord breit_wigner_from_values(cplx energy, cplx k, cplx phi_product, const PhysicsConstants& constants,
                                         std::span<const ScanPoint> fd_curve, std::size_t min_window_points = 5);

/// Q = |hbar^2 k_n / m * 2 / Gamma * phi(-a) phi(a)|^2
double breit_wigner_q(const SiegertSpectrum& spectrum, std::size_t index);
double breit_wigner_q(cplx energy, cplx k, cplx phi_product, const PhysicsConstants& constants);

/// phi(-a) phi(a) of state n
cplx boundary_product(const SiegertSpectrum& spectrum, std::size_t index);

}  // namespace scatter1d
