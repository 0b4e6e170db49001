#include "scatter1d/siegert.hpp"

#include <cmath>
#include <numbers>

#include "scatter1d/error.hpp"
#include "scatter1d/quadrature.hpp"

namespace scatter1d {

const char* to_string(BasisKind kind) noexcept {
  return kind == BasisKind::legendre ? "legendre" : "fourier";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "legendre") return BasisKind::legendre;
  if (name == "fourier") return BasisKind::fourier;
  throw Error(ErrorKind::invalid_argument, "unknown basis '" + name + "'");
}

BasisSet::BasisSet(BasisKind kind, double a, int size) : kind_(kind), a_(a), n_(size) {
  if (size < 2) throw Error(ErrorKind::invalid_size, "basis size must be at least 2");
  if (!(a > 0.0)) throw Error(ErrorKind::invalid_argument, "box half-width must be positive");
}

BasisSet build_basis(BasisKind kind, double a, int size) { return BasisSet(kind, a, size); }

void BasisSet::evaluate(double x, std::span<double> values, std::span<double> derivatives) const {
  if (kind_ == BasisKind::legendre) {
    legendre_values(n_, x / a_, values, derivatives);
    for (int v = 0; v < n_; ++v) {
      const double s = std::sqrt((2.0 * v + 1.0) / (2.0 * a_));
      values[v] *= s;
      derivatives[v] *= s / a_;
    }
    return;
  }
  values[0] = 1.0 / std::sqrt(2.0 * a_);
  derivatives[0] = 0.0;
  const double s = 1.0 / std::sqrt(a_);
  for (int v = 1; v < n_; ++v) {
    const int j = (v + 1) / 2;
    const double w = j * std::numbers::pi / a_;
    if (v % 2 == 1) {
      values[v] = s * std::cos(w * x);
      derivatives[v] = -s * w * std::sin(w * x);
    } else {
      values[v] = s * std::sin(w * x);
      derivatives[v] = s * w * std::cos(w * x);
    }
  }
}

std::vector<double> BasisSet::values(double x) const {
  std::vector<double> v(n_), d(n_);
  evaluate(x, v, d);
  return v;
}

std::vector<double> BasisSet::derivatives(double x) const {
  std::vector<double> v(n_), d(n_);
  evaluate(x, v, d);
  return d;
}

Eigen::MatrixXd BasisSet::gram(int nodes) const {
  const auto rule = gauss_legendre(nodes, -a_, a_);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n_, n_);
  Eigen::VectorXd v(n_), d(n_);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    evaluate(rule.nodes[q], {v.data(), static_cast<std::size_t>(n_)}, {d.data(), static_cast<std::size_t>(n_)});
    g.noalias() += rule.weights[q] * v * v.transpose();
  }
  return g;
}

SiegertMatrices build_matrices(const Potential& potential, const PhysicsConstants& constants,
                               const BasisSet& basis, double box_tolerance) {
  constants.validate();
  const double a = basis.a();
  const int n = basis.size();
  if (!potential.is_zero()) {
    const double vm = std::abs(potential(-a)), vp = std::abs(potential(a));
    if (vm > box_tolerance || vp > box_tolerance) {
      throw Error(ErrorKind::support_exceeds_box,
                  "|V(+-a)| = " + std::to_string(std::max(vm, vp)) + " at a = " + std::to_string(a));
    }
  }
  // The Fourier kinetic integrand oscillates at up to N pi / a; give it more nodes.
  const int nq = basis.kind() == BasisKind::legendre ? 2 * n + 16 : 4 * n + 32;
  const auto rule = gauss_legendre(nq, -a, a);
  const double t = constants.hbar * constants.hbar / (2.0 * constants.mass);

  SiegertMatrices m;
  m.H = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd v(n), d(n);
  const auto nn = static_cast<std::size_t>(n);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double x = rule.nodes[q];
    basis.evaluate(x, {v.data(), nn}, {d.data(), nn});
    const double vx = potential.is_zero() ? 0.0 : potential(x);
    m.H.noalias() += rule.weights[q] * (t * d * d.transpose() + vx * v * v.transpose());
  }
  m.H = (0.5 * (m.H + m.H.transpose())).eval();

  Eigen::VectorXd bp(n), bm(n);
  basis.evaluate(a, {bp.data(), nn}, {d.data(), nn});
  basis.evaluate(-a, {bm.data(), nn}, {d.data(), nn});
  m.L = t * (bp * bp.transpose() + bm * bm.transpose());

  const double s = constants.kinetic_scale();
  m.A = s * m.H;
  m.B = -s * m.L;
  return m;
}

}  // namespace scatter1d
