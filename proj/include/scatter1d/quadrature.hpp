#pragma once

#include <complex>
#include <span>
#include <vector>

namespace scatter1d {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi] (Newton iteration on P_n).
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Legendre P_0..P_{n-1} and their derivatives at u in [-1, 1].
void legendre_values(int n, double u, std::span<double> p, std::span<double> dp);

/// Trapezoid rule for uniformly spaced samples.
template <typename T>
T trapezoid(std::span<const T> f, double h) {
  if (f.size() < 2) return T{};
  T sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * h;
}

}  // namespace scatter1d
