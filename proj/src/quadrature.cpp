#include "scatter1d/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "scatter1d/error.hpp"

namespace scatter1d {

void legendre_values(int n, double u, std::span<double> p, std::span<double> dp) {
  if (n <= 0) return;
  p[0] = 1.0;
  dp[0] = 0.0;
  if (n == 1) return;
  p[1] = u;
  dp[1] = 1.0;
  for (int v = 1; v + 1 < n; ++v) {
    p[v + 1] = ((2.0 * v + 1.0) * u * p[v] - v * p[v - 1]) / (v + 1.0);
    // P'_{v+1} = P'_{v-1} + (2v+1) P_v, valid at the endpoints too
    dp[v + 1] = dp[v - 1] + (2.0 * v + 1.0) * p[v];
  }
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw Error(ErrorKind::invalid_size, "quadrature needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double u = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * u * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (u * p0 - p1) / (u * u - 1.0);
      const double du = p0 / dp;
      u -= du;
      if (std::abs(du) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * u * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (u * p0 - p1) / (u * u - 1.0);
    }
    const double w = 2.0 / ((1.0 - u * u) * dp * dp);
    rule.nodes[i] = mid - half * u;
    rule.nodes[n - 1 - i] = mid + half * u;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

}  // namespace scatter1d
