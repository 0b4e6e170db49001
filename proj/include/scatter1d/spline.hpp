#pragma once

#include <complex>
#include <span>
#include <vector>

namespace scatter1d {

/// Natural cubic spline on strictly increasing, not necessarily uniform, knots.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

/// Real and imaginary parts splined independently.
class ComplexSpline {
 public:
  ComplexSpline() = default;
  ComplexSpline(const std::vector<double>& x, std::span<const std::complex<double>> y);

  std::complex<double> operator()(double x) const { return {re_(x), im_(x)}; }
  double front() const { return re_.front(); }
  double back() const { return re_.back(); }

 private:
  CubicSpline re_, im_;
};

}  // namespace scatter1d
