#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace scatter1d {

inline constexpr double kDefaultRangeThreshold = 1e-12;

/// Search configuration for detect_range.
struct RangeSearch {
  double step = 1.0 / 64.0;  // exact in binary so integer multiples hit round numbers
  double bound = 256.0;
};

/// Smallest sampled a with |V(x)| < threshold for every sampled |x| >= a.
/// Throws range_not_found when the criterion fails at the search bound.
double detect_range(const std::function<double(double)>& eval, double threshold,
                    const RangeSearch& search = {});

/// Finite-range potential: an evaluator plus the half-width a of its support [-a, a].
/// Immutable; copies share the evaluator.
class Potential {
 public:
  using Eval = std::function<double(double)>;

  Potential(std::string tag, Eval eval, double half_range);

  double operator()(double x) const { return (*eval_)(x); }
  double half_range() const noexcept { return half_range_; }
  const std::string& tag() const noexcept { return tag_; }
  bool is_zero() const noexcept { return zero_; }

  /// Same shape multiplied by factor; the support is kept.
  Potential scaled(double factor) const;
  /// Same evaluator with a different declared support.
  Potential with_half_range(double a) const;

 private:
  std::string tag_;
  std::shared_ptr<const Eval> eval_;
  double half_range_;
  bool zero_ = false;

  friend Potential zero_potential();
};

/// V(x) = (0.5 x^2 - 0.8) exp(-0.1 x^2); support from detect_range(threshold).
Potential jolanta_potential(double range_threshold = kDefaultRangeThreshold);

double jolanta_value(double x);

Potential zero_potential();

/// V0 for |x| < half_width, zero elsewhere.
Potential square_barrier(double height, double half_width);

/// Asymmetric test potential: depth -well_depth on (-width, 0), step_height on [0, width).
Potential step_well(double well_depth, double step_height, double width);

/// Natural cubic spline through the table inside [x_front, x_back], zero outside.
Potential tabulated_potential(std::vector<double> x, std::vector<double> v,
                              double range_threshold = kDefaultRangeThreshold);

/// Reads a CSV with header and columns x,V.
Potential load_tabulated_potential(const std::string& path,
                                   double range_threshold = kDefaultRangeThreshold);

/// Named potentials understood by the CLI: jolanta, zero, barrier.
Potential potential_by_name(const std::string& name, double range_threshold);

}  // namespace scatter1d
