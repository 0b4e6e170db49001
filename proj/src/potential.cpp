#include "scatter1d/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "scatter1d/error.hpp"
#include "scatter1d/spline.hpp"

namespace scatter1d {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_energy: return "invalid-energy";
    case ErrorKind::grid_too_coarse: return "grid-too-coarse";
    case ErrorKind::degenerate_extraction: return "degenerate-extraction";
    case ErrorKind::range_not_found: return "range-not-found";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::missing_wavefunction: return "missing-wavefunction";
    case ErrorKind::internal_inconsistency: return "internal-inconsistency";
    case ErrorKind::order_unsupported: return "order-unsupported";
    case ErrorKind::invalid_size: return "invalid-size";
    case ErrorKind::support_exceeds_box: return "support-exceeds-box";
    case ErrorKind::eigensolve_failure: return "eigensolve-failure";
    case ErrorKind::zero_eigenvalue: return "zero-eigenvalue";
    case ErrorKind::defective_pencil: return "defective-pencil";
    case ErrorKind::out_of_box: return "out-of-box";
    case ErrorKind::pole_proximity: return "pole-proximity";
    case ErrorKind::window_uncovered: return "window-uncovered";
    case ErrorKind::support_touches_zero: return "support-touches-zero";
    case ErrorKind::node_mismatch: return "node-mismatch";
    case ErrorKind::branch_domain: return "branch-domain";
    case ErrorKind::io_error: return "io-error";
    case ErrorKind::config_error: return "config-error";
  }
  return "unknown";
}

double detect_range(const std::function<double(double)>& eval, double threshold, const RangeSearch& search) {
  if (!(threshold > 0.0)) throw Error(ErrorKind::invalid_argument, "range threshold must be positive");
  if (!(search.step > 0.0) || !(search.bound > search.step)) {
    throw Error(ErrorKind::invalid_argument, "bad range search configuration");
  }
  const auto steps = static_cast<long>(std::floor(search.bound / search.step));
  auto above = [&](long i) {
    const double x = static_cast<double>(i) * search.step;
    return std::abs(eval(x)) >= threshold || std::abs(eval(-x)) >= threshold;
  };
  if (above(steps)) {
    throw Error(ErrorKind::range_not_found,
                "|V| >= threshold at the search bound " + std::to_string(search.bound));
  }
  for (long i = steps - 1; i >= 0; --i) {
    if (above(i)) return static_cast<double>(i + 1) * search.step;
  }
  return 0.0;
}

Potential::Potential(std::string tag, Eval eval, double half_range)
    : tag_(std::move(tag)), eval_(std::make_shared<const Eval>(std::move(eval))), half_range_(half_range) {
  if (!(half_range >= 0.0) || !std::isfinite(half_range)) {
    throw Error(ErrorKind::invalid_argument, "half range must be finite and non-negative");
  }
}

Potential Potential::scaled(double factor) const {
  auto inner = eval_;
  std::ostringstream tag;
  tag << factor << '*' << tag_;
  Potential p(tag.str(), [inner, factor](double x) { return factor * (*inner)(x); }, half_range_);
  p.zero_ = zero_ || factor == 0.0;
  return p;
}

Potential Potential::with_half_range(double a) const {
  Potential p = *this;
  if (!(a >= 0.0)) throw Error(ErrorKind::invalid_argument, "half range must be non-negative");
  p.half_range_ = a;
  return p;
}

double jolanta_value(double x) { return (0.5 * x * x - 0.8) * std::exp(-0.1 * x * x); }

Potential jolanta_potential(double range_threshold) {
  return Potential("jolanta", jolanta_value, detect_range(jolanta_value, range_threshold));
}

Potential zero_potential() {
  Potential p("zero", [](double) { return 0.0; }, 0.0);
  p.zero_ = true;
  return p;
}

Potential square_barrier(double height, double half_width) {
  if (!(half_width > 0.0)) throw Error(ErrorKind::invalid_argument, "barrier width must be positive");
  return Potential(
      "barrier", [height, half_width](double x) { return std::abs(x) < half_width ? height : 0.0; },
      half_width);
}

Potential step_well(double well_depth, double step_height, double width) {
  if (!(width > 0.0)) throw Error(ErrorKind::invalid_argument, "step width must be positive");
  return Potential(
      "step-well",
      [=](double x) {
        if (x > -width && x < 0.0) return -well_depth;
        if (x >= 0.0 && x < width) return step_height;
        return 0.0;
      },
      width);
}

Potential tabulated_potential(std::vector<double> x, std::vector<double> v, double range_threshold) {
  if (x.size() < 2 || x.size() != v.size()) {
    throw Error(ErrorKind::invalid_argument, "table needs at least two (x, V) rows");
  }
  auto spline = std::make_shared<const CubicSpline>(std::move(x), std::move(v));
  auto eval = [spline](double xx) {
    if (xx < spline->front() || xx > spline->back()) return 0.0;
    return (*spline)(xx);
  };
  RangeSearch search;
  search.bound = std::max(std::abs(spline->front()), std::abs(spline->back())) + 2.0 * search.step;
  return Potential("table", eval, detect_range(eval, range_threshold, search));
}

Potential load_tabulated_potential(const std::string& path, double range_threshold) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open potential table " + path);
  std::vector<double> xs, vs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, v;
    if (!(row >> x >> v)) {
      if (lineno == 1) continue;  // header
      throw Error(ErrorKind::io_error, path + ":" + std::to_string(lineno) + ": expected x,V");
    }
    xs.push_back(x);
    vs.push_back(v);
  }
  return tabulated_potential(std::move(xs), std::move(vs), range_threshold);
}

Potential potential_by_name(const std::string& name, double range_threshold) {
  if (name == "jolanta") return jolanta_potential(range_threshold);
  if (name == "zero") return zero_potential();
  if (name == "barrier") return square_barrier(1.0, 0.5);
  if (name == "step") return step_well(1.0, 0.5, 1.0);
  throw Error(ErrorKind::config_error, "unknown potential '" + name + "'");
}

}  // namespace scatter1d
