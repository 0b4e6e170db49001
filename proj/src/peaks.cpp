#include "scatter1d/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scatter1d/error.hpp"

namespace scatter1d {

std::vector<std::size_t> local_maxima(std::span<const ScanPoint> scan) {
  std::vector<std::size_t> out;
  for (std::size_t j = 1; j + 1 < scan.size(); ++j) {
    if (scan[j].t2() > scan[j - 1].t2() && scan[j].t2() >= scan[j + 1].t2()) out.push_back(j);
  }
  return out;
}

double golden_maximize(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  return fc > fd ? c : d;
}

std::vector<Peak> find_peaks(std::span<const ScanPoint> scan, const std::function<double(double)>& t2,
                             const PeakSearch& search) {
  std::vector<Peak> peaks;
  const int m = std::max(search.dense_points, 3);
  for (std::size_t j : local_maxima(scan)) {
    const double lo = scan[j - 1].energy, hi = scan[j + 1].energy;
    std::vector<double> dense(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < m; ++i) dense[static_cast<std::size_t>(i)] = t2(lo + (hi - lo) * i / (m - 1));
    const auto best = static_cast<int>(std::max_element(dense.begin(), dense.end()) - dense.begin());
    const double step = (hi - lo) / (m - 1);
    const double a = lo + step * std::max(best - 1, 0);
    const double b = lo + step * std::min(best + 1, m - 1);
    Peak p;
    p.scan_index = j;
    p.energy = golden_maximize(t2, a, b);
    p.height = std::max(t2(p.energy), dense[static_cast<std::size_t>(best)]);
    double left = p.height, right = p.height;
    for (std::size_t i = j; i-- > 0;) {
      if (scan[i].t2() > p.height) break;
      left = std::min(left, scan[i].t2());
    }
    for (std::size_t i = j + 1; i < scan.size(); ++i) {
      if (scan[i].t2() > p.height) break;
      right = std::min(right, scan[i].t2());
    }
    p.prominence = p.height - std::max(left, right);
    if (p.prominence >= search.min_prominence) peaks.push_back(p);
  }
  return peaks;
}

namespace {

double half_crossing(const std::function<double(double)>& t2, double energy, double half, double dir,
                     double max_half_width) {
  double inner = 0.0, outer = std::max(1e-9, 1e-9 * energy);
  while (t2(energy + dir * outer) >= half) {
    inner = outer;
    outer *= 2.0;
    if (outer > max_half_width) {
      throw Error(ErrorKind::window_uncovered, "half maximum not reached within the search width");
    }
  }
  for (int it = 0; it < 200 && outer - inner > 1e-12 * std::max(1.0, outer); ++it) {
    const double mid = 0.5 * (inner + outer);
    (t2(energy + dir * mid) >= half ? inner : outer) = mid;
  }
  return 0.5 * (inner + outer);
}

}  // namespace

double measure_fwhm(const std::function<double(double)>& t2, double energy, double height, double max_half_width) {
  const double half = 0.5 * height;
  return half_crossing(t2, energy, half, +1.0, max_half_width) + half_crossing(t2, energy, half, -1.0, max_half_width);
}

}  // namespace scatter1d
