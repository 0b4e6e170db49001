#pragma once

#include <functional>
#include <span>
#include <vector>

#include "scatter1d/fdsolver.hpp"

namespace scatter1d {

struct Peak {
  double energy = 0.0;       // refined position
  double height = 0.0;       // refined |T|^2
  double prominence = 0.0;   // against the lowest sample on either side
  double fwhm = 0.0;         // 0 if not measured
  std::size_t scan_index = 0;
};

/// Local maxima of |T|^2 on a scan (interior points only).
std::vector<std::size_t> local_maxima(std::span<const ScanPoint> scan);

/// Golden-section maximization of f on [lo, hi].
double golden_maximize(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);

struct PeakSearch {
  double min_prominence = 0.1;  // sharp peaks only
  int dense_points = 401;       // resampling of each bracket before golden refinement
};

/// Sharp |T|^2 peaks of a scan. Each local maximum is refined on the bracket between
/// its scan neighbours with the FD solver, then kept if its prominence passes.
std::vector<Peak> find_peaks(std::span<const ScanPoint> scan, const std::function<double(double)>& t2,
                             const PeakSearch& search = {});

/// Full width at half maximum around a refined peak by bisection on t2 - height/2.
/// Searches outward up to max_half_width on each side.
double measure_fwhm(const std::function<double(double)>& t2, double energy, double height,
                    double max_half_width);

}  // namespace scatter1d
