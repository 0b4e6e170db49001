#pragma once

#include <map>
#include <optional>
#include <string>

#include "scatter1d/constants.hpp"
#include "scatter1d/fdsolver.hpp"
#include "scatter1d/potential.hpp"
#include "scatter1d/siegert.hpp"

namespace scatter1d {

/// Flat `key = value` text; `#` starts a comment; keys carry section prefixes
/// (`potential.name`). Unknown keys are rejected by RunConfig, not here.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> read_key_values(const std::string& path);

struct PotentialSpec {
  std::string name = "jolanta";  // jolanta, zero, barrier, or table
  std::string file;              // CSV x,V when name == table
  double range_threshold = kDefaultRangeThreshold;
  double scale = 1.0;
};

struct RunConfig {
  PhysicsConstants constants;
  PotentialSpec potential;
  FdOptions fd;
  double emin = 0.1;
  double emax = 2.0;
  std::size_t points = 2000;
  int siegert_n = 80;
  std::optional<double> box_a;  // default max(detected range, 15) for jolanta
  BasisKind basis = BasisKind::legendre;
  double box_tolerance = kDefaultBoxTolerance;
  double k0 = 1.2;
  double sigma = 0.08;
  int packet_nodes = 129;
  int threads = 0;  // 0: OpenMP default

  /// Applies recognised keys; throws config_error on unknown keys or bad values.
  void apply(const std::map<std::string, std::string>& values);
  void validate() const;

  Potential make_potential() const;
  /// Box half-width for the Siegert solve.
  double siegert_box(const Potential& potential) const;
  EnergyGrid energy_grid() const { return EnergyGrid::linspace(emin, emax, points); }
};

/// SCATTER1D_THREADS if set, else the configured count (0 leaves OpenMP alone).
int resolve_threads(int configured);

}  // namespace scatter1d
