#pragma once

#include <cmath>

#include "scatter1d/error.hpp"

namespace scatter1d {

/// Units of action and mass. Everything defaults to hbar = m = 1.
struct PhysicsConstants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !(mass > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "hbar and mass must be positive");
    }
  }

  /// K = sqrt(2 m E) / hbar
  double wavenumber(double energy) const { return std::sqrt(2.0 * mass * energy) / hbar; }

  double energy(double wavenumber) const {
    return hbar * hbar * wavenumber * wavenumber / (2.0 * mass);
  }

  /// 2m / hbar^2, the prefactor that turns (E - V) into a squared wavenumber.
  double kinetic_scale() const { return 2.0 * mass / (hbar * hbar); }
};

}  // namespace scatter1d
