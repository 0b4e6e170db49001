#pragma once

#include <stdexcept>
#include <string>

namespace scatter1d {

enum class ErrorKind {
  invalid_argument,
  invalid_energy,
  grid_too_coarse,
  degenerate_extraction,
  range_not_found,
  grid_mismatch,
  missing_wavefunction,
  internal_inconsistency,
  order_unsupported,
  invalid_size,
  support_exceeds_box,
  eigensolve_failure,
  zero_eigenvalue,
  defective_pencil,
  out_of_box,
  pole_proximity,
  window_uncovered,
  support_touches_zero,
  node_mismatch,
  branch_domain,
  io_error,
  config_error,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by energy scans; remembers which energy failed.
class ScanError : public Error {
 public:
  ScanError(const Error& cause, double energy)
      : Error(cause.kind(), std::string(cause.what()) + " (E = " + std::to_string(energy) + ")"),
        energy_(energy) {}

  double energy() const noexcept { return energy_; }

 private:
  double energy_;
};

}  // namespace scatter1d
