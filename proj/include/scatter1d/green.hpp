#pragma once

#include <complex>

#include "scatter1d/constants.hpp"
#include "scatter1d/fdsolver.hpp"
#include "scatter1d/potential.hpp"

namespace scatter1d {

enum class Branch { retarded, advanced };

/// (-+i) m / (hbar^2 K) exp(+-i K |x - y|)
cplx free_green(const PhysicsConstants& constants, double energy, double x, double y,
                Branch branch = Branch::retarded);

/// Retarded G_E(x, y) from the two stationary states at the same energy.
/// plus: incidence from the left (eta = +1); minus: incidence from the right (eta = -1).
/// x and y must be grid points of both solutions.
cplx full_green_retarded(const ScatteringSolution& plus, const ScatteringSolution& minus, double x,
                         double y);

/// Advanced G_E(x, y) = conj(G_E^+(x, y)) for real arguments.
cplx full_green_advanced(const ScatteringSolution& plus, const ScatteringSolution& minus, double x,
                         double y);

struct EndpointIdentity {
  cplx lhs;  // G(-a, a) from the wavefunction product
  cplx rhs;  // (-i) m / (hbar^2 K) T exp(2 i K a)
  double a;  // grid-snapped half range used on both sides
  double relative_residual() const { return std::abs(lhs - rhs) / std::abs(rhs); }
};

EndpointIdentity green_endpoint_identity(const ScatteringSolution& plus,
                                         const ScatteringSolution& minus);

/// T_{(E eta)(E +1)} = (m / (2 pi hbar^2 K)) integral exp(-i eta K x) V(x) psi-tilde(x) dx,
/// trapezoid over [-a, a] on the solution grid. solution must be left-incident with psi stored.
cplx onshell_t_matrix(const Potential& potential, const ScatteringSolution& solution, int eta);

/// Right-hand sides the matrix element should reproduce: (i/2pi)(T-1) for eta=+1, (i/2pi)R for eta=-1.
cplx onshell_t_matrix_expected(const ScatteringSolution& solution, int eta);

/// Born approximation of T through the given order (1 or 2), on a uniform grid of
/// `points` nodes over [-a, a].
cplx born_transmission(const Potential& potential, const PhysicsConstants& constants, double energy,
                       int order, int points = 4001);

struct JumpCheck {
  cplx jump;            // one-sided d/dx G(y+, y) - d/dx G(y-, y)
  double expected;      // 2m / hbar^2
  double ode_residual;  // max |(d_xx + K^2) G0| away from the diagonal
  double relative_error() const { return std::abs(jump - expected) / expected; }
};

/// Central-difference checks of the free Green function around y with step h.
JumpCheck free_green_ode_check(const PhysicsConstants& constants, double energy, double y,
                               double h);

}  // namespace scatter1d
