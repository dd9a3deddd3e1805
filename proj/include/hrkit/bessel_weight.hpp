#pragma once

#include <optional>

#include "hrkit/radial_ode.hpp"

namespace hrkit {

struct PairVerdict {
  bool positive = false;
  bool origin_oscillation = false;  // complex indicial roots; no trajectory
  Trajectory certificate;
};

// True iff the shot solution at multiplier c has no sign change on (0, R).
PairVerdict is_bessel_pair(const OdeProblem& base, double c, const ShootOptions& opts = {});

struct WeightOptions {
  double rel_tol = 1e-8;
  double c_start = 1.0;
  double c_floor = 1e-12;
  double c_cap = 1099511627776.0;  // 2^40
  ShootOptions shoot{};
};

struct WeightResult {
  double beta = 0.0;
  double c_lo = 0.0;
  double c_hi = 0.0;
  int iterations = 0;
  bool unbounded = false;  // no sign change found up to the cap (W = 0 and the like)
  std::optional<double> theta_at_beta;
  PairVerdict certificate_lo;
  PairVerdict certificate_hi;
};

WeightResult weight(const OdeProblem& base, const WeightOptions& opts = {});

// sup{c <= beta : R phi_c'(R)/phi_c(R) >= -ratio}: the largest multiplier whose positive
// solution keeps the boundary log-derivative above -ratio. Uses closed forms for the
// catalogued kinds and shooting otherwise.
double boundary_constrained_weight(const OdeProblem& base, double beta, double ratio,
                                   double rel_tol = 1e-10);

// Weight of a Bessel potential W in the two-dimensional convention (V = 1):
// the closed form when known, else by shooting.
double bessel_potential_weight(const RadialPotential& W, double R, double rel_tol = 1e-8);

// R phi_c'(R)/phi_c(R) for the pair (1, cW) in the two-dimensional convention.
double boundary_log_derivative(const RadialPotential& W, double c, double R);

}  // namespace hrkit
