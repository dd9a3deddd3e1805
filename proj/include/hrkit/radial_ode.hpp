#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "hrkit/potentials.hpp"

namespace hrkit {

// NDim:  y'' + ((n-1)/r + V_r/V) y' + (cW/V) y = 0.
// TwoD:  the same with (n-1)/r replaced by 1/r.
enum class OdeDim { NDim, TwoD };

const char* to_string(OdeDim d) noexcept;

struct OdeProblem {
  int n = 3;
  RadialPotential V;
  RadialPotential W;
  double c = 1.0;
  double R = 1.0;
  OdeDim dim = OdeDim::NDim;
  // Optional (phi, phi') profile used for the initial data at r0 instead of the
  // Frobenius series. Used when a closed-form solution is known near the origin.
  std::function<Jet(double)> initial;

  // Checks the admissibility integrals for V; throws on failure.
  static OdeProblem make(int n, RadialPotential V, RadialPotential W, double c, double R,
                         OdeDim dim = OdeDim::NDim);
  OdeProblem with_c(double c_new) const;

  double coefficient_dim() const { return dim == OdeDim::TwoD ? 1.0 : n - 1.0; }
};

// Checks  int_0^a dr/(r^{n-1}V) = inf  and  int_0^a r^{n-1}V dr < inf  by decade increments.
struct Admissibility {
  bool inverse_diverges = false;
  bool direct_converges = false;
};
Admissibility check_admissibility(int n_eff, const RadialPotential& V, double a);

// Roots of s(s-1) + p0 s + q0 = 0 (descending), p0 = d + s_V, q0 = c lim r^2 W/V.
std::pair<double, double> indicial_exponents(const OdeProblem& p);

struct Trajectory {
  std::vector<double> r, y, yp, ypp;
  double sigma = 0.0;
  std::optional<double> first_zero;
  bool positive_open = true;   // no sign change on (r0, R)
  bool positive_at_R = false;  // y(R) > eps * scale
  bool boundary_degenerate = false;
  double end_ratio = 0.0;      // y'(R)/y(R); NaN when y(R) = 0
  double scale = 0.0;          // max |y r^{-sigma}| over the grid

  // Quintic Hermite interpolation of (y, y', y'') between stored points.
  Jet sample(double radius) const;
};

struct ShootOptions {
  double tol = 1e-10;
  double r0_rel = 1e-8;
  double initial_scale = 1.0;
  bool stop_at_zero = true;
  double boundary_eps = 1e-10;
};

Trajectory shoot_from_origin(const OdeProblem& p, const ShootOptions& opts = {});

// theta = V(R) phi'(R)/phi(R) from the shot solution.
double theta(const OdeProblem& p, const ShootOptions& opts = {});

// Residual y'' + P y'/r + Q y/r^2 at r with the problem's coefficients.
double ode_residual(const OdeProblem& p, double r, const Jet& y);

}  // namespace hrkit
