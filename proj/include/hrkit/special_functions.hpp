#pragma once

namespace hrkit {

// J_nu(x) for nu >= 0, x >= 0. Power series for x <= 10, normalized
// Miller backward recurrence beyond.
double bessel_j(double nu, double x);
double bessel_j_series(double nu, double x);
double bessel_j_recurrence(double nu, double x);

// First positive zero of J_nu, bracketed on [lo, hi].
double bessel_zero(double nu, double lo, double hi);
double first_zero_j0();

struct MuResult {
  double mu = 0.0;
  double residual = 0.0;  // mu J0'(mu)/J0(mu) + n/2
};

// mu in (0, z0) with x J0'(x)/J0(x) = -ratio; ratio = n/2 gives the boundary parameter mu(n).
double mu_for_ratio(double ratio);
MuResult mu_for_dimension(int n);

}  // namespace hrkit
