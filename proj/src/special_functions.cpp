#include "hrkit/special_functions.hpp"

#include <cmath>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "hrkit/error.hpp"

namespace hrkit {

namespace {

constexpr double kCrossover = 10.0;

void check_args(double nu, double x) {
  if (!(nu >= 0.0) || !(x >= 0.0) || !std::isfinite(nu) || !std::isfinite(x))
    fail(ErrorCode::Domain, "bessel_j requires nu >= 0 and x >= 0");
}

double bracket_root(double (*f)(double, double), double p, double lo, double hi) {
  std::uintmax_t iters = 200;
  auto g = [&](double x) { return f(p, x); };
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

double j0_ratio_residual(double ratio, double x) {
  // x J0'(x)/J0(x) + ratio, with J0' = -J1
  return -x * bessel_j(1.0, x) / bessel_j(0.0, x) + ratio;
}

}  // namespace

double bessel_j_series(double nu, double x) {
  check_args(nu, x);
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const double h = 0.5 * x;
  double term = std::exp(nu * std::log(h) - std::lgamma(nu + 1.0));
  double sum = term;
  const double h2 = h * h;
  for (int k = 1; k < 500; ++k) {
    term *= -h2 / (k * (nu + k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > h) break;
  }
  return sum;
}

double bessel_j_recurrence(double nu, double x) {
  check_args(nu, x);
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const int M = 2 * static_cast<int>(0.5 * (std::max(x, nu) + 30.0 + 4.0 * std::sqrt(x))) + 2;

  // t_k = Gamma(nu+k) / (k! Gamma(nu+1)); normalization (x/2)^nu = sum_k c_k J_{nu+2k}
  // with c_0 = Gamma(nu+1) and c_k = Gamma(nu+1) (nu+2k) t_k.
  std::vector<double> t(M / 2 + 2, 0.0);
  t[1] = 1.0;
  for (int k = 1; k + 1 < static_cast<int>(t.size()); ++k) t[k + 1] = t[k] * (nu + k) / (k + 1);

  double jp1 = 0.0, j = 1e-300, norm = 0.0;
  for (int i = M; i >= 1; --i) {
    // J_{nu+i-1} = 2(nu+i)/x J_{nu+i} - J_{nu+i+1}
    const double jm1 = 2.0 * (nu + i) / x * j - jp1;
    jp1 = j;
    j = jm1;
    const int idx = i - 1;
    if (idx > 0 && idx % 2 == 0) norm += (nu + idx) * t[idx / 2] * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
    }
  }
  norm += j;  // k = 0 term, c_0 / Gamma(nu+1) = 1
  const double scale = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
  return scale * j / norm;
}

double bessel_j(double nu, double x) {
  check_args(nu, x);
  return x <= kCrossover ? bessel_j_series(nu, x) : bessel_j_recurrence(nu, x);
}

double bessel_zero(double nu, double lo, double hi) {
  return bracket_root(&bessel_j, nu, lo, hi);
}

double first_zero_j0() {
  static const double z0 = bessel_zero(0.0, 2.0, 3.0);
  return z0;
}

double mu_for_ratio(double ratio) {
  if (!(ratio > 0.0)) fail(ErrorCode::Domain, "mu_for_ratio requires a positive ratio");
  const double z0 = first_zero_j0();
  // x J0'/J0 decreases from 0 at x=0 to -inf at z0
  double hi = z0 * (1.0 - 1e-15);
  while (j0_ratio_residual(ratio, hi) > 0.0) hi = z0 - 0.5 * (z0 - hi);
  return bracket_root(&j0_ratio_residual, ratio, 1e-300, hi);
}

MuResult mu_for_dimension(int n) {
  if (n < 1) fail(ErrorCode::Domain, "mu_for_dimension requires n >= 1");
  MuResult out;
  out.mu = mu_for_ratio(0.5 * n);
  out.residual = j0_ratio_residual(0.5 * n, out.mu);
  return out;
}

}  // namespace hrkit
