#include "hrkit/bessel_weight.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hrkit/error.hpp"
#include "hrkit/special_functions.hpp"

namespace hrkit {

PairVerdict is_bessel_pair(const OdeProblem& base, double c, const ShootOptions& opts) {
  PairVerdict v;
  try {
    v.certificate = shoot_from_origin(base.with_c(c), opts);
    v.positive = v.certificate.positive_open;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotBesselPair) throw;
    v.positive = false;
    v.origin_oscillation = true;
  }
  return v;
}

WeightResult weight(const OdeProblem& base, const WeightOptions& o) {
  if (!(o.rel_tol > 0.0)) fail(ErrorCode::InvalidArgument, "rel_tol must be positive");
  WeightResult out;
  if (base.W.is_zero()) {
    out.unbounded = true;
    out.beta = std::numeric_limits<double>::infinity();
    out.c_lo = o.c_cap;
    out.c_hi = std::numeric_limits<double>::infinity();
    return out;
  }

  double c = o.c_start;
  PairVerdict v = is_bessel_pair(base, c, o.shoot);
  ++out.iterations;
  double lo, hi;
  PairVerdict vlo, vhi;
  if (v.positive) {
    lo = c;
    vlo = std::move(v);
    while (true) {
      c *= 2.0;
      if (c > o.c_cap) {
        out.unbounded = true;
        out.beta = std::numeric_limits<double>::infinity();
        out.c_lo = lo;
        out.c_hi = std::numeric_limits<double>::infinity();
        out.certificate_lo = std::move(vlo);
        return out;
      }
      v = is_bessel_pair(base, c, o.shoot);
      ++out.iterations;
      if (!v.positive) break;
      lo = c;
      vlo = std::move(v);
    }
    hi = c;
    vhi = std::move(v);
  } else {
    hi = c;
    vhi = std::move(v);
    while (true) {
      c *= 0.5;
      if (c < o.c_floor)
        fail(ErrorCode::NeverPositive, "no positive solution for any c above 1e-12");
      v = is_bessel_pair(base, c, o.shoot);
      ++out.iterations;
      if (v.positive) break;
      hi = c;
      vhi = std::move(v);
    }
    lo = c;
    vlo = std::move(v);
  }

  while (hi - lo > o.rel_tol * 0.5 * (hi + lo)) {
    const double mid = 0.5 * (lo + hi);
    v = is_bessel_pair(base, mid, o.shoot);
    ++out.iterations;
    if (v.positive) {
      lo = mid;
      vlo = std::move(v);
    } else {
      hi = mid;
      vhi = std::move(v);
    }
  }
  out.c_lo = lo;
  out.c_hi = hi;
  out.beta = 0.5 * (lo + hi);
  out.certificate_lo = std::move(vlo);
  out.certificate_hi = std::move(vhi);
  try {
    out.theta_at_beta = theta(base.with_c(out.beta * (1.0 - 10.0 * o.rel_tol)), o.shoot);
  } catch (const Error&) {
    out.theta_at_beta.reset();
  }
  return out;
}

namespace {

bool is_unit_v(const OdeProblem& p) {
  return p.V.kind() == PotentialKind::Constant && p.V.spec().value == 1.0;
}

// Constant or power W (possibly scaled) in the two-dimensional convention with V = 1:
// R phi'/phi = -q x J1(x)/J0(x) with x = sqrt(c w) R^q / q, q = 1 - m.
std::optional<double> bessel_closed_constraint(const PotentialSpec& spec, double R, double ratio,
                                               double scale = 1.0) {
  switch (spec.kind) {
    case PotentialKind::Constant:
    case PotentialKind::Power: {
      const double m = spec.kind == PotentialKind::Power ? spec.m : 0.0;
      const double w = scale * (spec.kind == PotentialKind::Constant ? spec.value : 1.0);
      const double q = 1.0 - m;
      if (!(q > 0.0) || !(w > 0.0)) return std::nullopt;
      const double x = mu_for_ratio(ratio / q);
      const double s = q * x / std::pow(R, q);
      return s * s / w;
    }
    case PotentialKind::Scaled:
      return bessel_closed_constraint(spec.terms.at(0), R, ratio, scale * spec.value);
    default:
      return std::nullopt;
  }
}

}  // namespace

double boundary_log_derivative(const RadialPotential& W, double c, double R) {
  if (auto phi = candidate_phi(W.spec(), c)) {
    const Jet j = phi->eval(R);
    if (!(j.v > 0.0))
      fail(ErrorCode::CriticalBoundary, "closed-form solution is not positive at R");
    return R * j.d1 / j.v;
  }
  auto one = make_potential(PotentialSpec::constant(1.0), R);
  const OdeProblem p = OdeProblem::make(2, one, W, c, R, OdeDim::TwoD);
  return R * theta(p);
}

double boundary_constrained_weight(const OdeProblem& base, double beta, double ratio,
                                   double rel_tol) {
  if (base.W.is_zero()) return std::numeric_limits<double>::infinity();
  const bool two_d_unit = is_unit_v(base) && (base.dim == OdeDim::TwoD || base.n == 2);
  if (two_d_unit) {
    if (auto c = bessel_closed_constraint(base.W.spec(), base.R, ratio))
      return std::min(*c, beta);
    if (auto cm = catalog_multiplier(base.W.spec())) {
      if (std::abs(*cm - beta) <= 1e-12 * beta &&
          boundary_log_derivative(base.W, beta, base.R) >= -ratio)
        return beta;
    }
  }
  // numeric: R phi_c'/phi_c decreases in c
  auto ratio_at = [&](double c) {
    try {
      return base.R * theta(base.with_c(c)) / base.V.value(base.R);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CriticalBoundary || e.code() == ErrorCode::NotBesselPair)
        return -std::numeric_limits<double>::infinity();
      throw;
    }
  };
  double hi = beta * (1.0 - 1e-9);
  if (ratio_at(hi) >= -ratio) return beta;
  double lo = 0.0;
  while (hi - lo > rel_tol * std::max(hi, 1e-300)) {
    const double mid = 0.5 * (lo + hi);
    if (ratio_at(mid) >= -ratio)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double bessel_potential_weight(const RadialPotential& W, double R, double rel_tol) {
  if (auto b = closed_form_beta(W.spec(), R)) return *b;
  auto one = make_potential(PotentialSpec::constant(1.0), R);
  const OdeProblem p = OdeProblem::make(2, one, W, 1.0, R, OdeDim::TwoD);
  WeightOptions o;
  o.rel_tol = rel_tol;
  const WeightResult w = weight(p, o);
  return w.beta;
}

}  // namespace hrkit
