#include "hrkit/radial_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "hrkit/error.hpp"

namespace hrkit {

namespace odeint = boost::numeric::odeint;

const char* to_string(OdeDim d) noexcept { return d == OdeDim::TwoD ? "2d" : "n"; }

namespace {

// Sum of GL5 over [lo, hi] in s = log r of g(r) r ds.
double decade_integral(const std::function<double(double)>& g, double lo, double hi) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                              0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                              0.2369268850561891, 0.2369268850561891};
  double sum = 0.0;
  const int panels = 4;
  const double ds = (std::log(hi) - std::log(lo)) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = std::log(lo) + (p + 0.5) * ds;
    for (int i = 0; i < 5; ++i) {
      const double r = std::exp(mid + 0.5 * ds * x[i]);
      sum += w[i] * g(r) * r * 0.5 * ds;
    }
  }
  return sum;
}

bool decade_sum_diverges(const std::function<double(double)>& g, double a) {
  constexpr int kDecades = 16;
  double total = 0.0, last = 0.0;
  for (int j = 0; j < kDecades; ++j) {
    const double hi = a * std::pow(10.0, -j), lo = hi * 0.1;
    last = decade_integral(g, lo, hi);
    if (!std::isfinite(last)) return true;
    total += last;
  }
  return last > 1e-3 * total;
}

struct Frobenius {
  double a1 = 0.0, a2 = 0.0;
};

double indicial_poly(double x, double p0, double q0) { return x * (x - 1.0) + p0 * x + q0; }

// lim r^2 W/V, or throws when W/V is more singular than r^-2.
double w_minus2(const OdeProblem& p) {
  if (p.c == 0.0 || p.W.is_zero()) return 0.0;
  const double e = 2.0 + p.W.sing_exponent() - p.V.sing_exponent();
  if (e > 1e-12) return 0.0;
  if (e >= -1e-12) return p.W.sing_coefficient() / p.V.sing_coefficient();
  if (p.W.sing_coefficient() == 0.0) return 0.0;
  fail(ErrorCode::NotBesselPair,
       "W/V is more singular than r^-2 at the origin: not a Bessel pair for c > 0");
}

struct Coefficients {
  const OdeProblem& p;
  double d;
  double P(double r) const {
    const Jet v = p.V.jet(r);
    return d + r * v.d1 / v.v;
  }
  double Q(double r) const {
    if (p.c == 0.0) return 0.0;
    return p.c * r * r * p.W.value(r) / p.V.value(r);
  }
};

}  // namespace

Admissibility check_admissibility(int n_eff, const RadialPotential& V, double a) {
  Admissibility out;
  const double dm1 = n_eff - 1.0;
  out.inverse_diverges =
      decade_sum_diverges([&](double r) { return 1.0 / (std::pow(r, dm1) * V.value(r)); }, a);
  out.direct_converges =
      !decade_sum_diverges([&](double r) { return std::pow(r, dm1) * V.value(r); }, a);
  return out;
}

OdeProblem OdeProblem::make(int n, RadialPotential V, RadialPotential W, double c, double R,
                            OdeDim dim) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "dimension n must be >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) fail(ErrorCode::InvalidArgument, "R must be positive");
  if (!(c >= 0.0) || !std::isfinite(c)) fail(ErrorCode::InvalidArgument, "c must be >= 0");
  for (double t : {1e-6, 0.25, 0.5, 0.75, 1.0}) {
    if (!(V.value(t * R) > 0.0)) fail(ErrorCode::InvalidArgument, "V must be positive on (0,R]");
    if (!(W.value(t * R) >= 0.0)) fail(ErrorCode::InvalidArgument, "W must be nonnegative");
  }
  const int n_eff = dim == OdeDim::TwoD ? 2 : n;
  const Admissibility adm = check_admissibility(n_eff, V, 0.5 * R);
  if (!adm.inverse_diverges)
    fail(ErrorCode::Domain, "integral of 1/(r^{n-1} V) converges at 0; V is not admissible");
  if (!adm.direct_converges)
    fail(ErrorCode::DivergentIntegral, "integral of r^{n-1} V diverges at 0; V is not admissible");
  OdeProblem p;
  p.n = n;
  p.V = std::move(V);
  p.W = std::move(W);
  p.c = c;
  p.R = R;
  p.dim = dim;
  return p;
}

OdeProblem OdeProblem::with_c(double c_new) const {
  OdeProblem p = *this;
  p.c = c_new;
  return p;
}

std::pair<double, double> indicial_exponents(const OdeProblem& p) {
  const double p0 = p.coefficient_dim() + p.V.sing_exponent();
  const double q0 = p.c * w_minus2(p);
  // s^2 + (p0 - 1) s + q0 = 0
  const double b = p0 - 1.0;
  double disc = b * b - 4.0 * q0;
  const double scale = std::max({1.0, b * b, std::abs(q0)});
  if (std::abs(disc) <= 1e-12 * scale) disc = 0.0;
  if (disc < 0.0) {
    std::ostringstream msg;
    msg << "complex indicial exponents (c=" << p.c
        << "): the solution oscillates at the origin, not a Bessel pair at this c";
    fail(ErrorCode::NotBesselPair, msg.str());
  }
  const double sq = std::sqrt(disc);
  return {0.5 * (-b + sq), 0.5 * (-b - sq)};
}

double ode_residual(const OdeProblem& p, double r, const Jet& y) {
  const Coefficients co{p, p.coefficient_dim()};
  return y.d2 + co.P(r) * y.d1 / r + co.Q(r) * y.v / (r * r);
}

Jet Trajectory::sample(double radius) const {
  if (r.empty()) fail(ErrorCode::InvalidArgument, "empty trajectory");
  if (radius <= r.front()) return {y.front(), yp.front(), ypp.front()};
  if (radius >= r.back()) return {y.back(), yp.back(), ypp.back()};
  const size_t i = std::upper_bound(r.begin(), r.end(), radius) - r.begin() - 1;
  const double h = r[i + 1] - r[i];
  const double u = (radius - r[i]) / h;
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  const double H[6] = {1 - 10 * u3 + 15 * u4 - 6 * u5,     u - 6 * u3 + 8 * u4 - 3 * u5,
                       0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5, 10 * u3 - 15 * u4 + 6 * u5,
                       -4 * u3 + 7 * u4 - 3 * u5,          0.5 * u3 - u4 + 0.5 * u5};
  const double D[6] = {-30 * u2 + 60 * u3 - 30 * u4,    1 - 18 * u2 + 32 * u3 - 15 * u4,
                       u - 4.5 * u2 + 6 * u3 - 2.5 * u4, 30 * u2 - 60 * u3 + 30 * u4,
                       -12 * u2 + 28 * u3 - 15 * u4,    1.5 * u2 - 4 * u3 + 2.5 * u4};
  const double DD[6] = {-60 * u + 180 * u2 - 120 * u3, -36 * u + 96 * u2 - 60 * u3,
                        1 - 9 * u + 18 * u2 - 10 * u3, 60 * u - 180 * u2 + 120 * u3,
                        -24 * u + 84 * u2 - 60 * u3,   3 * u - 12 * u2 + 10 * u3};
  const double c[6] = {y[i], h * yp[i], h * h * ypp[i], y[i + 1], h * yp[i + 1], h * h * ypp[i + 1]};
  Jet out;
  for (int k = 0; k < 6; ++k) {
    out.v += c[k] * H[k];
    out.d1 += c[k] * D[k];
    out.d2 += c[k] * DD[k];
  }
  out.d1 /= h;
  out.d2 /= h * h;
  return out;
}

Trajectory shoot_from_origin(const OdeProblem& p, const ShootOptions& o) {
  const double sigma = indicial_exponents(p).first;
  const Coefficients co{p, p.coefficient_dim()};
  const double r0 = o.r0_rel * p.R;
  const double t0 = std::log(r0), T = std::log(p.R);

  using State = std::array<double, 2>;  // z, dz/dt with y = r^sigma z, t = log r
  State x{};
  if (p.initial) {
    const Jet j = p.initial(r0);
    const double rs = std::pow(r0, -sigma);
    x[0] = j.v * rs;
    x[1] = r0 * j.d1 * rs - sigma * x[0];
  } else {
    const double p0 = p.coefficient_dim() + p.V.sing_exponent();
    const double q0 = p.c * w_minus2(p);
    const double dP1 = co.P(r0) - p0, dP2 = co.P(2 * r0) - p0;
    const double dQ1 = co.Q(r0) - q0, dQ2 = co.Q(2 * r0) - q0;
    const double p2 = (dP2 - 2 * dP1) / (2 * r0 * r0), p1 = (dP1 - p2 * r0 * r0) / r0;
    const double q2 = (dQ2 - 2 * dQ1) / (2 * r0 * r0), q1 = (dQ1 - q2 * r0 * r0) / r0;
    Frobenius f;
    f.a1 = -(p1 * sigma + q1) / indicial_poly(sigma + 1, p0, q0);
    f.a2 = -(f.a1 * (p1 * (sigma + 1) + q1) + (p2 * sigma + q2)) / indicial_poly(sigma + 2, p0, q0);
    // coefficients that are not analytic at 0 (iterated logs) make the series meaningless
    if (!(std::abs(f.a1 * r0) + std::abs(f.a2 * r0 * r0) < 1e-2)) f = {};
    x[0] = 1.0 + f.a1 * r0 + f.a2 * r0 * r0;
    x[1] = f.a1 * r0 + 2 * f.a2 * r0 * r0;
  }
  x[0] *= o.initial_scale;
  x[1] *= o.initial_scale;
  const double s0 = std::max(std::abs(x[0]), std::abs(x[1]));
  if (!(s0 > 0.0) || !std::isfinite(s0)) fail(ErrorCode::InvalidArgument, "bad initial data");
  if (!(x[0] > 0.0)) fail(ErrorCode::Domain, "initial value is not positive");

  auto system = [&](const State& s, State& ds, double t) {
    const double r = std::exp(t);
    const double P = co.P(r), Q = co.Q(r);
    ds[0] = s[1];
    ds[1] = -(2 * sigma + P - 1) * s[1] - (sigma * sigma + (P - 1) * sigma + Q) * s[0];
  };

  const double atol = o.tol * s0;
  auto make_stepper = [&]() {
    return odeint::make_dense_output(atol, o.tol, 0.25, odeint::runge_kutta_dopri5<State>());
  };
  auto stepper = make_stepper();
  stepper.initialize(x, t0, 1e-3);

  Trajectory tr;
  tr.sigma = sigma;
  double zmax = std::abs(x[0]);
  auto push = [&](double t, const State& s) {
    const double r = std::exp(t);
    const double rs = std::pow(r, sigma);
    const double yv = rs * s[0];
    const double yd = rs / r * (sigma * s[0] + s[1]);
    const double ydd = -(co.P(r) * yd / r + co.Q(r) * yv / (r * r));
    tr.r.push_back(r);
    tr.y.push_back(yv);
    tr.yp.push_back(yd);
    tr.ypp.push_back(ydd);
    zmax = std::max(zmax, std::abs(s[0]));
  };
  push(t0, x);

  State prev = x;
  State cur{};
  size_t steps = 0;
  while (true) {
    std::pair<double, double> span;
    try {
      span = stepper.do_step(system);
    } catch (const odeint::step_adjustment_error&) {
      std::ostringstream msg;
      msg << "step size collapsed near r=" << std::exp(stepper.current_time());
      fail(ErrorCode::StepCollapse, msg.str());
    }
    if (++steps > 2000000) fail(ErrorCode::NoConvergence, "too many integration steps");
    const double dt = span.second - span.first;
    if (dt < 1e-14 * (1.0 + std::abs(span.first))) {
      std::ostringstream msg;
      msg << "step size collapsed near r=" << std::exp(span.first);
      fail(ErrorCode::StepCollapse, msg.str());
    }
    const bool reached_end = span.second >= T;
    const double t_end = reached_end ? T : span.second;
    if (reached_end)
      stepper.calc_state(T, cur);
    else
      cur = stepper.current_state();
    for (double v : cur)
      if (!std::isfinite(v)) fail(ErrorCode::NoConvergence, "solution is not finite");

    if (cur[0] <= 0.0 && prev[0] > 0.0 && !tr.first_zero) {
      double tz = t_end;
      if (cur[0] < 0.0) {
        State tmp{};
        auto z_at = [&](double t) {
          stepper.calc_state(t, tmp);
          return tmp[0];
        };
        std::uintmax_t it = 100;
        auto tol = boost::math::tools::eps_tolerance<double>(50);
        const auto root = boost::math::tools::toms748_solve(z_at, span.first, t_end, prev[0],
                                                            cur[0], tol, it);
        tz = 0.5 * (root.first + root.second);
      }
      const bool at_boundary = tz >= T - 1e-14;
      if (!at_boundary) {
        tr.first_zero = std::exp(tz);
        tr.positive_open = false;
        if (o.stop_at_zero) {
          State zs{};
          stepper.calc_state(tz, zs);
          push(tz, zs);
          tr.positive_at_R = false;
          tr.end_ratio = std::numeric_limits<double>::quiet_NaN();
          tr.scale = zmax;
          return tr;
        }
      }
    }
    push(t_end, cur);
    prev = cur;
    if (reached_end) break;

    // joint rescale of the linear solution, including what is already stored
    const double mag = std::max(std::abs(cur[0]), std::abs(cur[1]));
    if (mag > 1e8 * s0 || mag < 1e-8 * s0) {
      const double f = s0 / mag;
      for (auto& v : tr.y) v *= f;
      for (auto& v : tr.yp) v *= f;
      for (auto& v : tr.ypp) v *= f;
      zmax *= f;
      cur[0] *= f;
      cur[1] *= f;
      prev = cur;
      const double t_now = span.second;
      const double dt_next = stepper.current_time_step();
      stepper = make_stepper();
      stepper.initialize(cur, t_now, dt_next);
    }
  }

  const double zR = prev[0];
  tr.scale = zmax;
  tr.boundary_degenerate = std::abs(zR) < o.boundary_eps * zmax;
  tr.positive_at_R = zR > 0.0 && !tr.boundary_degenerate;
  if (zR < 0.0 && !tr.first_zero) {
    tr.first_zero = p.R;
    tr.positive_open = false;
  }
  if (zR != 0.0)
    tr.end_ratio = (sigma * zR + prev[1]) / (p.R * zR);
  else
    tr.end_ratio = std::numeric_limits<double>::quiet_NaN();
  return tr;
}

double theta(const OdeProblem& p, const ShootOptions& opts) {
  ShootOptions o = opts;
  o.stop_at_zero = true;
  const Trajectory tr = shoot_from_origin(p, o);
  if (tr.first_zero && *tr.first_zero < p.R) {
    std::ostringstream msg;
    msg << "solution changes sign at r=" << *tr.first_zero << " < R: not a Bessel pair at c="
        << p.c;
    fail(ErrorCode::NotBesselPair, msg.str());
  }
  if (!tr.positive_at_R)
    fail(ErrorCode::CriticalBoundary, "critical boundary: the solution vanishes at R");
  return p.V.value(p.R) * tr.end_ratio;
}

}  // namespace hrkit
