#include "hrkit/inequality.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <boost/math/constants/constants.hpp>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "hrkit/bessel_weight.hpp"
#include "hrkit/error.hpp"
#include "hrkit/quadrature.hpp"
#include "hrkit/special_functions.hpp"

namespace hrkit {

double unit_ball_volume(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  const double pi = boost::math::constants::pi<double>();
  return std::pow(pi, 0.5 * n) / boost::math::tgamma(0.5 * n + 1.0);
}

double sphere_measure(int n) { return n * unit_ball_volume(n); }

double DeficitReport::rhs_total() const {
  double s = 0.0;
  for (const auto& t : rhs_terms) s += t.second;
  return s;
}

// ---------------------------------------------------------------------------
// TestFunction

bool TestFunction::radial() const {
  return std::all_of(modes.begin(), modes.end(), [](const ModeProfile& m) { return m.k == 0; });
}

namespace {

double profile_scale(const ModeProfile& m, double R) {
  double s = 0.0;
  for (int i = 1; i <= 16; ++i) s = std::max(s, std::abs(m.f(R * i / 16.0).v));
  return s;
}

}  // namespace

bool TestFunction::vanishes_at_R(int k_from) const {
  for (const auto& m : modes) {
    if (m.k < k_from) continue;
    if (std::abs(m.f(R).v) > 1e-12 * std::max(profile_scale(m, R), 1e-300)) return false;
  }
  return true;
}

bool TestFunction::regular_at_origin() const {
  for (const auto& m : modes) {
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int j = 3; j <= 8; ++j) {
      const double r = std::max(R * std::pow(10.0, -j), r_min);
      const double q = std::abs(m.f(r).v) / std::pow(r / R, m.k);
      if (!std::isfinite(q)) return false;
      if (std::isfinite(prev) && q > 10.0 * prev + 1e-12) return false;
      prev = q;
    }
  }
  return true;
}

TestFunction TestFunction::scaled(double alpha) const {
  TestFunction out = *this;
  for (auto& m : out.modes) {
    auto f = m.f;
    m.f = [f, alpha](double r) {
      Jet j = f(r);
      return Jet{alpha * j.v, alpha * j.d1, alpha * j.d2};
    };
  }
  return out;
}

// ---------------------------------------------------------------------------
// generic mode-wise evaluation

namespace {

struct Form {
  std::string name;
  int n = 3;
  double measure = 1.0;
  std::vector<std::string> names;
  std::vector<double> coefs;
  // out[0]: lhs density, out[1 + i]: term i density; radial measure included
  std::function<void(double ck, double r, const Jet& f, double* out)> density;
  // boundary contribution of each term at R (optional)
  std::function<void(double ck, const Jet& fR, double* out)> boundary;
};

double c_of_k(int n, int k) { return static_cast<double>(k) * (n + k - 2); }

DeficitReport evaluate_form(const Form& form, const TestFunction& u) {
  const int T = static_cast<int>(form.names.size());
  std::vector<double> sums(T, 0.0), errs(T, 0.0);
  double lhs = 0.0, lhs_err = 0.0;
  QuadOptions qo;
  qo.r_min = u.r_min;
  for (const auto& mode : u.modes) {
    const double ck = c_of_k(form.n, mode.k);
    auto eval = [&](double r, double* out) {
      Jet f = mode.f(r);
      // densities are quadratic in f: pull the amplitude out so f'^2 cannot overflow
      // before the radial weight brings it back (steep profiles near r = 0)
      const double amp = std::max({std::abs(f.v), std::abs(f.d1) * r, std::abs(f.d2) * r * r});
      if (amp == 0.0) {
        std::fill(out, out + T + 1, 0.0);
        return;
      }
      const double s = std::isfinite(amp) ? amp : 1.0;
      f = Jet{f.v / s, f.d1 / s, f.d2 / s};
      form.density(ck, r, f, out);
      out[0] = out[0] * s * s;
      for (int i = 0; i < T; ++i)
        out[1 + i] = form.coefs[i] == 0.0 ? 0.0 : form.coefs[i] * out[1 + i] * s * s;
    };
    const auto q = integrate_radial(eval, T + 1, u.R, qo, u.breakpoints);
    lhs += q[0].value;
    lhs_err += q[0].error;
    for (int i = 0; i < T; ++i) {
      sums[i] += q[1 + i].value;
      errs[i] += q[1 + i].error;
    }
    if (form.boundary) {
      std::vector<double> b(T, 0.0);
      form.boundary(ck, mode.f(u.R), b.data());
      for (int i = 0; i < T; ++i) sums[i] += form.coefs[i] * b[i];
    }
  }
  DeficitReport rep;
  rep.inequality = form.name;
  rep.function = u.name;
  rep.lhs = form.measure * lhs;
  double err = lhs_err;
  double rhs = 0.0;
  for (int i = 0; i < T; ++i) {
    rep.rhs_terms.emplace_back(form.names[i], form.measure * sums[i]);
    rhs += form.measure * sums[i];
    err += errs[i];
  }
  rep.deficit = rep.lhs - rhs;
  rep.quad_error = form.measure * err;
  return rep;
}

// Lap u_k radial part: f'' + (n-1) f'/r - c_k f/r^2.
double lap(int n, double ck, double r, const Jet& f) {
  return f.d2 + (n - 1.0) * f.d1 / r - ck * f.v / (r * r);
}

// |grad u_k|^2 radial density: f'^2 + c_k f^2/r^2.
double grad2(double ck, double r, const Jet& f) { return f.d1 * f.d1 + ck * f.v * f.v / (r * r); }

void mark(DeficitReport& rep, bool ok, const std::string& why) {
  if (ok) return;
  rep.hypotheses_ok = false;
  if (!rep.note.empty()) rep.note += "; ";
  rep.note += "outside theorem hypotheses: " + why;
}

}  // namespace

// ---------------------------------------------------------------------------

DeficitReport hardy_deficit(const RadialPotential& V, const RadialPotential& W, double theta,
                            const TestFunction& u, int n) {
  Form f;
  f.name = "hardy";
  f.n = n;
  f.measure = sphere_measure(n);
  f.names = {"int W u^2", "theta int_dB u^2"};
  f.coefs = {1.0, theta};
  const double R = u.R;
  f.density = [&](double ck, double r, const Jet& p, double* out) {
    const double w = std::pow(r, n - 1.0);
    out[0] = V.value(r) * grad2(ck, r, p) * w;
    out[1] = W.is_zero() ? 0.0 : W.value(r) * p.v * p.v * w;
    out[2] = 0.0;
  };
  f.boundary = [&](double, const Jet& p, double* out) {
    out[0] = 0.0;
    out[1] = std::pow(R, n - 1.0) * p.v * p.v;
  };
  return evaluate_form(f, u);
}

DeficitReport hardy_rellich_deficit(const RadialPotential& V, const RadialPotential& W,
                                    const TestFunction& u, int n, double theta,
                                    const ConditionReport* condition) {
  const double R = u.R;
  const double b = theta + (n - 1.0) * V.value(R) / R;
  Form f;
  f.name = "hardy-rellich";
  f.n = n;
  f.measure = sphere_measure(n);
  f.names = {"int W |grad u|^2", "(n-1) int (V/r^2 - V_r/r) |grad u|^2",
             "(theta + (n-1)V(R)/R) int_dB |grad u|^2"};
  f.coefs = {1.0, n - 1.0, b};
  f.density = [&](double ck, double r, const Jet& p, double* out) {
    const double w = std::pow(r, n - 1.0);
    const Jet v = V.jet(r);
    const double L = lap(n, ck, r, p);
    const double g = grad2(ck, r, p);
    out[0] = v.v * L * L * w;
    out[1] = W.is_zero() ? 0.0 : W.value(r) * g * w;
    out[2] = (v.v / (r * r) - v.d1 / r) * g * w;
    out[3] = 0.0;
  };
  f.boundary = [&](double ck, const Jet& p, double* out) {
    out[0] = out[1] = 0.0;
    out[2] = std::pow(R, n - 1.0) * grad2(ck, R, p);
  };
  DeficitReport rep = evaluate_form(f, u);

  // mode-wise aggregation b R^{n-1} sum_k f_k'(R)^2
  double alt = 0.0;
  for (const auto& m : u.modes) {
    const Jet p = m.f(R);
    alt += p.d1 * p.d1;
  }
  alt *= f.measure * b * std::pow(R, n - 1.0);
  const double stated = rep.rhs_terms.back().second;
  rep.extras.emplace_back("boundary, mode-wise f_k'(R)^2 aggregation", alt);
  rep.extras.emplace_back("deficit with mode-wise boundary", rep.deficit + stated - alt);

  if (!u.radial()) {
    ConditionReport local;
    if (!condition) {
      local = check_condition_main(V, W, n, R);
      condition = &local;
    }
    mark(rep, condition->holds, "the pointwise condition on (V, W) fails");
    mark(rep, condition->boundary_holds.value_or(false), "the boundary condition at R fails");
    mark(rep, u.vanishes_at_R(1), "a mode with k >= 1 does not vanish at R");
  }
  return rep;
}

DeficitReport gm_hr_deficit(const RadialPotential& W, const TestFunction& u, int n, double m,
                            double a, double beta) {
  Form f;
  f.name = "gm-hr";
  f.n = n;
  f.measure = sphere_measure(n);
  f.names = {"a int |grad u|^2 / r^{2m+2}", "beta int W |grad u|^2 / r^{2m}"};
  f.coefs = {a, W.is_zero() ? 0.0 : beta};
  f.density = [&](double ck, double r, const Jet& p, double* out) {
    const double w = std::pow(r, n - 1.0 - 2.0 * m);
    const double L = lap(n, ck, r, p);
    const double g = grad2(ck, r, p);
    out[0] = L * L * w;
    out[1] = g * w / (r * r);
    out[2] = W.is_zero() ? 0.0 : W.value(r) * g * w;
  };
  DeficitReport rep = evaluate_form(f, u);
  mark(rep, m >= -0.5 * n && m < 0.5 * (n - 2), "m outside [-n/2, (n-2)/2)");
  mark(rep, u.vanishes_at_R(1), "a mode with k >= 1 does not vanish at R");
  return rep;
}

const char* to_string(RellichVariant v) noexcept {
  switch (v) {
    case RellichVariant::Basic: return "rellich";
    case RellichVariant::Weighted: return "weighted-rellich";
    case RellichVariant::LogChain: return "log-rellich";
    case RellichVariant::TwoPotential: return "two-potential";
    case RellichVariant::WithGradient: return "hr-gradient";
  }
  return "?";
}

RellichVariant parse_rellich_variant(const std::string& s) {
  for (auto v : {RellichVariant::Basic, RellichVariant::Weighted, RellichVariant::LogChain,
                 RellichVariant::TwoPotential, RellichVariant::WithGradient})
    if (s == to_string(v)) return v;
  fail(ErrorCode::InvalidArgument, "unknown Rellich variant '" + s + "'");
}

DeficitReport improved_rellich_deficit(const RadialPotential& W, const TestFunction& u, int n,
                                       const RellichParams& p) {
  const double R = u.R;
  const double m = p.variant == RellichVariant::Weighted ? p.m : 0.0;
  const double H = std::pow((n + 2.0 * m) * (n - 4.0 - 2.0 * m) / 4.0, 2);
  const double mu2 = p.mu * p.mu / (R * R);
  Form f;
  f.name = to_string(p.variant);
  f.n = n;
  f.measure = sphere_measure(n);
  f.names = {"H int u^2 / r^{2m+4}"};
  f.coefs = {H};
  double improvement = 0.0;
  switch (p.variant) {
    case RellichVariant::Basic:
      improvement = (n * n / 4.0 + std::pow(n - p.lambda - 2.0, 2) / 4.0) * p.beta;
      f.names.push_back("improvement int W u^2 / r^2");
      break;
    case RellichVariant::Weighted:
      improvement = p.beta * (std::pow(n + 2.0 * m, 2) / 4.0 +
                              std::pow(n - 2.0 * m - p.lambda - 2.0, 2) / 4.0);
      f.names.push_back("improvement int W u^2 / r^{2m+2}");
      break;
    case RellichVariant::LogChain:
      improvement = 1.0 + n * (n - 4.0) / 8.0;
      f.names.push_back("(1 + n(n-4)/8) int W u^2 / r^2");
      break;
    case RellichVariant::TwoPotential:
      improvement = n * n / 4.0 * p.beta;
      f.names.push_back("(n^2/4) beta1 int W1 u^2 / r^2");
      f.names.push_back("(mu^2/R^2) ((n-2)/2)^2 int u^2 / r^2");
      f.names.push_back("(mu^2/R^2) beta2 int W2 u^2");
      break;
    case RellichVariant::WithGradient:
      improvement = p.beta * n * n / 4.0;
      f.names.push_back("beta (n^2/4) int W u^2 / r^2");
      f.names.push_back("(mu^2/R^2) int |grad u|^2");
      break;
  }
  f.coefs.push_back(W.is_zero() ? 0.0 : improvement);
  if (p.variant == RellichVariant::TwoPotential) {
    if (!p.W2) fail(ErrorCode::InvalidArgument, "the two-potential variant needs W2");
    f.coefs.push_back(mu2 * std::pow((n - 2.0) / 2.0, 2));
    f.coefs.push_back(p.W2->is_zero() ? 0.0 : mu2 * p.beta2);
  } else if (p.variant == RellichVariant::WithGradient) {
    f.coefs.push_back(mu2);
  }
  const RadialPotential* W2 = p.W2 ? &*p.W2 : nullptr;
  const RellichVariant variant = p.variant;
  f.density = [&, m, W2, variant](double ck, double r, const Jet& q, double* out) {
    const double w = std::pow(r, n - 1.0 - 2.0 * m);
    const double L = lap(n, ck, r, q);
    const double u2 = q.v * q.v;
    out[0] = L * L * w;
    out[1] = u2 * w / (r * r * r * r);
    out[2] = W.is_zero() ? 0.0 : W.value(r) * u2 * w / (r * r);
    if (variant == RellichVariant::TwoPotential) {
      out[3] = u2 * w / (r * r);
      out[4] = W2->is_zero() ? 0.0 : W2->value(r) * u2 * w;
    } else if (variant == RellichVariant::WithGradient) {
      out[3] = grad2(ck, r, q) * w;
    }
  };
  DeficitReport rep = evaluate_form(f, u);
  rep.extras.emplace_back("H", H);
  rep.extras.emplace_back("improvement coefficient", improvement);

  mark(rep, u.vanishes_at_R(0), "u does not vanish on the boundary");
  switch (p.variant) {
    case RellichVariant::Basic:
      mark(rep, p.lambda <= n - 2.0 + 1e-12, "lambda > n - 2");
      break;
    case RellichVariant::Weighted:
      mark(rep, m >= -0.5 * n && m <= 0.5 * (n - 4), "m outside [-n/2, (n-4)/2]");
      mark(rep, p.lambda <= 0.5 * n + m + 1e-12, "lambda > n/2 + m");
      mark(rep, p.lambda >= n - 2.0 * m - 4.0 - 1e-12, "lambda < n - 2m - 4");
      break;
    case RellichVariant::LogChain:
    case RellichVariant::WithGradient:
      mark(rep, n >= 4, "n < 4");
      break;
    case RellichVariant::TwoPotential:
      mark(rep, n >= 5, "n < 5");
      break;
  }
  return rep;
}

DeficitReport one_dim_deficit(double alpha, const RadialPotential& W, double c,
                              const std::function<Jet(double)>& prof, double R,
                              const std::string& name, double r_min,
                              const std::vector<double>& breakpoints) {
  double log_der = 0.0;  // phi'(R)/phi(R)
  if (!W.is_zero() && c != 0.0) log_der = boundary_log_derivative(W, c, R) / R;
  const double g = 0.5 * (alpha - 1.0);
  Form f;
  f.name = "freq-in";
  f.n = 2;  // c_k is unused: a single profile with k = 0
  f.measure = 1.0;
  f.names = {"((a-1)/2)^2 int r^{a-2} f^2", "c int r^a W f^2",
             "(phi'(R)/phi(R) - (a-1)/(2R)) R^a f(R)^2"};
  f.coefs = {g * g, W.is_zero() ? 0.0 : c, log_der - g / R};
  f.density = [&](double, double r, const Jet& p, double* out) {
    const double w = std::pow(r, alpha);
    out[0] = w * p.d1 * p.d1;
    out[1] = w * p.v * p.v / (r * r);
    out[2] = W.is_zero() ? 0.0 : w * W.value(r) * p.v * p.v;
    out[3] = 0.0;
  };
  f.boundary = [&](double, const Jet& p, double* out) {
    out[0] = out[1] = 0.0;
    out[2] = std::pow(R, alpha) * p.v * p.v;
  };
  TestFunction u;
  u.name = name;
  u.R = R;
  u.r_min = r_min;
  u.breakpoints = breakpoints;
  u.modes.push_back({0, prof});
  DeficitReport rep = evaluate_form(f, u);
  rep.extras.emplace_back("phi'(R)/phi(R)", log_der);
  mark(rep, alpha >= 1.0, "alpha < 1");
  return rep;
}

// ---------------------------------------------------------------------------

bool SuperHardyReport::holds() const {
  return decreasing && cond_lambda1 && cond_lambda2.value_or(true) && cond_main && lambda1_le_n;
}

SuperHardyReport check_superhardy_conditions(const RadialPotential& V, int n, double R) {
  SuperHardyReport rep;
  rep.lambda1 = lambda_limit(V).lambda;

  // V_r identically zero makes lambda2 vacuous
  std::vector<double> radii;
  for (int i = 0; i < 400; ++i) radii.push_back(R * std::pow(1e-8, 1.0 - i / 399.0));
  bool flat = true;
  for (double r : radii) {
    const Jet j = V.jet(r);
    if (std::abs(r * j.d1) > 1e-13 * std::abs(j.v)) flat = false;
  }
  if (!flat) {
    const RadialPotential Vr = make_potential(
        PotentialSpec::custom_fn(
            [V](double r) {
              const double h = 1e-5 * r;
              const double d3 = (V.deriv2(r + h) - V.deriv2(r - h)) / (2.0 * h);
              return Jet{-V.deriv(r), -V.deriv2(r), -d3};
            },
            V.sing_exponent() - 1.0, -V.sing_coefficient() * V.sing_exponent()),
        R);
    try {
      rep.lambda2 = lambda_limit(Vr).lambda;
    } catch (const Error&) {
      rep.lambda2.reset();
    }
  }

  const double l1 = rep.lambda1;
  const double k1 = 0.5 * std::pow(n - l1 - 2.0, 2) + 3.0 * (n - 3.0);
  rep.decreasing = true;
  rep.cond_lambda1 = true;
  if (rep.lambda2) rep.cond_lambda2 = true;
  rep.cond_main_min = std::numeric_limits<double>::infinity();
  const double tol1 = 1e-6 * (1.0 + std::abs(l1));
  for (double r : radii) {
    const Jet j = V.jet(r);
    if (j.d1 > 1e-14 * std::abs(j.v) / r) rep.decreasing = false;
    if (r * j.d1 / j.v + l1 < -tol1) rep.cond_lambda1 = false;
    if (rep.lambda2 && j.d1 != 0.0 &&
        r * j.d2 / j.d1 + *rep.lambda2 < -1e-6 * (1.0 + std::abs(*rep.lambda2)))
      rep.cond_lambda2 = false;
    const double e = (k1 * j.v - (n - 5.0) * r * j.d1 - r * r * j.d2) / j.v;
    rep.cond_main_min = std::min(rep.cond_main_min, e);
  }
  rep.cond_main = rep.cond_main_min >= -1e-12;
  rep.lambda1_le_n = l1 <= n + 1e-12;
  rep.rellich_constant =
      (std::pow(n - l1 - 2.0, 2) / 4.0 + (n - 1.0)) * std::pow(n - l1 - 4.0, 2) / 4.0;
  if (rep.lambda2) rep.gradient_constant = (n - 1.0) * std::pow(n - *rep.lambda2 - 2.0, 2) / 4.0;
  return rep;
}

// ---------------------------------------------------------------------------

TestFunction from_trajectory(const Trajectory& tr, double R, const std::string& name) {
  if (tr.r.size() < 2) fail(ErrorCode::InvalidArgument, "trajectory has no samples");
  auto data = std::make_shared<Trajectory>(tr);
  const double r0 = tr.r.front();
  const double end = tr.first_zero ? *tr.first_zero : tr.r.back();
  const double y0 = tr.y.front();
  const double sigma = tr.sigma;
  TestFunction u;
  u.name = name;
  u.R = R;
  u.r_min = r0;
  if (end < R) u.breakpoints.push_back(end);
  u.modes.push_back({0, [data, r0, end, y0, sigma](double r) {
                       if (r < r0) {
                         const double v = y0 * std::pow(r / r0, sigma);
                         return Jet{v, sigma * v / r, sigma * (sigma - 1.0) * v / (r * r)};
                       }
                       if (r > end) return Jet{};
                       return data->sample(r);
                     }});
  return u;
}

TestFunction from_samples(const std::vector<double>& r, const std::vector<double>& f, int k,
                          const std::string& name) {
  if (r.size() != f.size() || r.size() < 8)
    fail(ErrorCode::InvalidArgument, "from_samples needs matching arrays of >= 8 points");
  const double s0 = std::log(r.front());
  const double h = (std::log(r.back()) - s0) / (r.size() - 1.0);
  for (size_t i = 1; i < r.size(); ++i)
    if (std::abs(std::log(r[i]) - s0 - h * i) > 1e-6 * std::abs(h))
      fail(ErrorCode::InvalidArgument, "samples must be uniform in log r");
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  auto spl = std::make_shared<Spline>(f.begin(), f.end(), s0, h);
  const double r0 = r.front(), f0 = f.front();
  TestFunction u;
  u.name = name;
  u.R = r.back();
  u.r_min = r0;
  u.modes.push_back({k, [spl, r0, f0, k](double x) {
                       if (x <= r0) {
                         const double v = f0 * std::pow(x / r0, k);
                         return Jet{v, k * v / x, k * (k - 1.0) * v / (x * x)};
                       }
                       const double s = std::log(x);
                       const double d1 = spl->prime(s), d2 = spl->double_prime(s);
                       return Jet{(*spl)(s), d1 / x, (d2 - d1) / (x * x)};
                     }});
  return u;
}

namespace {

using Prof = std::function<Jet(double)>;

// polynomial in t = r/R
Prof poly(std::vector<double> c, double R) {
  return [c = std::move(c), R](double r) {
    const double t = r / R;
    double v = 0.0, d1 = 0.0, d2 = 0.0;
    for (size_t j = c.size(); j-- > 0;) {
      d2 = d2 * t + 2.0 * d1;
      d1 = d1 * t + v;
      v = v * t + c[j];
    }
    return Jet{v, d1 / R, d2 / (R * R)};
  };
}

Prof gauss(double a, double R, double shift = 0.0) {
  return [a, R, shift](double r) {
    const double t = r / R;
    const double e = std::exp(-a * t * t);
    return Jet{e - shift, -2.0 * a * t * e / R, (4.0 * a * a * t * t - 2.0 * a) * e / (R * R)};
  };
}

Prof cosine(double w, double R) {
  return [w, R](double r) {
    const double x = w * r / R, s = w / R;
    return Jet{std::cos(x), -s * std::sin(x), -s * s * std::cos(x)};
  };
}

Prof mul(Prof a, Prof b) {
  return [a = std::move(a), b = std::move(b)](double r) {
    const Jet p = a(r), q = b(r);
    return Jet{p.v * q.v, p.d1 * q.v + p.v * q.d1, p.d2 * q.v + 2.0 * p.d1 * q.d1 + p.v * q.d2};
  };
}

Prof scale(Prof a, double s) {
  return [a = std::move(a), s](double r) {
    const Jet p = a(r);
    return Jet{s * p.v, s * p.d1, s * p.d2};
  };
}

Prof tk(int k, double R) {
  std::vector<double> c(k + 1, 0.0);
  c[k] = 1.0;
  return poly(c, R);
}

TestFunction tf(std::string name, double R, std::vector<ModeProfile> modes) {
  TestFunction u;
  u.name = std::move(name);
  u.R = R;
  u.modes = std::move(modes);
  return u;
}

}  // namespace

std::vector<TestFunction> builtin_suite(double R) {
  const double pi = boost::math::constants::pi<double>();
  const double e4 = std::exp(-4.0);
  const Prof one_m_t2 = poly({1, 0, -1}, R);
  std::vector<TestFunction> s;
  // radial, vanishing at R
  s.push_back(tf("1-t^2", R, {{0, one_m_t2}}));
  s.push_back(tf("(1-t^2)^2", R, {{0, poly({1, 0, -2, 0, 1}, R)}}));
  s.push_back(tf("(1-t^2)^3", R, {{0, poly({1, 0, -3, 0, 3, 0, -1}, R)}}));
  s.push_back(tf("cos(pi t/2)", R, {{0, cosine(0.5 * pi, R)}}));
  s.push_back(tf("(1-t^2)exp(-t^2)", R, {{0, mul(one_m_t2, gauss(1.0, R))}}));
  s.push_back(tf("exp(-4t^2)-exp(-4)", R, {{0, gauss(4.0, R, e4)}}));
  s.push_back(tf("(1-t^2)(1-3t^2)", R, {{0, poly({1, 0, -4, 0, 3}, R)}}));
  s.push_back(tf("1-t^4", R, {{0, poly({1, 0, 0, 0, -1}, R)}}));
  // radial, not vanishing at R
  s.push_back(tf("1-t^2/2", R, {{0, poly({1, 0, -0.5}, R)}}));
  s.push_back(tf("exp(-t^2)", R, {{0, gauss(1.0, R)}}));
  s.push_back(tf("1+t^2", R, {{0, poly({1, 0, 1}, R)}}));
  s.push_back(tf("cos(t)", R, {{0, cosine(1.0, R)}}));
  s.push_back(tf("(1-t^2/2)^2", R, {{0, poly({1, 0, -1, 0, 0.25}, R)}}));
  s.push_back(tf("1", R, {{0, poly({1}, R)}}));
  s.push_back(tf("1+t^2-t^4/3", R, {{0, poly({1, 0, 1, 0, -1.0 / 3.0}, R)}}));
  s.push_back(tf("exp(-4t^2)", R, {{0, gauss(4.0, R)}}));
  // non-radial, every mode vanishing at R
  s.push_back(tf("k1: t(1-t^2)", R, {{1, poly({0, 1, 0, -1}, R)}}));
  s.push_back(tf("k2: t^2(1-t^2)", R, {{2, poly({0, 0, 1, 0, -1}, R)}}));
  s.push_back(tf("k3: t^3(1-t^2)^2", R, {{3, poly({0, 0, 0, 1, 0, -2, 0, 1}, R)}}));
  s.push_back(tf("k1: t(1-t^2)exp(-t^2)", R, {{1, mul(poly({0, 1, 0, -1}, R), gauss(1.0, R))}}));
  s.push_back(tf("k0,1,2 mix", R,
                 {{0, poly({1, 0, -2, 0, 1}, R)},
                  {1, scale(poly({0, 1, 0, -1}, R), 0.5)},
                  {2, scale(poly({0, 0, 1, 0, -1}, R), 0.3)}}));
  s.push_back(tf("k0,2 mix", R,
                 {{0, poly({1, 0, -3, 0, 3, 0, -1}, R)}, {2, poly({0, 0, 1, 0, 0, 0, -1}, R)}}));
  s.push_back(tf("k1,3 mix", R,
                 {{1, poly({0, 1, 0, -1}, R)}, {3, scale(poly({0, 0, 0, 1, 0, -1}, R), -0.7)}}));
  s.push_back(tf("k4: t^4(1-t^2)", R, {{4, poly({0, 0, 0, 0, 1, 0, -1}, R)}}));
  {
    std::vector<ModeProfile> modes;
    for (int k = 0; k <= 3; ++k) modes.push_back({k, mul(tk(k, R), gauss(4.0, R, e4))});
    s.push_back(tf("k0..3 bumps t^k(exp(-4t^2)-exp(-4))", R, modes));
  }
  s.push_back(tf("k1: t(1-t^2)(1-2t^2)", R, {{1, poly({0, 1, 0, -3, 0, 2}, R)}}));
  s.push_back(tf("k2: t^2(1-t^2)^2", R, {{2, poly({0, 0, 1, 0, -2, 0, 1}, R)}}));
  s.push_back(tf("k0,5 mix", R, {{0, one_m_t2}, {5, poly({0, 0, 0, 0, 0, 1, 0, -1}, R)}}));
  // non-radial with a non-vanishing radial part
  s.push_back(tf("k0,1: 1-t^2/2 + t(1-t^2)", R,
                 {{0, poly({1, 0, -0.5}, R)}, {1, poly({0, 1, 0, -1}, R)}}));
  s.push_back(tf("k0,1: exp(-t^2)(1 + t)", R,
                 {{0, gauss(1.0, R)}, {1, mul(tk(1, R), gauss(1.0, R))}}));
  return s;
}

std::vector<TestFunction> random_suite(int count, std::uint64_t seed, double R) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> nmodes(1, 3), kdist(0, 4);
  std::vector<TestFunction> out;
  for (int i = 0; i < count; ++i) {
    std::vector<ModeProfile> modes;
    std::ostringstream name;
    name << "random#" << i << " seed " << seed << ":";
    std::vector<int> used;
    const int nm = nmodes(rng);
    while (static_cast<int>(used.size()) < nm) {
      const int k = kdist(rng);
      if (std::find(used.begin(), used.end(), k) != used.end()) continue;
      used.push_back(k);
      // t^k (1 - t^2)(a0 + a1 t^2 + a2 t^4)
      const double a0 = coef(rng), a1 = coef(rng), a2 = coef(rng);
      std::vector<double> c(k + 7, 0.0);
      c[k] = a0;
      c[k + 2] = a1 - a0;
      c[k + 4] = a2 - a1;
      c[k + 6] = -a2;
      modes.push_back({k, poly(c, R)});
      name << " k" << k;
    }
    out.push_back(tf(name.str(), R, modes));
  }
  return out;
}

TestFunction ckn_cutoff(double g, double L, double R) {
  if (!(L > 0.0)) fail(ErrorCode::InvalidArgument, "cutoff length must be positive");
  TestFunction u;
  std::ostringstream name;
  name << "r^-" << g << " log-cutoff L=" << L;
  u.name = name.str();
  u.R = R;
  u.r_min = R * std::exp(-2.0 * L) * 0.5;
  u.breakpoints = {R * std::exp(-L), R * std::exp(-2.0 * L)};
  u.modes.push_back({0, [g, L, R](double r) {
                       const double s = std::log(r / R);
                       double p = 1.0, ps = 0.0, pss = 0.0;
                       if (s <= -2.0 * L) {
                         p = 0.0;
                       } else if (s < -L) {
                         const double x = (s + 2.0 * L) / L;
                         p = x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
                         ps = 30.0 * x * x * (1.0 - x) * (1.0 - x) / L;
                         pss = 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x) / (L * L);
                       }
                       // normalized to 1 where the ramp ends, which keeps f'' finite for long ramps
                       const double a = std::exp(-g * (s + L));
                       const double h = ps - g * p;
                       const double hs = pss - g * ps;
                       return Jet{a * p, a * h / r, a * (hs - (g + 1.0) * h) / (r * r)};
                     }});
  return u;
}

// ---------------------------------------------------------------------------
// named cases

std::vector<std::string> case_names() {
  return {"hardy",    "hr-radial", "hr",      "gm-hr",   "hr-cn", "rellich",
          "weighted-rellich", "log-rellich",     "two-potential", "hr-gradient", "freq-in"};
}

CaseParams default_case(const std::string& name) {
  CaseParams p;
  p.name = name;
  if (name == "hardy") {
    p.n = 5;
    p.a = 0.5;
  } else if (name == "hr-radial") {
    p.n = 3;
  } else if (name == "hr") {
    p.n = 6;
    p.m = 0.1;
  } else if (name == "gm-hr") {
    p.n = 6;
    p.m = -0.5;
  } else if (name == "hr-cn") {
    p.n = 5;
  } else if (name == "rellich") {
    p.n = 5;
  } else if (name == "weighted-rellich") {
    p.n = 6;
    p.m = 0.5;
    p.k = 1;
  } else if (name == "log-rellich") {
    p.n = 5;
    p.k = 1;
  } else if (name == "two-potential") {
    p.n = 5;
  } else if (name == "hr-gradient") {
    p.n = 6;
  } else if (name == "freq-in") {
    p.n = 4;
    p.alpha = 3.0;
  } else {
    fail(ErrorCode::InvalidArgument, "unknown inequality '" + name + "'");
  }
  return p;
}

namespace {

double constrained_beta(const RadialPotential& W, double R, double ratio) {
  if (W.is_zero()) return 0.0;
  const double beta = bessel_potential_weight(W, R);
  auto one = make_potential(PotentialSpec::constant(1.0), R);
  const OdeProblem base = OdeProblem::make(2, one, W, 1.0, R, OdeDim::TwoD);
  return boundary_constrained_weight(base, beta, ratio);
}

double lambda_or(const RadialPotential& W, double fallback) {
  if (W.is_zero()) return fallback;
  try {
    return lambda_limit(W).lambda;
  } catch (const Error&) {
    return fallback;
  }
}

}  // namespace

PreparedCase prepare_case(const CaseParams& p) {
  PreparedCase c;
  c.params = p;
  const int n = p.n;
  const double R = p.R;
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  if (!(R > 0.0)) fail(ErrorCode::InvalidArgument, "R must be positive");
  auto mk = [&](const std::optional<PotentialSpec>& s, const PotentialSpec& dflt) {
    return make_potential(s ? *s : dflt, R);
  };
  const std::string& name = p.name;
  if (name == "hardy" || name == "hr-radial" || name == "hr") {
    double mv = 0.0;
    if (name == "hardy") mv = p.a;
    if (name == "hr") mv = p.m;
    const double g = 0.5 * (n - 2.0 * mv - 2.0);
    c.V = mk(p.V, mv == 0.0 ? PotentialSpec::constant(1.0) : PotentialSpec::power(mv));
    c.W = mk(p.W, PotentialSpec::scaled(g * g, PotentialSpec::power(mv + 1.0)));
    if (p.V || p.W) {
      c.theta = theta(OdeProblem::make(n, c.V, c.W, 1.0, R));
    } else {
      c.theta = -g * std::pow(R, -2.0 * mv - 1.0);
    }
    c.constants.emplace_back("theta", c.theta);
    if (name == "hr") {
      c.condition = check_condition_main(c.V, c.W, n, R);
      c.constants.emplace_back("condition min", c.condition->min_value);
    }
    if (name != "hardy") {
      c.constant = c.theta + (n - 1.0) * c.V.value(R) / R;
      c.constants.emplace_back("boundary coefficient", c.constant);
    }
  } else if (name == "gm-hr" || name == "hr-cn") {
    const double m = name == "hr-cn" ? 0.0 : p.m;
    c.W = mk(p.W, PotentialSpec::constant(1.0));
    std::optional<double> a = name == "hr-cn" ? C_of_n(n) : a_closed_form(n, m);
    if (!a) {
      RayleighOptions ro;
      ro.refine = false;
      a = min_rayleigh(n, m, QuotientKind::GradOverGrad, BoundaryCondition::H2, ro).value;
    }
    c.constant = *a;
    c.beta = constrained_beta(c.W, R, 0.5 * n + m);
    c.constants.emplace_back("a", c.constant);
    c.constants.emplace_back("beta", c.beta);
  } else if (name == "rellich" || name == "weighted-rellich" || name == "log-rellich") {
    const double m = name == "weighted-rellich" ? p.m : 0.0;
    const PotentialSpec dflt = name == "rellich"
                                   ? PotentialSpec::constant(1.0)
                                   : PotentialSpec::log_chain(p.k, default_chain_rho(p.k, R));
    c.W = mk(p.W, dflt);
    c.params.lambda = lambda_or(c.W, p.lambda);
    if (name == "log-rellich") {
      c.constant = 1.0 + n * (n - 4.0) / 8.0;
    } else {
      c.beta = constrained_beta(c.W, R, 0.5 * n + m);
      c.constants.emplace_back("beta", c.beta);
    }
    c.constants.emplace_back("lambda", c.params.lambda);
    c.constants.emplace_back("H", std::pow((n + 2.0 * m) * (n - 4.0 - 2.0 * m) / 4.0, 2));
  } else if (name == "two-potential" || name == "hr-gradient") {
    c.mu = mu_for_dimension(n).mu;
    if (name == "two-potential") {
      c.W = mk(p.W, PotentialSpec::log_chain(1, default_chain_rho(1, R)));
      c.W2 = mk(p.W2, PotentialSpec::constant(1.0));
      c.beta = c.W.is_zero() ? 0.0 : bessel_potential_weight(c.W, R);
      c.beta2 = c.W2.is_zero() ? 0.0 : bessel_potential_weight(c.W2, R);
      c.constants.emplace_back("beta2", c.beta2);
    } else {
      c.W = mk(p.W, PotentialSpec::constant(1.0));
      c.beta = c.W.is_zero() ? 0.0 : bessel_potential_weight(c.W, R);
    }
    c.constants.emplace_back("beta", c.beta);
    c.constants.emplace_back("mu", c.mu);
  } else if (name == "freq-in") {
    c.W = mk(p.W, PotentialSpec::constant(1.0));
    c.beta = c.W.is_zero() ? 0.0 : 0.9 * bessel_potential_weight(c.W, R);
    c.constants.emplace_back("c", c.beta);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown inequality '" + name + "'");
  }
  return c;
}

DeficitReport evaluate_case(const PreparedCase& c, const TestFunction& u) {
  const CaseParams& p = c.params;
  const std::string& name = p.name;
  if (std::abs(u.R - p.R) > 1e-12 * p.R)
    fail(ErrorCode::InvalidArgument, "test function radius differs from the case radius");
  DeficitReport rep;
  try {
    if (name == "hardy") {
      rep = hardy_deficit(c.V, c.W, c.theta, u, p.n);
    } else if (name == "hr-radial" || name == "hr") {
      rep = hardy_rellich_deficit(c.V, c.W, u, p.n, c.theta,
                                  c.condition ? &*c.condition : nullptr);
      if (name == "hr-radial") mark(rep, u.radial(), "u is not radial");
    } else if (name == "gm-hr" || name == "hr-cn") {
      rep = gm_hr_deficit(c.W, u, p.n, name == "hr-cn" ? 0.0 : p.m, c.constant, c.beta);
    } else if (name == "freq-in") {
      DeficitReport sum;
      for (const auto& m : u.modes) {
        DeficitReport r1 = one_dim_deficit(p.alpha, c.W, c.beta, m.f, u.R, u.name, u.r_min,
                                           u.breakpoints);
        if (sum.rhs_terms.empty()) {
          sum = r1;
          continue;
        }
        sum.lhs += r1.lhs;
        for (size_t i = 0; i < sum.rhs_terms.size(); ++i)
          sum.rhs_terms[i].second += r1.rhs_terms[i].second;
        sum.deficit += r1.deficit;
        sum.quad_error += r1.quad_error;
      }
      rep = sum;
    } else {
      RellichParams rp;
      rp.variant = parse_rellich_variant(name);
      rp.m = p.m;
      rp.lambda = p.lambda;
      rp.beta = c.beta;
      rp.beta2 = c.beta2;
      rp.mu = c.mu;
      if (rp.variant == RellichVariant::TwoPotential) rp.W2 = c.W2;
      rep = improved_rellich_deficit(c.W, u, p.n, rp);
    }
  } catch (const Error& e) {
    rep = DeficitReport{};
    rep.function = u.name;
    rep.deficit = std::numeric_limits<double>::quiet_NaN();
    rep.lhs = std::numeric_limits<double>::quiet_NaN();
    rep.hypotheses_ok = false;
    rep.note = std::string("not evaluated: ") + e.what();
  }
  rep.inequality = name;
  return rep;
}

int default_thread_count() {
  if (const char* env = std::getenv("HRKIT_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
}

std::vector<DeficitReport> verify_suite(const PreparedCase& c,
                                        const std::vector<TestFunction>& suite, int threads) {
  std::vector<DeficitReport> out(suite.size());
  if (threads <= 0) threads = default_thread_count();
  threads = std::max(1, std::min<int>(threads, static_cast<int>(suite.size())));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < suite.size(); i = next++) out[i] = evaluate_case(c, suite[i]);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

// ---------------------------------------------------------------------------

EquivalenceReport verify_equivalence(const RadialPotential& V, const RadialPotential& W,
                                              int n, double R, double c,
                                              const std::vector<TestFunction>& suite) {
  EquivalenceReport rep;
  rep.c = c;
  const OdeProblem base = OdeProblem::make(n, V, W, 1.0, R);
  const RadialPotential cW = make_potential(PotentialSpec::scaled(c, W.spec()), R);

  auto run_suite = [&](double th) {
    rep.reports.clear();
    for (const auto& u : suite) {
      DeficitReport r;
      try {
        r = hardy_deficit(V, cW, th, u, n);
      } catch (const Error& e) {
        r.function = u.name;
        r.inequality = "hardy";
        r.deficit = std::numeric_limits<double>::quiet_NaN();
        r.hypotheses_ok = false;
        r.note = std::string("not evaluated: ") + e.what();
      }
      rep.reports.push_back(std::move(r));
    }
  };

  PairVerdict v;
  if (c <= 0.0 || W.is_zero()) {
    v.positive = true;
  } else {
    v = is_bessel_pair(base, c);
  }
  rep.bessel_pair = v.positive;

  if (v.positive) {
    double th = 0.0;
    if (c > 0.0 && !W.is_zero()) {
      try {
        th = theta(base.with_c(c));
      } catch (const Error& e) {
        rep.verdict = std::string("inconclusive: ") + e.what();
        return rep;
      }
    }
    rep.theta = th;
    run_suite(th);
    for (const auto& r : rep.reports)
      if (std::isfinite(r.deficit) && !r.holds(1.0)) rep.consistent = false;
    rep.verdict = rep.consistent ? "inequality held on every test function (a finite suite cannot "
                                   "prove it)"
                                 : "a deficit is negative although the equation has a positive "
                                   "solution";
    return rep;
  }

  // supercritical: last positive multiplier and a violator built from the oscillating solution
  WeightOptions wo;
  const WeightResult w = weight(base, wo);
  if (!w.unbounded && w.c_lo < c) {
    rep.c_lo = w.c_lo;
    try {
      rep.theta = theta(base.with_c(w.c_lo));
    } catch (const Error&) {
      rep.theta = w.theta_at_beta;
    }
  }
  if (rep.theta) run_suite(*rep.theta);
  for (const auto& r : rep.reports)
    if (std::isfinite(r.deficit) && !r.holds(1.0) && (!rep.violator || r.deficit < rep.violator->deficit))
      rep.violator = r;

  // the solution at a multiplier between beta and c vanishes inside the ball
  if (!rep.violator) {
    try {
      const double cv = (w.c_hi < c) ? w.c_hi : 0.5 * (w.beta + c);
      const Trajectory tr = shoot_from_origin(base.with_c(cv));
      if (tr.first_zero && *tr.first_zero < R) {
        const TestFunction u = from_trajectory(tr, R, "oscillating solution truncated at its first zero");
        DeficitReport r = hardy_deficit(V, cW, rep.theta.value_or(0.0), u, n);
        rep.reports.push_back(r);
        if (!r.holds(1.0)) rep.violator = r;
      }
    } catch (const Error&) {
    }
  }
  rep.conclusive = rep.violator.has_value();
  rep.verdict = rep.conclusive ? "no positive solution and a violating test function was found"
                               : "no positive solution; no violator found in the suite (inconclusive)";
  return rep;
}

}  // namespace hrkit
