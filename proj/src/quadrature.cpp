#include "hrkit/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "hrkit/error.hpp"

namespace hrkit {

namespace {

struct Rule {
  std::vector<double> x, w;  // on [-1, 1]
};

template <unsigned N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule rule;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (size_t i = 0; i < a.size(); ++i) {
    rule.x.push_back(a[i]);
    rule.w.push_back(w[i]);
    if (a[i] != 0.0) {
      rule.x.push_back(-a[i]);
      rule.w.push_back(w[i]);
    }
  }
  return rule;
}

const Rule& gl5() {
  static const Rule r = make_rule<5>();
  return r;
}
const Rule& gl3() {
  static const Rule r = make_rule<3>();
  return r;
}

}  // namespace

std::vector<QuadResult> integrate_radial(const std::function<void(double, double*)>& eval,
                                         int count, double R, const QuadOptions& opts,
                                         const std::vector<double>& breakpoints) {
  if (!(R > 0.0)) fail(ErrorCode::InvalidArgument, "integration radius must be positive");
  const double r_min = opts.r_min > 0.0 ? opts.r_min : 1e-12 * R;
  const double dr_cap = opts.max_panel_dr > 0.0 ? opts.max_panel_dr : R / 64.0;

  // panel edges in s, from log R downward
  std::vector<double> stops;
  for (double b : breakpoints)
    if (b > r_min && b < R) stops.push_back(std::log(b));
  std::sort(stops.begin(), stops.end(), std::greater<>());
  std::vector<double> edges{std::log(R)};
  const double s_min = std::log(r_min);
  size_t next_stop = 0;
  while (edges.back() > s_min) {
    const double s = edges.back();
    double ds = std::min(opts.panel_ds, dr_cap / std::exp(s));
    double s_next = std::max(s - ds, s_min);
    while (next_stop < stops.size() && stops[next_stop] >= s) ++next_stop;
    if (next_stop < stops.size() && stops[next_stop] > s_next) s_next = stops[next_stop];
    edges.push_back(s_next);
  }

  std::vector<double> v5(count, 0.0), v3(count, 0.0), err(count, 0.0), mag(count, 0.0);
  std::vector<double> buf(count), p5(count), p3(count);
  for (size_t p = 0; p + 1 < edges.size(); ++p) {
    const double hi = edges[p], lo = edges[p + 1];
    const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
    std::fill(p5.begin(), p5.end(), 0.0);
    std::fill(p3.begin(), p3.end(), 0.0);
    for (size_t i = 0; i < gl5().x.size(); ++i) {
      const double r = std::exp(mid + half * gl5().x[i]);
      eval(r, buf.data());
      for (int c = 0; c < count; ++c) p5[c] += gl5().w[i] * buf[c] * r * half;
    }
    for (size_t i = 0; i < gl3().x.size(); ++i) {
      const double r = std::exp(mid + half * gl3().x[i]);
      eval(r, buf.data());
      for (int c = 0; c < count; ++c) p3[c] += gl3().w[i] * buf[c] * r * half;
    }
    for (int c = 0; c < count; ++c) {
      v5[c] += p5[c];
      err[c] += std::abs(p5[c] - p3[c]);
      mag[c] += std::abs(p5[c]);
    }
  }

  std::vector<QuadResult> out(count);
  if (opts.tail) {
    std::vector<double> g1(count), g2(count);
    eval(r_min, g1.data());
    eval(2.0 * r_min, g2.data());
    for (int c = 0; c < count; ++c) {
      if (g1[c] == 0.0) continue;
      if (!std::isfinite(g1[c])) fail(ErrorCode::DivergentIntegral, "integrand not finite near 0");
      double tail = 0.0;
      const bool same_sign = g1[c] * g2[c] > 0.0;
      const double kappa = same_sign ? std::log(g2[c] / g1[c]) / std::log(2.0) : 0.0;
      if (same_sign && kappa > -1.0 + 1e-6) {
        tail = g1[c] * r_min / (kappa + 1.0);
      } else {
        tail = g1[c] * r_min;
        // a non-decaying tail is only acceptable when it is negligible
        if (std::abs(tail) > 1e-10 * std::max(mag[c], 1e-300)) {
          std::ostringstream msg;
          msg << "integrand behaves like r^" << kappa << " near 0; integral diverges";
          fail(ErrorCode::DivergentIntegral, msg.str());
        }
      }
      v5[c] += tail;
      err[c] += 0.5 * std::abs(tail);
    }
  }
  for (int c = 0; c < count; ++c) {
    out[c].value = v5[c];
    out[c].error = err[c] + 1e-14 * mag[c];
  }
  return out;
}

QuadResult integrate_radial(const std::function<double(double)>& f, double R,
                            const QuadOptions& opts) {
  return integrate_radial([&](double r, double* o) { o[0] = f(r); }, 1, R, opts)[0];
}

}  // namespace hrkit
