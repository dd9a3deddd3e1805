// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "hrkit/bessel_weight.hpp"
#include "hrkit/error.hpp"
#include "hrkit/inequality.hpp"
#include "hrkit/special_functions.hpp"
#include "hrkit/spectral.hpp"

using namespace hrkit;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

RadialPotential P(const PotentialSpec& s, double R = 1.0) { return make_potential(s, R); }

void c1() {
  const auto t0 = std::chrono::steady_clock::now();
  const OdeProblem p = OdeProblem::make(3, P(PotentialSpec::constant(1.0)),
                                        P(PotentialSpec::constant(1.0)), 1.0, 1.0);
  const double beta = weight(p).beta;
  const double t = seconds_since(t0);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double e = rel(beta, pi2);
  report(1, e <= 1e-6 && t < 5.0, fmt("beta = %.12f, rel err %.2e, %.3f s", beta, e, t));
}

void c2() {
  const int n = 5;
  double worst_b = 0.0, worst_t = 0.0;
  for (double a : {0.0, 0.5, 1.0}) {
    const double g = (n - 2.0 * a - 2.0) / 2.0;
    const OdeProblem p = OdeProblem::make(n, P(PotentialSpec::power(a)), P(PotentialSpec::power(a + 1.0)),
                                          1.0, 1.0);
    const double beta = weight(p).beta;
    const double th = theta(p.with_c(g * g));
    worst_b = std::max(worst_b, rel(beta, g * g));
    worst_t = std::max(worst_t, rel(th, -g));
  }
  report(2, worst_b <= 1e-5 && worst_t <= 1e-5,
         fmt("a in {0, 0.5, 1}: worst beta rel err %.2e, worst theta rel err %.2e", worst_b, worst_t));
}

void c3() {
  bool ok = true;
  std::string detail;
  double slowest = 0.0;
  for (int n : {5, 4, 3}) {
    const double exact = *C_of_n(n);
    double v[2][2] = {};  // [bc][grid]
    int bi = 0;
    for (auto bc : {BoundaryCondition::H2, BoundaryCondition::H20}) {
      int gi = 0;
      for (int N : {400, 800}) {
        RayleighOptions o;
        o.grid.N = N;
        o.refine = false;
        const auto t0 = std::chrono::steady_clock::now();
        v[bi][gi] = min_rayleigh(n, 0.0, QuotientKind::GradOverGrad, bc, o).value;
        const double t = seconds_since(t0);
        slowest = std::max(slowest, t);
        if (rel(v[bi][gi], exact) > 0.02 || t >= 30.0) ok = false;
        ++gi;
      }
      ++bi;
    }
    const double tol = std::abs(v[0][1] - v[0][0]) + std::abs(v[1][1] - v[1][0]) + 1e-3 * exact;
    if (std::abs(v[0][1] - v[1][1]) > tol) ok = false;
    detail += fmt("a_%d,0: H2 %.5f/%.5f H20 %.5f/%.5f (exact %.5f); ", n, v[0][0], v[0][1], v[1][0],
                  v[1][1], exact);
  }
  detail += fmt("slowest run %.2f s", slowest);
  report(3, ok, detail);
}

void c4() {
  bool ok = true;
  std::string detail;
  const int cases[3][2] = {{6, 0}, {5, 0}, {8, 1}};
  for (const auto& nm : cases) {
    const double H = H_closed_form(nm[0], nm[1]);
    RayleighOptions o;
    o.grid.N = 800;
    o.refine = false;
    const double v = min_rayleigh(nm[0], nm[1], QuotientKind::DeltaOverU, BoundaryCondition::H2capH10, o).value;
    if (rel(v, H) > 0.02) ok = false;
    detail += fmt("H_%d,%d = %.5f vs %.5f; ", nm[0], nm[1], v, H);
  }
  report(4, ok, detail);
}

void c5() {
  const double z0 = first_zero_j0();
  bool ok = std::round(z0 * 1e4) / 1e4 == 2.4048;
  double worst = 0.0;
  for (int n = 1; n <= 12; ++n) {
    const MuResult m = mu_for_dimension(n);
    worst = std::max(worst, std::abs(m.residual));
    if (!(std::abs(m.residual) < 1e-9 && m.mu > 0.0 && m.mu < z0)) ok = false;
  }
  report(5, ok, fmt("z0 = %.10f, worst mu residual %.2e over n = 1..12", z0, worst));
}

// Random admissible (V, W) pairs from the catalogue.
struct Pair {
  int n;
  PotentialSpec V, W;
  std::string label;
};

Pair random_pair(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dn(3, 8), dk(1, 2), dw(0, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Pair p;
  p.n = dn(rng);
  const double a = u(rng) < 0.3 ? 0.0 : u(rng) * ((p.n - 2.0) / 2.0 - 0.25);
  p.V = a == 0.0 ? PotentialSpec::constant(1.0) : PotentialSpec::power(a);
  p.label = fmt("n=%d V=r^-%.3f ", p.n, 2 * a);
  switch (dw(rng)) {
    case 0: {
      const double w = 0.5 + 2.5 * u(rng);
      p.W = PotentialSpec::constant(w);
      p.label += fmt("W=%.3f", w);
      break;
    }
    case 1: {
      const double b = a + 0.9 * u(rng);
      p.W = PotentialSpec::power(b);
      p.label += fmt("W=r^-%.3f", 2 * b);
      break;
    }
    case 2: {
      const int k = dk(rng);
      p.W = PotentialSpec::log_chain(k, 0.0);
      p.label += fmt("W=log chain %d", k);
      break;
    }
    case 3: {
      const int k = dk(rng);
      p.W = PotentialSpec::x_chain(k);
      p.label += fmt("W=X chain %d", k);
      break;
    }
    default: {
      const double w = 0.5 + u(rng);
      p.W = PotentialSpec::sum({PotentialSpec::constant(w), PotentialSpec::power(a + 0.5)});
      p.label += fmt("W=%.3f+r^-%.3f", w, 2 * a + 1);
      break;
    }
  }
  return p;
}

void c6() {
  std::mt19937_64 rng(20240611);
  bool ok = true;
  std::string bad;
  for (int i = 0; i < 20; ++i) {
    const Pair pr = random_pair(rng);
    try {
      const OdeProblem base = OdeProblem::make(pr.n, P(pr.V), P(pr.W), 1.0, 1.0);
      const WeightResult w = weight(base);
      if (w.unbounded) throw Error(ErrorCode::NoConvergence, "unbounded weight");
      // certificates re-verify
      const bool cert = is_bessel_pair(base, w.c_lo).positive && !is_bessel_pair(base, w.c_hi).positive &&
                        w.certificate_lo.positive && !w.certificate_hi.positive &&
                        (w.c_hi - w.c_lo) <= 1e-6 * w.beta;
      double prev = std::numeric_limits<double>::infinity();
      bool mono = true;
      for (int j = 0; j < 10; ++j) {
        const double c = w.beta * 0.3 * std::pow(20.0, j / 9.0);
        const Trajectory t = shoot_from_origin(base.with_c(c));
        const double z = t.first_zero ? *t.first_zero : std::numeric_limits<double>::infinity();
        if (z > prev * (1.0 + 1e-9)) mono = false;
        // a zero inside the ball exactly when c exceeds the weight
        if (c < w.c_lo && t.first_zero) mono = false;
        if (c > w.c_hi && !t.first_zero) mono = false;
        prev = z;
      }
      if (!cert || !mono) {
        ok = false;
        bad += pr.label + (cert ? "" : " [certificate]") + (mono ? "" : " [monotone]") + "; ";
      }
    } catch (const Error& e) {
      ok = false;
      bad += pr.label + " [" + e.what() + "]; ";
    }
  }
  report(6, ok, ok ? "20 random pairs, 10-point c-grids monotone, certificates re-verified" : bad);
}

void c7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto suite = builtin_suite(1.0);
  int evaluated = 0, within = 0, violations = 0, skipped = 0;
  std::string bad;
  for (const auto& name : case_names()) {
    const PreparedCase pc = prepare_case(default_case(name));
    for (const auto& r : verify_suite(pc, suite)) {
      ++evaluated;
      if (!std::isfinite(r.deficit)) {
        ++skipped;
        bad += name + "/" + r.function + " not evaluated; ";
        continue;
      }
      if (!r.hypotheses_ok) continue;
      ++within;
      if (!r.holds()) {
        ++violations;
        bad += fmt("%s/%s deficit %.3e; ", name.c_str(), r.function.c_str(), r.deficit);
      }
    }
  }
  const double t = seconds_since(t0);
  report(7, violations == 0 && skipped == 0 && t < 300.0 && suite.size() == 30,
         fmt("%zu variants x %zu functions: %d evaluated, %d within hypotheses, %d violations, %.2f s",
             case_names().size(), suite.size(), evaluated, within, violations, t) +
             (bad.empty() ? "" : " " + bad));
}

void c8() {
  // CKN Hardy, n = 5, a = 1/2: V = r^-1, W = r^-3, theta = -1; the extremal is r^-1.
  // L = 108 reaches r = e^-216, about as deep as r^-3 stays finite in doubles.
  const RadialPotential V = P(PotentialSpec::power(0.5)), W = P(PotentialSpec::power(1.5));
  std::vector<double> relative;
  bool sound = true;
  for (double L : {4.0, 12.0, 36.0, 108.0}) {
    const DeficitReport d = hardy_deficit(V, W, -1.0, ckn_cutoff(1.0, L), 5);
    if (!d.holds()) sound = false;
    relative.push_back(d.deficit / d.lhs);
  }
  const double drop = relative.back() / relative.front();
  report(8, sound && drop < 1e-2,
         fmt("deficit/lhs %.3e -> %.3e (x%.2e) over L = 4, 12, 36, 108", relative.front(),
             relative.back(), drop));
}

void c9() {
  bool ok = true;
  std::string detail;
  for (int n : {5, 6, 8}) {
    auto g = [n](double m) {
      const double c = (n - 2.0 * m - 2.0) / 2.0;
      return check_condition_main(P(PotentialSpec::power(m)),
                                  P(PotentialSpec::scaled(c * c, PotentialSpec::power(m + 1.0))), n, 1.0,
                                  false)
          .min_value;
    };
    std::vector<double> roots;
    double prev_m = -12.0, prev_g = g(prev_m);
    for (double m = -12.0 + 0.05; m <= 4.0; m += 0.05) {
      const double gm = g(m);
      if ((prev_g < 0) != (gm < 0)) {
        std::uintmax_t it = 100;
        const auto br = boost::math::tools::toms748_solve(
            g, prev_m, m, prev_g, gm, boost::math::tools::eps_tolerance<double>(50), it);
        roots.push_back(0.5 * (br.first + br.second));
      }
      prev_m = m;
      prev_g = gm;
    }
    const double disc = 2.0 * std::sqrt(n * n - n + 1.0);
    const double lo = (-(n + 4.0) - disc) / 6.0, hi = (-(n + 4.0) + disc) / 6.0;
    const bool this_ok = roots.size() == 2 && std::abs(roots[0] - lo) <= 1e-6 &&
                         std::abs(roots[1] - hi) <= 1e-6 && g(0.5 * (lo + hi)) > 0.0;
    if (!this_ok) ok = false;
    if (roots.size() == 2)
      detail += fmt("n=%d: %.9f, %.9f (closed %.9f, %.9f); ", n, roots[0], roots[1], lo, hi);
    else
      detail += fmt("n=%d: %zu sign changes; ", n, roots.size());
  }
  report(9, ok, detail);
}

void c10() {
  const int n = 5;
  const double g = (n - 2.0) / 2.0;
  const RadialPotential one = P(PotentialSpec::constant(1.0));
  const RadialPotential W = P(PotentialSpec::scaled(g * g, PotentialSpec::power(1.0)));
  const auto suite = builtin_suite(1.0);
  double worst = 0.0;
  bool ok = true;
  int used = 0;
  for (const auto& u : suite) {
    if (!u.radial() || used == 5) continue;
    ++used;
    const DeficitReport h = hardy_deficit(one, W, -g, u, n);
    const DeficitReport o = one_dim_deficit(n - 1.0, P(PotentialSpec::zero()), 1.0, u.modes[0].f, 1.0, u.name,
                                            u.r_min, u.breakpoints);
    const double s = sphere_measure(n);
    const double diff = std::abs(o.deficit - h.deficit / s);
    const double tol = o.quad_error + h.quad_error / s + 1e-14 * std::abs(o.lhs);
    worst = std::max(worst, diff / std::max(tol, 1e-300));
    if (diff > tol) ok = false;
  }
  report(10, ok && used == 5, fmt("5 radial profiles, worst |difference| / quad error = %.3f", worst));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> checks = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
  for (size_t i = 0; i < checks.size(); ++i) {
    try {
      checks[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("threw: ") + e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
