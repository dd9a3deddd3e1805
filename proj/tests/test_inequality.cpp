#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hrkit/bessel_weight.hpp"
#include "hrkit/error.hpp"
#include "hrkit/inequality.hpp"

using namespace hrkit;

namespace {

constexpr double kPi = std::numbers::pi;

RadialPotential P(const PotentialSpec& s, double R = 1.0) { return make_potential(s, R); }

// f(r) = sum c_j r^j
ModeProfile poly(int k, std::vector<double> c) {
  return {k, [c](double r) {
            Jet j;
            for (size_t i = 0; i < c.size(); ++i) {
              const double e = static_cast<double>(i);
              j.v += c[i] * std::pow(r, e);
              if (i >= 1) j.d1 += c[i] * e * std::pow(r, e - 1);
              if (i >= 2) j.d2 += c[i] * e * (e - 1) * std::pow(r, e - 2);
            }
            return j;
          }};
}

TestFunction fn(std::string name, std::vector<ModeProfile> modes) {
  TestFunction u;
  u.name = std::move(name);
  u.modes = std::move(modes);
  return u;
}

}  // namespace

TEST_CASE("ball volume") {
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0));
  CHECK(sphere_measure(5) == doctest::Approx(8.0 * kPi * kPi / 3.0));
}

TEST_CASE("Dirichlet energy of 1 - r^2") {
  const TestFunction u = fn("1-r^2", {poly(0, {1, 0, -1})});
  const DeficitReport d = hardy_deficit(P(PotentialSpec::constant(1.0)), P(PotentialSpec::zero()), 0.0, u, 5);
  // 5 omega_5 * 4/7
  CHECK(d.deficit == doctest::Approx(32.0 * kPi * kPi / 21.0).epsilon(1e-10));
  CHECK(d.quad_error >= 0.0);
}

TEST_CASE("CKN Hardy on 1 - r^2, n = 5, a = 1/2") {
  const TestFunction u = fn("1-r^2", {poly(0, {1, 0, -1})});
  const DeficitReport d =
      hardy_deficit(P(PotentialSpec::power(0.5)), P(PotentialSpec::power(1.5)), -1.0, u, 5);
  CHECK(d.deficit == doctest::Approx(4.0 * kPi * kPi / 3.0).epsilon(1e-9));
}

TEST_CASE("radial Hardy-Rellich, n = 6, V = 1, W = 4/r^2") {
  const TestFunction u = fn("1-r^2", {poly(0, {1, 0, -1})});
  const DeficitReport d = hardy_rellich_deficit(
      P(PotentialSpec::constant(1.0)), P(PotentialSpec::scaled(4.0, PotentialSpec::power(1.0))), u, 6, -2.0);
  CHECK(d.deficit == doctest::Approx(186.03766008179892).epsilon(1e-9));
  CHECK(d.hypotheses_ok);
}

TEST_CASE("constant function has zero Hardy-Rellich deficit") {
  const TestFunction u = fn("1", {poly(0, {1})});
  const DeficitReport d = hardy_rellich_deficit(
      P(PotentialSpec::constant(1.0)), P(PotentialSpec::scaled(2.25, PotentialSpec::power(1.0))), u, 5, -1.5);
  CHECK(std::abs(d.deficit) <= 1e-14);
  CHECK(std::abs(d.lhs) <= 1e-14);
}

TEST_CASE("Rellich with W = 0 reduces to the pure Rellich inequality") {
  const TestFunction u = fn("(1-r^2)^2", {poly(0, {1, 0, -2, 0, 1})});
  RellichParams p;
  p.variant = RellichVariant::Basic;
  p.beta = 0.0;
  const DeficitReport d = improved_rellich_deficit(P(PotentialSpec::zero()), u, 5, p);
  CHECK(d.deficit == doctest::Approx(170.44650140294003).epsilon(1e-9));
}

TEST_CASE("deficits add over modes") {
  const TestFunction a = fn("a", {poly(0, {1, 0, -1})});
  const TestFunction b = fn("b", {poly(1, {0, 1, 0, -1})});
  const TestFunction ab = fn("a+b", {poly(0, {1, 0, -1}), poly(1, {0, 1, 0, -1})});
  const RadialPotential V = P(PotentialSpec::power(0.5)), W = P(PotentialSpec::power(1.5));
  const double da = hardy_deficit(V, W, -1.0, a, 5).deficit;
  const double db = hardy_deficit(V, W, -1.0, b, 5).deficit;
  CHECK(hardy_deficit(V, W, -1.0, ab, 5).deficit == doctest::Approx(da + db).epsilon(1e-10));
  const RadialPotential one = P(PotentialSpec::constant(1.0));
  const RadialPotential hw = P(PotentialSpec::scaled(4.0, PotentialSpec::power(1.0)));
  const double ha = hardy_rellich_deficit(one, hw, a, 6, -2.0).deficit;
  const double hb = hardy_rellich_deficit(one, hw, b, 6, -2.0).deficit;
  CHECK(hardy_rellich_deficit(one, hw, ab, 6, -2.0).deficit == doctest::Approx(ha + hb).epsilon(1e-10));
}

TEST_CASE("deficits scale quadratically") {
  const TestFunction u = fn("u", {poly(0, {1, 0, -1}), poly(2, {0, 0, 1, 0, -1})});
  const RadialPotential one = P(PotentialSpec::constant(1.0));
  const double d1 = hardy_deficit(one, one, -0.3, u, 4).deficit;
  const double d3 = hardy_deficit(one, one, -0.3, u.scaled(3.0), 4).deficit;
  CHECK(d3 == doctest::Approx(9.0 * d1).epsilon(1e-12));
}

TEST_CASE("one-dimensional form against its closed value") {
  // alpha = 3, W = 0: int r^3 f'^2 - int r f^2 - R^3 f(R)^2 = 1/2 - 0 on 1 - r^2
  const DeficitReport d = one_dim_deficit(3.0, P(PotentialSpec::zero()), 1.0, poly(0, {1, 0, -1}).f, 1.0);
  CHECK(d.deficit == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("one-dimensional form matches radial Hardy divided by n omega_n") {
  for (int n : {3, 4, 6}) {
    const double g = (n - 2.0) / 2.0;
    const TestFunction u = fn("u", {poly(0, {1, 0.3, -2, 0.5})});
    const DeficitReport h = hardy_deficit(P(PotentialSpec::constant(1.0)),
                                          P(PotentialSpec::scaled(g * g, PotentialSpec::power(1.0))), -g,
                                          u, n);
    const DeficitReport o = one_dim_deficit(n - 1.0, P(PotentialSpec::zero()), 1.0, u.modes[0].f, 1.0);
    CHECK(o.deficit == doctest::Approx(h.deficit / sphere_measure(n)).epsilon(1e-10));
  }
}

TEST_CASE("hypothesis labels") {
  const TestFunction bad = fn("k1 nonzero at R", {poly(1, {0, 1})});
  CHECK_FALSE(bad.vanishes_at_R(1));
  CHECK(bad.regular_at_origin());
  const RadialPotential one = P(PotentialSpec::constant(1.0));
  const ConditionReport cond =
      check_condition_main(one, P(PotentialSpec::scaled(4.0, PotentialSpec::power(1.0))), 6, 1.0);
  const DeficitReport d =
      hardy_rellich_deficit(one, P(PotentialSpec::scaled(4.0, PotentialSpec::power(1.0))), bad, 6, -2.0, &cond);
  CHECK_FALSE(d.hypotheses_ok);
  CHECK(d.note.find("outside theorem hypotheses") != std::string::npos);
}

TEST_CASE("super Hardy conditions for r^{-2m}") {
  const int n = 8;
  for (double m : {0.0, 0.25, 0.5}) {
    const SuperHardyReport s = check_superhardy_conditions(P(PotentialSpec::power(m)), n, 1.0);
    CHECK(s.lambda1 == doctest::Approx(2 * m).epsilon(1e-6));
    const double expect = 0.5 * (n - 2.0) * (n - 2.0) + 3.0 * n - 9.0 - 8.0 * m - 2.0 * m * m;
    CHECK(s.cond_main_min == doctest::Approx(expect).epsilon(1e-6));
    const double l1 = 2 * m;
    CHECK(s.rellich_constant ==
          doctest::Approx((std::pow(n - l1 - 2, 2) / 4 + n - 1) * std::pow(n - l1 - 4, 2) / 4).epsilon(1e-5));
    if (m == 0.0) {
      CHECK_FALSE(s.lambda2.has_value());
      CHECK_FALSE(s.gradient_constant.has_value());
    } else {
      REQUIRE(s.lambda2.has_value());
      CHECK(*s.lambda2 == doctest::Approx(2 * m + 1).epsilon(1e-5));
    }
    CHECK(s.holds());
  }
  CHECK_FALSE(check_superhardy_conditions(P(PotentialSpec::power(-0.5)), n, 1.0).decreasing);
}

TEST_CASE("equivalence: pair and non-pair") {
  const RadialPotential one = P(PotentialSpec::constant(1.0));
  const auto suite = builtin_suite(1.0);
  const EquivalenceReport ok = verify_equivalence(one, one, 3, 1.0, 1.0, suite);
  CHECK(ok.bessel_pair);
  CHECK(ok.consistent);
  CHECK(*ok.theta == doctest::Approx(1.0 / std::tan(1.0) - 1.0).epsilon(1e-8));

  const EquivalenceReport zero = verify_equivalence(one, one, 3, 1.0, 0.0, suite);
  CHECK(zero.bessel_pair);
  CHECK(std::abs(*zero.theta) < 1e-12);

  const EquivalenceReport bad = verify_equivalence(one, one, 3, 1.0, 1.05 * kPi * kPi, suite);
  CHECK_FALSE(bad.bessel_pair);
  CHECK(bad.conclusive);
  REQUIRE(bad.violator.has_value());
  CHECK(bad.violator->deficit < 0.0);
}

TEST_CASE("a shot trajectory near the weight saturates the Hardy inequality") {
  // pair (1, 1) in n = 3 at c slightly below pi^2: phi itself makes the deficit vanish
  const RadialPotential one = P(PotentialSpec::constant(1.0));
  const double c = 0.999 * kPi * kPi;
  const OdeProblem p = OdeProblem::make(3, one, one, c, 1.0);
  const TestFunction u = from_trajectory(shoot_from_origin(p), 1.0, "phi");
  const DeficitReport d = hardy_deficit(one, P(PotentialSpec::constant(c)), theta(p), u, 3);
  CHECK(std::abs(d.deficit) <= 10.0 * d.quad_error + 1e-9 * d.lhs);
}

TEST_CASE("builtin suite shape") {
  const auto s = builtin_suite(1.0);
  CHECK(s.size() == 30);
  int radial = 0;
  for (const auto& u : s) {
    CHECK(u.regular_at_origin());
    radial += u.radial();
  }
  CHECK(radial == 16);
  const auto r1 = random_suite(5, 42), r2 = random_suite(5, 42);
  REQUIRE(r1.size() == 5);
  CHECK(r1[3].modes[0].f(0.4).v == r2[3].modes[0].f(0.4).v);
}

TEST_CASE("every named case evaluates on a simple function") {
  const TestFunction u = fn("(1-r^2)^2", {poly(0, {1, 0, -2, 0, 1})});
  for (const auto& name : case_names()) {
    const PreparedCase c = prepare_case(default_case(name));
    const DeficitReport d = evaluate_case(c, u);
    INFO(name);
    CHECK(std::isfinite(d.deficit));
    CHECK(d.holds());
  }
  CHECK_THROWS_AS(default_case("nope"), Error);
}
