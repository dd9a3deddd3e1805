#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hrkit/bessel_weight.hpp"
#include "hrkit/error.hpp"
#include "hrkit/radial_ode.hpp"
#include "hrkit/special_functions.hpp"

using namespace hrkit;

namespace {

RadialPotential P(const PotentialSpec& s, double R = 1.0) { return make_potential(s, R); }

OdeProblem ones(int n, double R = 1.0, OdeDim d = OdeDim::NDim) {
  return OdeProblem::make(n, P(PotentialSpec::constant(1.0), R), P(PotentialSpec::constant(1.0), R),
                          1.0, R, d);
}

}  // namespace

TEST_CASE("shot solution matches sin(sqrt(c) r)/r") {
  const double c = 4.0;
  const Trajectory t = shoot_from_origin(ones(3).with_c(c));
  CHECK(t.positive_open);
  CHECK_FALSE(t.first_zero.has_value());
  const double ref = 0.5;
  const double y_ref = t.sample(ref).v;
  for (double r : {0.01, 0.2, 0.9}) {
    const double exact = std::sin(2.0 * r) / r / (std::sin(2.0 * ref) / ref);
    CHECK(t.sample(r).v / y_ref == doctest::Approx(exact).epsilon(1e-8));
  }
  const OdeProblem p = ones(3).with_c(c);
  for (double r : {0.05, 0.5, 0.95}) {
    const Jet j = t.sample(r);
    CHECK(std::abs(ode_residual(p, r, j)) < 1e-6 * (std::abs(j.d2) + std::abs(j.v)));
  }
}

TEST_CASE("first zero of a supercritical solution") {
  // sin(sqrt(c) r) vanishes at pi/sqrt(c)
  const double c = 16.0;
  ShootOptions o;
  const Trajectory t = shoot_from_origin(ones(3).with_c(c), o);
  REQUIRE(t.first_zero.has_value());
  CHECK(*t.first_zero == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-8));
  CHECK_FALSE(t.positive_open);
}

TEST_CASE("theta for V = W = 1, n = 3") {
  // phi = sin(r)/r, R phi'/phi = cot(1) - 1
  CHECK(theta(ones(3)) == doctest::Approx(1.0 / std::tan(1.0) - 1.0).epsilon(1e-9));
}

TEST_CASE("beta oracles") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(weight(ones(3)).beta == doctest::Approx(pi2).epsilon(1e-7));
  // j_{3/2,1}^2
  CHECK(weight(ones(5)).beta == doctest::Approx(20.1907285564266).epsilon(1e-7));
  const double z0 = first_zero_j0();
  CHECK(weight(ones(7, 1.0, OdeDim::TwoD)).beta == doctest::Approx(z0 * z0).epsilon(1e-7));
}

TEST_CASE("beta scales like R^-2 for constant weights") {
  const double b1 = weight(ones(3, 1.0)).beta;
  const double b2 = weight(ones(3, 2.0)).beta;
  CHECK(b2 == doctest::Approx(b1 / 4.0).epsilon(1e-7));
}

TEST_CASE("homogeneous pairs have R-independent weight") {
  for (double a : {0.0, 0.5, 1.0}) {
    const double expect = std::pow((5.0 - 2.0 * a - 2.0) / 2.0, 2);
    for (double R : {1.0, 3.0}) {
      const OdeProblem p = OdeProblem::make(5, P(PotentialSpec::power(a), R),
                                            P(PotentialSpec::power(a + 1.0), R), 1.0, R);
      CHECK(weight(p).beta == doctest::Approx(expect).epsilon(1e-6));
    }
  }
}

TEST_CASE("certificates bracket beta") {
  const WeightResult w = weight(ones(4));
  CHECK(w.c_lo <= w.beta);
  CHECK(w.beta <= w.c_hi);
  CHECK(w.certificate_lo.positive);
  CHECK_FALSE(w.certificate_hi.positive);
  CHECK(is_bessel_pair(ones(4), w.c_lo).positive);
  CHECK_FALSE(is_bessel_pair(ones(4), w.c_hi).positive);
}

TEST_CASE("indicial exponents and origin oscillation") {
  const double q = 0.2;
  const OdeProblem p = OdeProblem::make(3, P(PotentialSpec::constant(1.0)),
                                        P(PotentialSpec::scaled(q, PotentialSpec::power(1.0))), 1.0,
                                        1.0);
  const auto [s1, s2] = indicial_exponents(p);
  CHECK(s1 == doctest::Approx((-1.0 + std::sqrt(1.0 - 4 * q)) / 2.0));
  CHECK(s2 == doctest::Approx((-1.0 - std::sqrt(1.0 - 4 * q)) / 2.0));
  // c q > 1/4 gives complex exponents
  CHECK(is_bessel_pair(p, 2.0).origin_oscillation);
  CHECK_FALSE(is_bessel_pair(p, 2.0).positive);
  CHECK(weight(p).beta == doctest::Approx(1.25).epsilon(1e-6));
}

TEST_CASE("admissibility of V") {
  CHECK_THROWS_AS(OdeProblem::make(3, P(PotentialSpec::power(5.0)), P(PotentialSpec::constant(1.0)),
                                   1.0, 1.0),
                  Error);
  const Admissibility a = check_admissibility(3, P(PotentialSpec::constant(1.0)), 1.0);
  CHECK(a.inverse_diverges);
  CHECK(a.direct_converges);
}

TEST_CASE("boundary helpers for the two-dimensional form") {
  const RadialPotential one = P(PotentialSpec::constant(1.0));
  CHECK(boundary_log_derivative(one, 1.0, 1.0) ==
        doctest::Approx(-bessel_j(1, 1.0) / bessel_j(0, 1.0)).epsilon(1e-9));
  const double z0 = first_zero_j0();
  CHECK(bessel_potential_weight(one, 1.0) == doctest::Approx(z0 * z0).epsilon(1e-7));
  for (int n : {3, 5, 8}) {
    const OdeProblem base = OdeProblem::make(n, one, one, 1.0, 1.0, OdeDim::TwoD);
    const double mu = mu_for_dimension(n).mu;
    CHECK(boundary_constrained_weight(base, z0 * z0, n / 2.0) == doctest::Approx(mu * mu).epsilon(1e-8));
  }
  // log chain phi: R phi'/phi = -1/(2 log(rho/R)) = -1/2 at the default rho
  const RadialPotential lc = P(PotentialSpec::log_chain(1, 0.0));
  CHECK(boundary_log_derivative(lc, 0.25, 1.0) == doctest::Approx(-0.5).epsilon(1e-8));
}
