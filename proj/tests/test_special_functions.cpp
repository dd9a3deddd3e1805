#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "hrkit/special_functions.hpp"

using namespace hrkit;

TEST_CASE("bessel_j agrees with boost on both branches") {
  for (double nu : {0.0, 0.5, 1.0, 2.5, 7.0}) {
    for (double x = 0.05; x < 60.0; x += 0.37) {
      const double ref = boost::math::cyl_bessel_j(nu, x);
      CHECK(bessel_j(nu, x) == doctest::Approx(ref).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("series and recurrence overlap near the switch") {
  for (double nu : {0.0, 1.0, 3.5}) {
    for (double x : {6.0, 8.0, 9.5, 10.0}) {
      CHECK(std::abs(bessel_j_series(nu, x) - bessel_j_recurrence(nu, x)) < 1e-12);
    }
  }
}

TEST_CASE("bessel_j frozen values") {
  // mpmath, 30 digits
  CHECK(bessel_j(0, 0.5) == doctest::Approx(0.9384698072408129).epsilon(1e-14));
  CHECK(bessel_j(0, 3.7) == doctest::Approx(-0.39923020337119112).epsilon(1e-13));
  CHECK(bessel_j(0, 25.3) == doctest::Approx(0.12880722162790959).epsilon(1e-11));
  CHECK(bessel_j(1, 12.0) == doctest::Approx(-0.22344710449062761).epsilon(1e-12));
  CHECK(bessel_j(2.5, 7.1) == doctest::Approx(-0.2919043265924454).epsilon(1e-12));
  CHECK(bessel_j(0.5, 40.0) == doctest::Approx(0.094000962389533578).epsilon(1e-10));
  CHECK(bessel_j(3, 1e-3) == doctest::Approx(2.0833332031250034e-11).epsilon(1e-13));
  CHECK(bessel_j(1.5, 15.5) == doctest::Approx(0.20099576520677285).epsilon(1e-11));
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(2, 0.0) == 0.0);
}

TEST_CASE("zeros") {
  CHECK(first_zero_j0() == doctest::Approx(2.40482555769577276862).epsilon(1e-15));
  CHECK(bessel_zero(1.0, 3.0, 4.5) == doctest::Approx(3.83170597020751231561).epsilon(1e-13));
  CHECK(bessel_zero(2.5, 5.0, 6.5) == doctest::Approx(5.76345919689454979140).epsilon(1e-13));
}

TEST_CASE("mu frozen against an independent root solve") {
  const double ref[12] = {0.94077056394973735, 1.2557837117945935, 1.456948698146271,
                          1.5994492064869279,  1.706020447234895,  1.7886571727012527,
                          1.8544912982332451,  1.9080787910476587, 1.9524769608566621,
                          1.989814714719699,   2.0216188382896299, 2.0490114088658176};
  for (int n = 1; n <= 12; ++n) {
    const MuResult m = mu_for_dimension(n);
    CHECK(m.mu == doctest::Approx(ref[n - 1]).epsilon(1e-12));
    CHECK(std::abs(m.residual) < 1e-9);
  }
  CHECK(mu_for_ratio(2.0) == doctest::Approx(ref[3]).epsilon(1e-12));
}
