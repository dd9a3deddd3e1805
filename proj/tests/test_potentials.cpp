#include <doctest.h>

#include <cmath>

#include "hrkit/error.hpp"
#include "hrkit/potentials.hpp"
#include "hrkit/special_functions.hpp"

using namespace hrkit;

namespace {

void check_derivatives(const RadialPotential& p, double r) {
  const double h = 1e-4 * r;
  const Jet j = p.jet(r);
  const double d1 = (p.value(r + h) - p.value(r - h)) / (2 * h);
  const double d2 = (p.deriv(r + h) - p.deriv(r - h)) / (2 * h);
  CHECK(j.v == doctest::Approx(p.value(r)));
  CHECK(j.d1 == doctest::Approx(d1).epsilon(1e-6));
  CHECK(j.d2 == doctest::Approx(d2).epsilon(1e-6));
}

}  // namespace

TEST_CASE("jets match finite differences") {
  const double R = 1.0;
  const PotentialSpec specs[] = {
      PotentialSpec::constant(2.5),
      PotentialSpec::power(0.7),
      PotentialSpec::power(-1.2),
      PotentialSpec::log_chain(1, 0.0),
      PotentialSpec::log_chain(2, 0.0),
      PotentialSpec::x_chain(1),
      PotentialSpec::x_chain(3),
      PotentialSpec::scaled(3.0, PotentialSpec::power(1.0)),
      PotentialSpec::sum({PotentialSpec::constant(1.0), PotentialSpec::power(0.5)}),
  };
  for (const auto& s : specs) {
    const RadialPotential p = make_potential(s, R);
    for (double r : {1e-3, 0.05, 0.3, 0.9}) check_derivatives(p, r);
  }
}

TEST_CASE("power and scaled values") {
  const RadialPotential p = make_potential(PotentialSpec::power(1.5), 1.0);
  CHECK(p.value(0.25) == doctest::Approx(std::pow(0.25, -3.0)));
  CHECK(p.sing_exponent() == doctest::Approx(-3.0));
  CHECK(p.sing_coefficient() == doctest::Approx(1.0));
  const RadialPotential s = make_potential(PotentialSpec::scaled(4.0, PotentialSpec::power(1.0)), 1.0);
  CHECK(s.value(0.5) == doctest::Approx(16.0));
  CHECK(make_potential(PotentialSpec::zero(), 1.0).is_zero());
}

TEST_CASE("log chain default rho") {
  CHECK(default_chain_rho(1, 1.0) == doctest::Approx(std::exp(1.0)));
  CHECK(default_chain_rho(2, 2.0) == doctest::Approx(2.0 * std::exp(std::exp(1.0))));
  const RadialPotential w = make_potential(PotentialSpec::log_chain(1, 0.0), 1.0);
  // W_1 = 1/(r^2 log^2(rho/r)), rho = e
  const double r = 0.2;
  const double L = std::log(std::exp(1.0) / r);
  CHECK(w.value(r) == doctest::Approx(1.0 / (r * r * L * L)));
}

TEST_CASE("closed-form phi solves the two-dimensional equation") {
  const double R = 1.0;
  const PotentialSpec specs[] = {PotentialSpec::constant(1.0), PotentialSpec::log_chain(2, 0.0),
                                 PotentialSpec::x_chain(2)};
  for (const auto& s : specs) {
    const RadialPotential W = make_potential(s, R);
    // constants have a closed form at every multiplier
    const double c = catalog_multiplier(W.spec()).value_or(1.7);
    const auto phi_opt = candidate_phi(W.spec(), c);
    REQUIRE(phi_opt.has_value());
    const Phi& phi = *phi_opt;
    for (double r : {0.01, 0.2, 0.7}) {
      const Jet j = phi.eval(r);
      const double res = j.d2 + j.d1 / r + c * W.value(r) * j.v;
      CHECK(std::abs(res) < 1e-8 * (std::abs(j.d2) + std::abs(j.d1 / r) + 1.0));
      CHECK(j.v > 0.0);
    }
  }
}

TEST_CASE("closed-form beta catalogue") {
  const double z0 = first_zero_j0();
  CHECK(*closed_form_beta(PotentialSpec::constant(1.0), 1.0) == doctest::Approx(z0 * z0));
  CHECK(*closed_form_beta(PotentialSpec::constant(1.0), 2.0) == doctest::Approx(z0 * z0 / 4.0));
  CHECK(*closed_form_beta(PotentialSpec::log_chain(1, 0.0), 1.0) == doctest::Approx(0.25));
  CHECK(std::isinf(*closed_form_beta(PotentialSpec::zero(), 1.0)));
}

TEST_CASE("lambda limit for powers") {
  // W = r^{-2m}: W_r/W = -2m/r, so lambda = 2m
  const RadialPotential w = make_potential(PotentialSpec::power(0.75), 1.0);
  CHECK(lambda_limit(w).lambda == doctest::Approx(1.5).epsilon(1e-6));
  // the log chain tends to the Hardy weight's lambda = 2
  const RadialPotential l = make_potential(PotentialSpec::log_chain(1, 0.0), 1.0);
  CHECK(lambda_limit(l).lambda == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(make_potential(PotentialSpec::log_chain(0, 0.0), 1.0), Error);
  CHECK_THROWS_AS(make_potential(PotentialSpec::log_chain(1, 0.5), 1.0), Error);
}
