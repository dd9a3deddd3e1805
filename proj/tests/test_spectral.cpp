#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "hrkit/potentials.hpp"
#include "hrkit/spectral.hpp"

using namespace hrkit;

namespace {

Eigen::MatrixXd dense(const SymBand& b) {
  const std::vector<double> d = b.to_dense();
  Eigen::MatrixXd m(b.n, b.n);
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j) m(i, j) = d[static_cast<size_t>(i) * b.n + j];
  return m;
}

}  // namespace

TEST_CASE("banded generalized solver agrees with a dense solve") {
  GridParams g;
  g.N = 120;
  g.s_min = -20.0;
  for (auto kind : {QuotientKind::DeltaOverU, QuotientKind::GradOverGrad}) {
    const ModeForm mode = ModeForm::make(6, 0.0, 2, kind, BoundaryCondition::H2);
    const Discretization d = Discretization::make(g, mode.n - 2 * mode.m - 4);
    const SymBand A = assemble_numerator(mode, d);
    const SymBand B = assemble_denominator(mode, d);
    const Eigen::MatrixXd Ad = dense(A), Bd = dense(B);
    CHECK((Ad - Ad.transpose()).norm() < 1e-12 * Ad.norm());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ad, Bd);
    REQUIRE(es.info() == Eigen::Success);
    const EigenPair ep = smallest_generalized(A, B);
    CHECK(ep.value == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-8));
    // Rayleigh quotient of the returned vector
    CHECK(A.form(ep.vector) / B.form(ep.vector) == doctest::Approx(ep.value).epsilon(1e-8));
  }
}

TEST_CASE("band accessors") {
  GridParams g;
  g.N = 40;
  g.s_min = -10.0;
  const ModeForm mode = ModeForm::make(5, 0.0, 1, QuotientKind::DeltaOverU, BoundaryCondition::H2);
  const Discretization d = Discretization::make(g, 1.0);
  const SymBand A = assemble_numerator(mode, d);
  const Eigen::MatrixXd Ad = dense(A);
  for (int i = 0; i < A.n; ++i)
    for (int j = i; j <= std::min(A.n - 1, i + A.kd); ++j) CHECK(A.at(i, j) == Ad(i, j));
}

TEST_CASE("mode form bookkeeping") {
  const ModeForm m = ModeForm::make(5, 0.0, 3, QuotientKind::GradOverGrad, BoundaryCondition::H20);
  CHECK(m.c_k == doctest::Approx(3.0 * (5 + 3 - 2)));
  CHECK(parse_bc("H2capH10") == BoundaryCondition::H2capH10);
  CHECK(parse_quotient("delta") == QuotientKind::DeltaOverU);
}

TEST_CASE("closed forms") {
  CHECK(H_closed_form(6, 0) == doctest::Approx(9.0));
  CHECK(H_closed_form(5, 0) == doctest::Approx(25.0 / 16.0));
  CHECK(H_closed_form(8, 1) == doctest::Approx(25.0));
  CHECK(*C_of_n(3) == doctest::Approx(25.0 / 36.0));
  CHECK(*C_of_n(4) == doctest::Approx(3.0));
  CHECK(*C_of_n(7) == doctest::Approx(49.0 / 4.0));
  CHECK(*a_closed_form(6, 0.1) == doctest::Approx(6.2 * 6.2 / 4.0));
  CHECK_FALSE(a_closed_form(6, 2.0).has_value());
}

TEST_CASE("Rellich constant from the spectral solver") {
  RayleighOptions o;
  o.grid.N = 400;
  o.refine = false;
  const RayleighResult r = min_rayleigh(6, 0.0, QuotientKind::DeltaOverU, BoundaryCondition::H2capH10, o);
  CHECK(r.value == doctest::Approx(9.0).epsilon(0.02));
  CHECK(r.value >= 9.0 * (1 - 1e-3));
}

TEST_CASE("condition checker on r^{-2m}") {
  const int n = 6;
  auto min_of = [&](double m) {
    const RadialPotential V = make_potential(PotentialSpec::power(m), 1.0);
    const double g = (n - 2.0 * m - 2.0) / 2.0;
    const RadialPotential W = make_potential(PotentialSpec::scaled(g * g, PotentialSpec::power(m + 1.0)), 1.0);
    return check_condition_main(V, W, n, 1.0, false);
  };
  CHECK(min_of(0.0).holds);
  CHECK_FALSE(min_of(1.0).holds);
  // normalized value: ((n-2m-2)/2)^2 - 2 - 4m - 2m(2m+1)
  for (double m : {-1.0, 0.0, 0.1, 0.5}) {
    const double g = (n - 2.0 * m - 2.0) / 2.0;
    CHECK(min_of(m).min_value == doctest::Approx(g * g - 2.0 - 4.0 * m - 2.0 * m * (2.0 * m + 1.0)));
  }
}
