#include <doctest.h>

#include <cmath>
#include <string>

#include "hrkit_c.h"

TEST_CASE("version and status names") {
  CHECK(std::string(hrk_version()) == "0.1.0");
  CHECK(std::string(hrk_status_name(HRK_OK)) == "ok");
  CHECK(std::string(hrk_status_name(HRK_E_INTERNAL)) == "internal");
}

TEST_CASE("potential handles") {
  hrk_potential* p = nullptr;
  REQUIRE(hrk_potential_create("power:1", 1.0, &p) == HRK_OK);
  double v = 0, d1 = 0, d2 = 0;
  CHECK(hrk_potential_eval(p, 0.5, &v, &d1, &d2) == HRK_OK);
  CHECK(v == doctest::Approx(4.0));
  CHECK(d1 == doctest::Approx(-16.0));
  CHECK(d2 == doctest::Approx(96.0));
  CHECK(hrk_potential_eval(p, -1.0, &v, nullptr, nullptr) == HRK_E_DOMAIN);
  CHECK(std::string(hrk_last_error()).size() > 0);
  hrk_potential_destroy(p);

  hrk_potential* q = nullptr;
  CHECK(hrk_potential_create("nonsense", 1.0, &q) == HRK_E_INVALID_ARGUMENT);
  CHECK(q == nullptr);
  CHECK(hrk_potential_create(nullptr, 1.0, &q) == HRK_E_INVALID_ARGUMENT);
}

TEST_CASE("weight, theta and mu through the C ABI") {
  hrk_potential *V = nullptr, *W = nullptr;
  REQUIRE(hrk_potential_create("one", 1.0, &V) == HRK_OK);
  REQUIRE(hrk_potential_create("one", 1.0, &W) == HRK_OK);
  double beta = 0, lo = 0, hi = 0;
  int unbounded = -1;
  CHECK(hrk_weight(V, W, 3, 1.0, 0, 1e-9, &beta, &lo, &hi, &unbounded) == HRK_OK);
  CHECK(beta == doctest::Approx(M_PI * M_PI).epsilon(1e-8));
  CHECK(unbounded == 0);
  CHECK(lo <= beta);
  CHECK(beta <= hi);
  double th = 0;
  CHECK(hrk_theta(V, W, 3, 1.0, 0, 1.0, &th) == HRK_OK);
  CHECK(th == doctest::Approx(1.0 / std::tan(1.0) - 1.0).epsilon(1e-9));
  double mu = 0, res = 1;
  CHECK(hrk_mu(4, &mu, &res) == HRK_OK);
  CHECK(mu == doctest::Approx(1.5994492064869279).epsilon(1e-12));
  CHECK(std::abs(res) < 1e-9);
  CHECK(hrk_mu(0, &mu, &res) == HRK_E_INVALID_ARGUMENT);
  CHECK(hrk_first_zero_j0() == doctest::Approx(2.404825557695773));
  hrk_potential_destroy(V);
  hrk_potential_destroy(W);
}

TEST_CASE("hrk_run") {
  char* out = nullptr;
  int violation = -1;
  REQUIRE(hrk_run("mu", "{\"n\": 5}", &out, &violation) == HRK_OK);
  REQUIRE(out != nullptr);
  CHECK(std::string(out).find("\"mu\"") != std::string::npos);
  CHECK(violation == 0);
  hrk_free_string(out);
  out = nullptr;
  CHECK(hrk_run("mu", "{not json", &out, &violation) == HRK_E_INVALID_ARGUMENT);
  CHECK(out == nullptr);
  CHECK(hrk_run("verify", "{\"ineq\": \"hardy\", \"threads\": 2}", &out, &violation) == HRK_OK);
  CHECK(violation == 0);
  hrk_free_string(out);
}
