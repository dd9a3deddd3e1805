#include "hrkit_c.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "hrkit/bessel_weight.hpp"
#include "hrkit/commands.hpp"
#include "hrkit/config.hpp"
#include "hrkit/error.hpp"
#include "hrkit/special_functions.hpp"

struct hrk_potential {
  hrkit::RadialPotential p;
};

namespace {

thread_local std::string g_last_error;

hrk_status status_of(hrkit::ErrorCode c) { return static_cast<hrk_status>(static_cast<int>(c)); }

template <class F>
hrk_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return HRK_OK;
  } catch (const hrkit::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("config: ") + e.what();
    return HRK_E_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HRK_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return HRK_E_INTERNAL;
  }
}

hrk_status null_arg(const char* what) {
  g_last_error = std::string(what) + " must not be null";
  return HRK_E_INVALID_ARGUMENT;
}

hrkit::OdeProblem problem(const hrk_potential* V, const hrk_potential* W, int n, double R,
                          int two_d, double c) {
  return hrkit::OdeProblem::make(n, V->p, W->p, c, R,
                                 two_d ? hrkit::OdeDim::TwoD : hrkit::OdeDim::NDim);
}

}  // namespace

extern "C" {

const char* hrk_version(void) { return "0.1.0"; }

const char* hrk_last_error(void) { return g_last_error.c_str(); }

const char* hrk_status_name(hrk_status s) {
  if (s == HRK_OK) return "ok";
  if (s == HRK_E_INTERNAL) return "internal";
  return hrkit::to_string(static_cast<hrkit::ErrorCode>(static_cast<int>(s)));
}

hrk_status hrk_potential_create(const char* spec, double R_max, hrk_potential** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto* h = new hrk_potential{hrkit::make_potential(hrkit::parse_potential(spec), R_max)};
    *out = h;
  });
}

void hrk_potential_destroy(hrk_potential* p) { delete p; }

hrk_status hrk_potential_eval(const hrk_potential* p, double r, double* value, double* d1,
                              double* d2) {
  if (!p) return null_arg("potential");
  return guarded([&] {
    if (!(r > 0.0)) hrkit::fail(hrkit::ErrorCode::Domain, "r must be positive");
    const hrkit::Jet j = p->p.jet(r);
    if (value) *value = j.v;
    if (d1) *d1 = j.d1;
    if (d2) *d2 = j.d2;
  });
}

hrk_status hrk_weight(const hrk_potential* V, const hrk_potential* W, int n, double R, int two_d,
                      double rel_tol, double* beta, double* c_lo, double* c_hi, int* unbounded) {
  if (!V || !W) return null_arg("potential");
  return guarded([&] {
    hrkit::WeightOptions o;
    if (rel_tol > 0.0) o.rel_tol = rel_tol;
    const hrkit::WeightResult w = hrkit::weight(problem(V, W, n, R, two_d, 1.0), o);
    if (beta) *beta = w.beta;
    if (c_lo) *c_lo = w.c_lo;
    if (c_hi) *c_hi = w.c_hi;
    if (unbounded) *unbounded = w.unbounded ? 1 : 0;
  });
}

hrk_status hrk_theta(const hrk_potential* V, const hrk_potential* W, int n, double R, int two_d,
                     double c, double* theta) {
  if (!V || !W) return null_arg("potential");
  if (!theta) return null_arg("theta");
  return guarded([&] { *theta = hrkit::theta(problem(V, W, n, R, two_d, c)); });
}

hrk_status hrk_mu(int n, double* mu, double* residual) {
  return guarded([&] {
    if (n < 1) hrkit::fail(hrkit::ErrorCode::InvalidArgument, "n must be >= 1");
    const hrkit::MuResult m = hrkit::mu_for_dimension(n);
    if (mu) *mu = m.mu;
    if (residual) *residual = m.residual;
  });
}

double hrk_first_zero_j0(void) { return hrkit::first_zero_j0(); }

hrk_status hrk_run(const char* command, const char* config_json, char** result_json,
                   int* violation) {
  if (!command) return null_arg("command");
  if (!result_json) return null_arg("result_json");
  *result_json = nullptr;
  if (violation) *violation = 0;
  return guarded([&] {
    nlohmann::json cfg = nlohmann::json::object();
    if (config_json && *config_json) {
      try {
        cfg = nlohmann::json::parse(config_json);
      } catch (const nlohmann::json::exception& e) {
        hrkit::fail(hrkit::ErrorCode::InvalidArgument, std::string("config is not JSON: ") + e.what());
      }
    }
    const hrkit::CommandResult r = hrkit::run_command(command, cfg);
    const std::string text = r.output.dump(2);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *result_json = buf;
    if (violation) *violation = r.violation ? 1 : 0;
  });
}

void hrk_free_string(char* s) { std::free(s); }

}  // extern "C"
