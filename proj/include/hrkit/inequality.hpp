#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hrkit/potentials.hpp"
#include "hrkit/radial_ode.hpp"
#include "hrkit/spectral.hpp"

namespace hrkit {

// u = sum_k f_k(|x|) phi_k(x) with phi_k a degree-k spherical harmonic normalized so that
// its mean square over the sphere is 1; every integral over B is then n omega_n times a
// radial integral.
struct ModeProfile {
  int k = 0;
  std::function<Jet(double)> f;
};

struct TestFunction {
  std::string name;
  std::vector<ModeProfile> modes;
  double R = 1.0;
  double r_min = 0.0;  // quadrature cutoff; 0 means the default
  std::vector<double> breakpoints;

  bool radial() const;
  // f_k(R) = 0 for every mode with k >= k_from (relative to the profile scale).
  bool vanishes_at_R(int k_from = 0) const;
  // Samples f_k(r) r^{-k} near 0 and checks it stays bounded.
  bool regular_at_origin() const;
  TestFunction scaled(double alpha) const;
};

double unit_ball_volume(int n);  // omega_n
double sphere_measure(int n);    // n omega_n

struct DeficitReport {
  std::string inequality;
  std::string function;
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> rhs_terms;  // summed into the deficit
  std::vector<std::pair<std::string, double>> extras;     // reported only
  double deficit = 0.0;
  double quad_error = 0.0;
  bool hypotheses_ok = true;
  std::string note;

  double rhs_total() const;
  bool holds(double factor = 10.0) const { return deficit >= -factor * quad_error; }
};

// (H_{V,W}): int V|grad u|^2 >= int W u^2 + theta int_{dB} u^2.
DeficitReport hardy_deficit(const RadialPotential& V, const RadialPotential& W, double theta,
                            const TestFunction& u, int n);

// (HR_{V,W}): int V|Lap u|^2 >= int W|grad u|^2 + (n-1) int (V/r^2 - V_r/r)|grad u|^2
//             + (theta + (n-1)V(R)/R) int_{dB}|grad u|^2.
// The extras carry the mode-wise boundary aggregation sum_k f_k'(R)^2 and its deficit.
// For non-radial u the hypotheses require `condition` to hold and f_k(R) = 0 for k >= 1.
DeficitReport hardy_rellich_deficit(const RadialPotential& V, const RadialPotential& W,
                                    const TestFunction& u, int n, double theta,
                                    const ConditionReport* condition = nullptr);

// int |Lap u|^2 / r^{2m} >= a int |grad u|^2 / r^{2m+2} + beta int W |grad u|^2 / r^{2m}.
DeficitReport gm_hr_deficit(const RadialPotential& W, const TestFunction& u, int n, double m,
                            double a, double beta);

enum class RellichVariant {
  Basic,        // m = 0, coefficient (n^2/4 + (n-lambda-2)^2/4) beta
  Weighted,     // H_{n,m} and ((n+2m)^2/4 + (n-2m-lambda-2)^2/4) beta
  LogChain,     // the log-chain example, coefficient 1 + n(n-4)/8
  TwoPotential,
  WithGradient,
};

const char* to_string(RellichVariant v) noexcept;
RellichVariant parse_rellich_variant(const std::string& s);

struct RellichParams {
  RellichVariant variant = RellichVariant::Basic;
  double m = 0.0;
  double lambda = 2.0;
  double beta = 0.0;   // weight of W (already boundary-constrained where the variant asks)
  double beta2 = 0.0;  // weight of W2 (TwoPotential)
  double mu = 0.0;     // mu(n), dimensionless; scaled by 1/R^2 here
  std::optional<RadialPotential> W2;
};

DeficitReport improved_rellich_deficit(const RadialPotential& W, const TestFunction& u, int n,
                                       const RellichParams& p);

// int r^a f'^2 >= ((a-1)/2)^2 int r^{a-2} f^2 + c int r^a W f^2
//                 + (phi'(R)/phi(R) - (a-1)/(2R)) R^a f(R)^2
// with phi the positive solution of phi'' + phi'/r + c W phi = 0. No n omega_n factor.
DeficitReport one_dim_deficit(double alpha, const RadialPotential& W, double c,
                              const std::function<Jet(double)>& f, double R,
                              const std::string& name = "f", double r_min = 0.0,
                              const std::vector<double>& breakpoints = {});

struct SuperHardyReport {
  double lambda1 = 0.0;
  std::optional<double> lambda2;  // nullopt when V_r vanishes identically
  bool decreasing = false;        // V_r <= 0
  bool cond_lambda1 = false;      // r V_r / V + lambda1 >= 0
  std::optional<bool> cond_lambda2;
  bool cond_main = false;         // the second-order condition
  double cond_main_min = 0.0;     // min of its left side divided by V
  bool lambda1_le_n = false;
  double rellich_constant = 0.0;  // ((n-l1-2)^2/4 + n-1) (n-l1-4)^2/4
  std::optional<double> gradient_constant;  // (n-1)(n-l2-2)^2/4
  bool holds() const;
};

SuperHardyReport check_superhardy_conditions(const RadialPotential& V, int n, double R);

struct EquivalenceReport {
  bool bessel_pair = false;
  double c = 0.0;
  std::optional<double> theta;       // at c, or at c_lo when c is supercritical
  std::optional<double> c_lo;        // last positive multiplier below c
  std::vector<DeficitReport> reports;
  std::optional<DeficitReport> violator;
  bool consistent = true;   // no report contradicts the ODE verdict
  bool conclusive = false;  // a violator was exhibited for a non-pair
  std::string verdict;
};

EquivalenceReport verify_equivalence(const RadialPotential& V, const RadialPotential& W,
                                              int n, double R, double c,
                                              const std::vector<TestFunction>& suite);

// Test functions.
TestFunction from_trajectory(const Trajectory& tr, double R, const std::string& name);
// Samples of a radial profile on a grid uniform in log r (as exported by the spectral solver).
TestFunction from_samples(const std::vector<double>& r, const std::vector<double>& f, int k,
                          const std::string& name);
std::vector<TestFunction> builtin_suite(double R = 1.0);
std::vector<TestFunction> random_suite(int count, std::uint64_t seed, double R = 1.0);
// u = (r/r_L)^{-g} psi(log(r/R)/L) with r_L = R e^{-L}, psi a quintic ramp from 0 at -2L
// to 1 at -L.
TestFunction ckn_cutoff(double g, double L, double R = 1.0);

// Named inequality cases with default parameters, used by the batch verifier and the CLI.
struct CaseParams {
  std::string name;  // hardy, hr-radial, hr, gm-hr, hr-cn, rellich, weighted-rellich, log-rellich,
                     // two-potential, hr-gradient, freq-in
  int n = 5;
  double m = 0.0;
  double a = 0.5;       // CKN power in hardy
  double alpha = 3.0;   // freq-in
  double lambda = 2.0;
  int k = 1;            // log-chain depth
  double R = 1.0;
  std::optional<PotentialSpec> V, W, W2;
};

std::vector<std::string> case_names();
CaseParams default_case(const std::string& name);

struct PreparedCase {
  CaseParams params;
  RadialPotential V, W, W2;
  double theta = 0.0;
  double beta = 0.0;
  double beta2 = 0.0;
  double mu = 0.0;
  double constant = 0.0;  // a, H or the improvement coefficient, for display
  std::optional<ConditionReport> condition;
  std::vector<std::pair<std::string, double>> constants;
};

PreparedCase prepare_case(const CaseParams& p);
DeficitReport evaluate_case(const PreparedCase& c, const TestFunction& u);

// Evaluates every function of the suite; threads <= 0 reads HRKIT_THREADS (default: hardware).
std::vector<DeficitReport> verify_suite(const PreparedCase& c, const std::vector<TestFunction>& suite,
                                        int threads = 0);

int default_thread_count();

}  // namespace hrkit
