#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hrkit/potentials.hpp"

namespace hrkit {

enum class QuotientKind { GradOverGrad, DeltaOverU };
enum class BoundaryCondition { H2, H2capH10, H20 };

const char* to_string(QuotientKind q) noexcept;
const char* to_string(BoundaryCondition bc) noexcept;
QuotientKind parse_quotient(const std::string& s);
BoundaryCondition parse_bc(const std::string& s);

struct ModeForm {
  int n = 5;
  double m = 0.0;
  int k = 0;
  double c_k = 0.0;  // k(n+k-2)
  QuotientKind kind = QuotientKind::GradOverGrad;
  BoundaryCondition bc = BoundaryCondition::H2;

  static ModeForm make(int n, double m, int k, QuotientKind kind, BoundaryCondition bc);
  // Whether the weights r^{n-2m-5} (or r^{n-2m-3} for k = 0 gradients) are integrable
  // against profiles f ~ r^k.
  bool admissible() const;
};

struct GridParams {
  int N = 800;
  double s_min = -92.10340371976183;  // log(1e-40)
  double R = 1.0;
};

// Uniform grid in s = log(r/R) on [s_min, 0]; profiles are written f = e^{-ps/2} h with
// p = n - 2m - 4, which turns every weight into a constant.
struct Discretization {
  int N = 0;
  double h = 0.0;
  double p = 0.0;
  double R = 1.0;
  std::vector<double> s;
  std::vector<double> weights;  // composite Gregory weights
  struct Row {
    int start = 0;
    std::vector<double> coef;
  };
  std::vector<Row> D1, D2;  // d/ds and d^2/ds^2, 4th order

  static Discretization make(const GridParams& g, double p);
};

// Symmetric band matrix, upper storage: at(i, j) for j in [i, i + kd].
struct SymBand {
  int n = 0;
  int kd = 0;
  std::vector<double> data;  // (kd+1) x n, LAPACK 'U' band layout
  double at(int i, int j) const;
  std::vector<double> to_dense() const;  // row-major n x n
  double form(const std::vector<double>& x) const;
};

// Quadratic forms over the unconstrained h-vector (all N nodes). x^T A x approximates
// the (N1) numerator and x^T B x the denominator, divided by n omega_n.
SymBand assemble_numerator(const ModeForm& mode, const Discretization& d);
SymBand assemble_denominator(const ModeForm& mode, const Discretization& d);

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

// Smallest eigenpair of A x = lambda B x (B positive definite).
EigenPair smallest_generalized(const SymBand& A, const SymBand& B, bool want_vector = true);

struct ModeResult {
  int k = 0;
  bool admissible = true;
  double value = 0.0;
};

struct RefinementRow {
  int N = 0;
  double s_min = 0.0;
  double value = 0.0;
};

struct RayleighResult {
  double value = 0.0;   // finest grid, full domain
  int k_star = 0;
  std::vector<ModeResult> modes;
  std::vector<RefinementRow> refinement;
  double richardson = 0.0;    // grid extrapolation, 4th order
  double extrapolated = 0.0;  // domain-length extrapolation, O(1/L^2)
  std::vector<double> r;      // eigenprofile f_{k*} on the grid
  std::vector<double> f;
};

struct RayleighOptions {
  int k_max = 8;
  GridParams grid{};
  bool refine = true;  // also solve at N/2 and at s_min/2 for the estimates
};

double solve_mode(const ModeForm& mode, const GridParams& grid, std::vector<double>* r_out = nullptr,
                  std::vector<double>* f_out = nullptr);

RayleighResult min_rayleigh(int n, double m, QuotientKind kind, BoundaryCondition bc,
                            const RayleighOptions& opts = {});

struct EqualInfimaReport {
  std::vector<std::pair<BoundaryCondition, RayleighResult>> results;
  double spread = 0.0;  // max relative difference between the bcs
  double tolerance = 0.0;
  bool equal = false;
  bool ordered = false;  // value(H2) <= value(H2capH10) <= value(H20) up to tolerance
};

EqualInfimaReport check_equal_infima(int n, double m, QuotientKind kind,
                                     const RayleighOptions& opts = {});

// Closed-form constants quoted for comparison.
std::optional<double> a_closed_form(int n, double m);  // GradOverGrad best constant
double H_closed_form(int n, double m);                 // ((n+2m)(n-4-2m)/4)^2
std::optional<double> C_of_n(int n);

struct ConditionReport {
  double min_value = 0.0;   // min of (W - 2V/r^2 + 2V_r/r - V_rr) r^2 / V on the grid
  double min_radius = 0.0;
  double min_raw = 0.0;     // the unnormalized expression at that radius
  bool holds = false;
  std::optional<double> boundary_value;  // (n-1 + R phi'/phi) V(R)
  std::optional<bool> boundary_holds;
};

ConditionReport check_condition_main(const RadialPotential& V, const RadialPotential& W, int n,
                                     double R, bool with_boundary = true);

}  // namespace hrkit
