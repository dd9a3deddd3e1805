#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hrkit {

enum class PotentialKind { Zero, Constant, Power, LogChain, XChain, Scaled, Sum, Custom };

const char* to_string(PotentialKind kind) noexcept;

// Value and first two radial derivatives at one radius.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// Declarative description of a potential, the form read from config files.
// Custom is only constructible in code.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Zero;
  double value = 1.0;   // Constant: the constant; Scaled: the factor
  double m = 0.0;       // Power: r^{-2m}
  int k = 1;            // LogChain / XChain depth
  double rho = 0.0;     // LogChain
  double R = 0.0;       // XChain scale (0 means "use R_max")
  std::vector<PotentialSpec> terms;  // Sum terms, or Scaled's single inner spec

  std::function<Jet(double)> custom;
  double custom_exponent = 0.0;
  double custom_coefficient = 0.0;

  static PotentialSpec zero();
  static PotentialSpec constant(double w);
  static PotentialSpec power(double m);
  static PotentialSpec log_chain(int k, double rho);
  static PotentialSpec x_chain(int k, double R = 0.0);
  static PotentialSpec scaled(double c, PotentialSpec inner);
  static PotentialSpec sum(std::vector<PotentialSpec> terms);
  static PotentialSpec custom_fn(std::function<Jet(double)> f, double exponent, double coefficient);
};

class RadialPotential {
 public:
  struct Node;

  RadialPotential() = default;

  PotentialKind kind() const;
  const PotentialSpec& spec() const { return spec_; }
  double R_max() const { return R_max_; }

  double value(double r) const;
  double deriv(double r) const;
  double deriv2(double r) const;
  Jet jet(double r) const;

  // V(r) ~ sing_coefficient * r^sing_exponent as r -> 0.
  double sing_exponent() const;
  double sing_coefficient() const;

  bool is_zero() const;

 private:
  friend RadialPotential make_potential(const PotentialSpec&, double);
  std::shared_ptr<const Node> node_;
  PotentialSpec spec_;
  double R_max_ = 1.0;
};

RadialPotential make_potential(const PotentialSpec& spec, double R_max);

// R exp(exp(...(1))) with k exponentials: the smallest rho with log^(k)(rho/R) >= 1.
// A log chain given with rho = 0 resolves to this value.
double default_chain_rho(int k, double R);

struct LambdaData {
  double lambda = 0.0;
  double spread = 0.0;  // disagreement between extrapolations, a convergence diagnostic
  std::function<double(double)> residual;  // f(r) = W_r/W + lambda/r
};

// Default probes sit at log(R/r) = 4, 8, 16, 32, 64.
std::vector<double> default_probe_radii(double R);

LambdaData lambda_limit(const RadialPotential& W, const std::vector<double>& probe_radii,
                        double tol = 1e-3);
LambdaData lambda_limit(const RadialPotential& W);

// Closed-form positive solution of phi'' + phi'/r + c W phi = 0 (two-dimensional form)
// for the catalogued kinds. Returns nullopt when no closed form exists at this c.
struct Phi {
  std::function<Jet(double)> eval;
};

// The multiplier at which candidate_phi has a closed form (LogChain/XChain: 1/4).
std::optional<double> catalog_multiplier(const PotentialSpec& spec);
std::optional<Phi> candidate_phi(const PotentialSpec& spec, double c);
Phi candidate_phi(const PotentialSpec& spec);

// Closed-form beta(W;R) in the two-dimensional convention, when known.
// Returns +inf for Zero.
std::optional<double> closed_form_beta(const PotentialSpec& spec, double R);

}  // namespace hrkit
