#include "hrkit/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hrkit/error.hpp"
#include "hrkit/special_functions.hpp"

namespace hrkit {

const char* to_string(PotentialKind kind) noexcept {
  switch (kind) {
    case PotentialKind::Zero: return "zero";
    case PotentialKind::Constant: return "constant";
    case PotentialKind::Power: return "power";
    case PotentialKind::LogChain: return "log_chain";
    case PotentialKind::XChain: return "x_chain";
    case PotentialKind::Scaled: return "scaled";
    case PotentialKind::Sum: return "sum";
    case PotentialKind::Custom: return "custom";
  }
  return "unknown";
}

PotentialSpec PotentialSpec::zero() { return {}; }

PotentialSpec PotentialSpec::constant(double w) {
  PotentialSpec s;
  s.kind = PotentialKind::Constant;
  s.value = w;
  return s;
}

PotentialSpec PotentialSpec::power(double m) {
  PotentialSpec s;
  s.kind = PotentialKind::Power;
  s.m = m;
  return s;
}

PotentialSpec PotentialSpec::log_chain(int k, double rho) {
  PotentialSpec s;
  s.kind = PotentialKind::LogChain;
  s.k = k;
  s.rho = rho;
  return s;
}

PotentialSpec PotentialSpec::x_chain(int k, double R) {
  PotentialSpec s;
  s.kind = PotentialKind::XChain;
  s.k = k;
  s.R = R;
  return s;
}

PotentialSpec PotentialSpec::scaled(double c, PotentialSpec inner) {
  PotentialSpec s;
  s.kind = PotentialKind::Scaled;
  s.value = c;
  s.terms.push_back(std::move(inner));
  return s;
}

PotentialSpec PotentialSpec::sum(std::vector<PotentialSpec> terms) {
  PotentialSpec s;
  s.kind = PotentialKind::Sum;
  s.terms = std::move(terms);
  return s;
}

PotentialSpec PotentialSpec::custom_fn(std::function<Jet(double)> f, double exponent,
                                       double coefficient) {
  PotentialSpec s;
  s.kind = PotentialKind::Custom;
  s.custom = std::move(f);
  s.custom_exponent = exponent;
  s.custom_coefficient = coefficient;
  return s;
}

// ---------------------------------------------------------------------------

struct RadialPotential::Node {
  virtual ~Node() = default;
  virtual Jet jet(double r) const = 0;
  virtual double exponent() const = 0;
  virtual double coefficient() const = 0;
  virtual bool zero() const { return false; }
};

namespace {

using Node = RadialPotential::Node;

struct ZeroNode final : Node {
  Jet jet(double) const override { return {}; }
  double exponent() const override { return 0.0; }
  double coefficient() const override { return 0.0; }
  bool zero() const override { return true; }
};

struct ConstantNode final : Node {
  double w;
  explicit ConstantNode(double w) : w(w) {}
  Jet jet(double) const override { return {w, 0.0, 0.0}; }
  double exponent() const override { return 0.0; }
  double coefficient() const override { return w; }
  bool zero() const override { return w == 0.0; }
};

struct PowerNode final : Node {
  double m;
  explicit PowerNode(double m) : m(m) {}
  Jet jet(double r) const override {
    const double v = std::pow(r, -2.0 * m);
    return {v, -2.0 * m * v / r, 2.0 * m * (2.0 * m + 1.0) * v / (r * r)};
  }
  double exponent() const override { return -2.0 * m; }
  double coefficient() const override { return 1.0; }
};

// Iterated logs L_1 = log(rho/r), L_i = log L_{i-1}, with l_i = L_i'/L_i and l_i'.
struct LogLevels {
  std::vector<double> L, l, dl;
};

LogLevels log_levels(int k, double rho, double r) {
  LogLevels out;
  out.L.resize(k);
  out.l.resize(k);
  out.dl.resize(k);
  double Lp = -1.0 / r, Lpp = 1.0 / (r * r);
  double L = std::log(rho / r);
  for (int i = 0; i < k; ++i) {
    if (i > 0) {
      Lp = out.l[i - 1];
      Lpp = out.dl[i - 1];
      L = std::log(out.L[i - 1]);
    }
    out.L[i] = L;
    out.l[i] = Lp / L;
    out.dl[i] = (Lpp * L - Lp * Lp) / (L * L);
  }
  return out;
}

struct LogChainNode final : Node {
  int k;
  double rho;
  LogChainNode(int k, double rho) : k(k), rho(rho) {}
  Jet jet(double r) const override {
    const LogLevels lv = log_levels(k, rho, r);
    Jet out;
    double prod = 1.0 / (r * r), sl = 0.0, sdl = 0.0;
    for (int j = 0; j < k; ++j) {
      prod /= lv.L[j] * lv.L[j];
      sl += lv.l[j];
      sdl += lv.dl[j];
      const double g = -2.0 / r - 2.0 * sl;
      const double dg = 2.0 / (r * r) - 2.0 * sdl;
      out.v += prod;
      out.d1 += prod * g;
      out.d2 += prod * (g * g + dg);
    }
    return out;
  }
  double exponent() const override { return -2.0; }
  double coefficient() const override { return 0.0; }
};

// X_1(t) = 1/(1 - log t), X_i = X_1(X_{i-1}); xi_i = d log X_i / dt and its derivative.
struct XLevels {
  std::vector<double> X, xi, dxi;
};

XLevels x_levels(int k, double t) {
  XLevels out;
  out.X.resize(k);
  out.xi.resize(k);
  out.dxi.resize(k);
  for (int i = 0; i < k; ++i) {
    if (i == 0) {
      out.X[0] = 1.0 / (1.0 - std::log(t));
      out.xi[0] = out.X[0] / t;
      out.dxi[0] = out.X[0] * (out.X[0] - 1.0) / (t * t);
    } else {
      const double X = 1.0 / (1.0 - std::log(out.X[i - 1]));
      out.X[i] = X;
      out.xi[i] = X * out.xi[i - 1];
      out.dxi[i] = X * out.xi[i] * out.xi[i - 1] + X * out.dxi[i - 1];
    }
  }
  return out;
}

struct XChainNode final : Node {
  int k;
  double R;
  XChainNode(int k, double R) : k(k), R(R) {}
  Jet jet(double r) const override {
    const XLevels lv = x_levels(k, r / R);
    Jet out;
    double prod = 1.0 / (r * r), sx = 0.0, sdx = 0.0;
    for (int j = 0; j < k; ++j) {
      prod *= lv.X[j] * lv.X[j];
      sx += lv.xi[j];
      sdx += lv.dxi[j];
      const double g = -2.0 / r + 2.0 * sx / R;
      const double dg = 2.0 / (r * r) + 2.0 * sdx / (R * R);
      out.v += prod;
      out.d1 += prod * g;
      out.d2 += prod * (g * g + dg);
    }
    return out;
  }
  double exponent() const override { return -2.0; }
  double coefficient() const override { return 0.0; }
};

struct ScaledNode final : Node {
  double c;
  std::shared_ptr<const Node> inner;
  ScaledNode(double c, std::shared_ptr<const Node> inner) : c(c), inner(std::move(inner)) {}
  Jet jet(double r) const override {
    const Jet j = inner->jet(r);
    return {c * j.v, c * j.d1, c * j.d2};
  }
  double exponent() const override { return inner->exponent(); }
  double coefficient() const override { return c * inner->coefficient(); }
  bool zero() const override { return c == 0.0 || inner->zero(); }
};

struct SumNode final : Node {
  std::vector<std::shared_ptr<const Node>> terms;
  Jet jet(double r) const override {
    Jet out;
    for (const auto& t : terms) {
      const Jet j = t->jet(r);
      out.v += j.v;
      out.d1 += j.d1;
      out.d2 += j.d2;
    }
    return out;
  }
  double exponent() const override {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& t : terms)
      if (!t->zero()) s = std::min(s, t->exponent());
    return std::isfinite(s) ? s : 0.0;
  }
  double coefficient() const override {
    const double s = exponent();
    double c = 0.0;
    for (const auto& t : terms)
      if (!t->zero() && t->exponent() == s) c += t->coefficient();
    return c;
  }
  bool zero() const override {
    return std::all_of(terms.begin(), terms.end(), [](const auto& t) { return t->zero(); });
  }
};

struct CustomNode final : Node {
  std::function<Jet(double)> f;
  double s, c;
  Jet jet(double r) const override { return f(r); }
  double exponent() const override { return s; }
  double coefficient() const override { return c; }
};

PotentialSpec resolved(PotentialSpec spec, double R_max);

std::shared_ptr<const Node> build(const PotentialSpec& spec, double R_max) {
  switch (spec.kind) {
    case PotentialKind::Zero:
      return std::make_shared<ZeroNode>();
    case PotentialKind::Constant:
      if (!(spec.value >= 0.0)) fail(ErrorCode::InvalidArgument, "constant potential must be >= 0");
      return std::make_shared<ConstantNode>(spec.value);
    case PotentialKind::Power:
      if (!std::isfinite(spec.m)) fail(ErrorCode::InvalidArgument, "power exponent must be finite");
      return std::make_shared<PowerNode>(spec.m);
    case PotentialKind::LogChain: {
      if (spec.k < 1) fail(ErrorCode::InvalidArgument, "log chain depth k must be >= 1");
      if (spec.rho == 0.0) return build(resolved(spec, R_max), R_max);
      if (!(spec.rho > R_max)) fail(ErrorCode::InvalidArgument, "log chain requires rho > R");
      // iterated logs decrease in r, so the binding check is at R_max
      double L = std::log(spec.rho / R_max);
      for (int i = 0; i < spec.k; ++i) {
        if (i > 0) L = L > 0.0 ? std::log(L) : -1.0;
        if (!(L >= 1e-8)) {
          std::ostringstream msg;
          msg << "rho=" << spec.rho << " too small: log^(" << i + 1 << ")(rho/R) = " << L
              << " is below 1e-8";
          fail(ErrorCode::InvalidArgument, msg.str());
        }
      }
      return std::make_shared<LogChainNode>(spec.k, spec.rho);
    }
    case PotentialKind::XChain: {
      if (spec.k < 1) fail(ErrorCode::InvalidArgument, "x chain depth k must be >= 1");
      const double R = spec.R > 0.0 ? spec.R : R_max;
      if (R < R_max * (1.0 - 1e-14))
        fail(ErrorCode::InvalidArgument, "x chain scale R must be >= the domain radius");
      return std::make_shared<XChainNode>(spec.k, R);
    }
    case PotentialKind::Scaled:
      if (spec.terms.size() != 1) fail(ErrorCode::InvalidArgument, "scaled needs one inner spec");
      if (!(spec.value >= 0.0)) fail(ErrorCode::InvalidArgument, "scale factor must be >= 0");
      return std::make_shared<ScaledNode>(spec.value, build(spec.terms[0], R_max));
    case PotentialKind::Sum: {
      auto node = std::make_shared<SumNode>();
      for (const auto& t : spec.terms) node->terms.push_back(build(t, R_max));
      return node;
    }
    case PotentialKind::Custom: {
      if (!spec.custom) fail(ErrorCode::InvalidArgument, "custom potential needs an evaluator");
      auto node = std::make_shared<CustomNode>();
      node->f = spec.custom;
      node->s = spec.custom_exponent;
      node->c = spec.custom_coefficient;
      return node;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown potential kind");
}

PotentialSpec resolved(PotentialSpec spec, double R_max) {
  if (spec.kind == PotentialKind::XChain && !(spec.R > 0.0)) spec.R = R_max;
  if (spec.kind == PotentialKind::LogChain && spec.rho == 0.0)
    spec.rho = default_chain_rho(spec.k, R_max);
  for (auto& t : spec.terms) t = resolved(std::move(t), R_max);
  return spec;
}

}  // namespace

double default_chain_rho(int k, double R) {
  double x = 1.0;
  for (int i = 0; i < k; ++i) x = std::exp(x);
  return R * x;
}

RadialPotential make_potential(const PotentialSpec& spec, double R_max) {
  if (!(R_max > 0.0) || !std::isfinite(R_max))
    fail(ErrorCode::InvalidArgument, "domain radius must be positive and finite");
  RadialPotential p;
  p.node_ = build(spec, R_max);
  p.spec_ = resolved(spec, R_max);
  p.R_max_ = R_max;
  return p;
}

PotentialKind RadialPotential::kind() const { return spec_.kind; }
double RadialPotential::value(double r) const { return node_->jet(r).v; }
double RadialPotential::deriv(double r) const { return node_->jet(r).d1; }
double RadialPotential::deriv2(double r) const { return node_->jet(r).d2; }
Jet RadialPotential::jet(double r) const { return node_->jet(r); }
double RadialPotential::sing_exponent() const { return node_->exponent(); }
double RadialPotential::sing_coefficient() const { return node_->coefficient(); }
bool RadialPotential::is_zero() const { return node_->zero(); }

// ---------------------------------------------------------------------------

std::vector<double> default_probe_radii(double R) {
  std::vector<double> out;
  for (double u : {4.0, 8.0, 16.0, 32.0, 64.0}) out.push_back(R * std::exp(-u));
  return out;
}

namespace {

// Polynomial extrapolation to x = 0 through (x_i, y_i).
double neville_at_zero(std::vector<double> x, std::vector<double> y) {
  const size_t n = x.size();
  for (size_t m = 1; m < n; ++m)
    for (size_t i = 0; i + m < n; ++i)
      y[i] = (x[i + m] * y[i] - x[i] * y[i + 1]) / (x[i + m] - x[i]);
  return y[0];
}

}  // namespace

LambdaData lambda_limit(const RadialPotential& W, const std::vector<double>& probe_radii,
                        double tol) {
  if (probe_radii.size() < 3) fail(ErrorCode::InvalidArgument, "lambda_limit needs >= 3 probes");
  const double R = W.R_max();
  std::vector<double> x, e;
  for (size_t i = 0; i < probe_radii.size(); ++i) {
    const double r = probe_radii[i];
    if (!(r > 0.0) || (i > 0 && !(r < probe_radii[i - 1])))
      fail(ErrorCode::InvalidArgument, "probe radii must be positive and strictly decreasing");
    const Jet j = W.jet(r);
    if (!(j.v > 0.0)) fail(ErrorCode::Domain, "lambda_limit needs W > 0 at the probe radii");
    x.push_back(1.0 / std::log(R / r));
    e.push_back(-r * j.d1 / j.v);
  }
  const double full = neville_at_zero(x, e);
  const double head = neville_at_zero({x.begin(), x.end() - 1}, {e.begin(), e.end() - 1});
  const double tail = neville_at_zero({x.begin() + 1, x.end()}, {e.begin() + 1, e.end()});
  const double spread = std::max(std::abs(full - head), std::abs(full - tail));
  if (spread > tol * std::max(1.0, std::abs(full))) {
    std::ostringstream msg;
    msg << "lambda extrapolation did not settle: estimates " << head << ", " << full << ", "
        << tail;
    fail(ErrorCode::NoConvergence, msg.str());
  }
  LambdaData out;
  out.lambda = std::abs(full) < 1e-12 ? 0.0 : full;
  out.spread = spread;
  const double lam = out.lambda;
  out.residual = [W, lam](double r) {
    const Jet j = W.jet(r);
    return j.d1 / j.v + lam / r;
  };
  return out;
}

LambdaData lambda_limit(const RadialPotential& W) {
  return lambda_limit(W, default_probe_radii(W.R_max()));
}

// ---------------------------------------------------------------------------

std::optional<double> catalog_multiplier(const PotentialSpec& spec) {
  switch (spec.kind) {
    case PotentialKind::LogChain:
    case PotentialKind::XChain:
      return 0.25;
    case PotentialKind::Scaled: {
      const auto inner = catalog_multiplier(spec.terms.at(0));
      if (inner && spec.value > 0.0) return *inner / spec.value;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::optional<Phi> candidate_phi(const PotentialSpec& spec, double c) {
  switch (spec.kind) {
    case PotentialKind::Zero:
      return Phi{[](double) { return Jet{1.0, 0.0, 0.0}; }};
    case PotentialKind::Constant:
    case PotentialKind::Power: {
      // J0(kappa r^q), q = 1 - m, kappa = sqrt(c w)/q
      const double m = spec.kind == PotentialKind::Power ? spec.m : 0.0;
      const double w = spec.kind == PotentialKind::Constant ? spec.value : 1.0;
      const double q = 1.0 - m;
      if (!(q > 0.0) || !(c * w >= 0.0)) return std::nullopt;
      const double kappa = std::sqrt(c * w) / q;
      return Phi{[=](double r) {
        const double rq = std::pow(r, q);
        const double x = kappa * rq;
        const double v = bessel_j(0.0, x);
        const double d1 = -bessel_j(1.0, x) * kappa * q * rq / r;
        const double d2 = -d1 / r - c * w * std::pow(r, -2.0 * m) * v;
        return Jet{v, d1, d2};
      }};
    }
    case PotentialKind::LogChain: {
      if (std::abs(c - 0.25) > 1e-14) return std::nullopt;
      const int k = spec.k;
      const double rho = spec.rho;
      return Phi{[=](double r) {
        const LogLevels lv = log_levels(k, rho, r);
        double v = 1.0, g = 0.0, w = 0.0, prod = 1.0 / (r * r);
        for (int i = 0; i < k; ++i) {
          v *= std::sqrt(lv.L[i]);
          g += 0.5 * lv.l[i];
          prod /= lv.L[i] * lv.L[i];
          w += prod;
        }
        const double d1 = v * g;
        return Jet{v, d1, -d1 / r - c * w * v};
      }};
    }
    case PotentialKind::XChain: {
      if (std::abs(c - 0.25) > 1e-14) return std::nullopt;
      const int k = spec.k;
      const double R = spec.R;
      if (!(R > 0.0)) return std::nullopt;
      return Phi{[=](double r) {
        const XLevels lv = x_levels(k, r / R);
        double v = 1.0, g = 0.0, w = 0.0, prod = 1.0 / (r * r);
        for (int i = 0; i < k; ++i) {
          v /= std::sqrt(lv.X[i]);
          g -= 0.5 * lv.xi[i] / R;
          prod *= lv.X[i] * lv.X[i];
          w += prod;
        }
        const double d1 = v * g;
        return Jet{v, d1, -d1 / r - c * w * v};
      }};
    }
    case PotentialKind::Scaled:
      return candidate_phi(spec.terms.at(0), c * spec.value);
    default:
      return std::nullopt;
  }
}

Phi candidate_phi(const PotentialSpec& spec) {
  if (spec.kind == PotentialKind::Sum || spec.kind == PotentialKind::Custom)
    fail(ErrorCode::Unsupported, std::string("no closed-form solution for kind ") +
                                     to_string(spec.kind));
  const double c = catalog_multiplier(spec).value_or(1.0);
  auto phi = candidate_phi(spec, c);
  if (!phi) fail(ErrorCode::Unsupported, "no closed-form solution for this potential");
  return *phi;
}

std::optional<double> closed_form_beta(const PotentialSpec& spec, double R) {
  switch (spec.kind) {
    case PotentialKind::Zero:
      return std::numeric_limits<double>::infinity();
    case PotentialKind::Constant: {
      if (spec.value == 0.0) return std::numeric_limits<double>::infinity();
      const double z0 = first_zero_j0();
      return z0 * z0 / (spec.value * R * R);
    }
    case PotentialKind::Power: {
      const double q = 1.0 - spec.m;
      if (!(q > 0.0)) return std::nullopt;
      const double z0 = first_zero_j0();
      return q * q * z0 * z0 * std::pow(R, -2.0 * q);
    }
    case PotentialKind::LogChain:
    case PotentialKind::XChain:
      return 0.25;
    case PotentialKind::Scaled: {
      const auto inner = closed_form_beta(spec.terms.at(0), R);
      if (!inner || !(spec.value > 0.0)) return std::nullopt;
      return *inner / spec.value;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace hrkit
