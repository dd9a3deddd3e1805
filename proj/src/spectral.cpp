#include "hrkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <lapacke.h>

#include "hrkit/error.hpp"
#include "hrkit/radial_ode.hpp"

namespace hrkit {

const char* to_string(QuotientKind q) noexcept {
  return q == QuotientKind::GradOverGrad ? "grad" : "delta";
}

const char* to_string(BoundaryCondition bc) noexcept {
  switch (bc) {
    case BoundaryCondition::H2: return "H2";
    case BoundaryCondition::H2capH10: return "H2capH10";
    case BoundaryCondition::H20: return "H20";
  }
  return "?";
}

QuotientKind parse_quotient(const std::string& s) {
  if (s == "grad" || s == "GradOverGrad") return QuotientKind::GradOverGrad;
  if (s == "delta" || s == "DeltaOverU") return QuotientKind::DeltaOverU;
  fail(ErrorCode::InvalidArgument, "unknown quotient '" + s + "' (grad|delta)");
}

BoundaryCondition parse_bc(const std::string& s) {
  if (s == "H2" || s == "h2") return BoundaryCondition::H2;
  if (s == "H2capH10" || s == "h2caph10") return BoundaryCondition::H2capH10;
  if (s == "H20" || s == "h20") return BoundaryCondition::H20;
  fail(ErrorCode::InvalidArgument, "unknown boundary condition '" + s + "' (H2|H2capH10|H20)");
}

ModeForm ModeForm::make(int n, double m, int k, QuotientKind kind, BoundaryCondition bc) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  if (k < 0) fail(ErrorCode::InvalidArgument, "mode index k must be >= 0");
  ModeForm f;
  f.n = n;
  f.m = m;
  f.k = k;
  f.c_k = static_cast<double>(k) * (n + k - 2);
  f.kind = kind;
  f.bc = bc;
  return f;
}

bool ModeForm::admissible() const {
  if (kind == QuotientKind::GradOverGrad && k == 0) return n - 2.0 * m > 0.0;
  return 2.0 * k + n - 2.0 * m - 4.0 > 0.0;
}

// ---------------------------------------------------------------------------

namespace {

// Weights of the finite-difference formula for the d-th derivative on integer offsets.
std::vector<double> fd_weights(const std::vector<int>& offsets, int d) {
  const int n = static_cast<int>(offsets.size());
  std::vector<double> a(n * n), b(n, 0.0);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col) a[row * n + col] = std::pow(offsets[col], row);
  double fact = 1.0;
  for (int i = 2; i <= d; ++i) fact *= i;
  b[d] = fact;
  std::vector<lapack_int> piv(n);
  if (LAPACKE_dgesv(LAPACK_ROW_MAJOR, n, 1, a.data(), n, piv.data(), b.data(), 1) != 0)
    fail(ErrorCode::InvalidArgument, "singular stencil");
  return b;
}

}  // namespace

Discretization Discretization::make(const GridParams& g, double p) {
  if (g.N < 16) fail(ErrorCode::InvalidArgument, "grid needs at least 16 nodes");
  if (!(g.s_min < 0.0)) fail(ErrorCode::InvalidArgument, "s_min must be negative");
  if (!(g.R > 0.0)) fail(ErrorCode::InvalidArgument, "R must be positive");
  Discretization d;
  d.N = g.N;
  d.p = p;
  d.R = g.R;
  d.h = -g.s_min / (g.N - 1);
  d.s.resize(g.N);
  for (int i = 0; i < g.N; ++i) d.s[i] = g.s_min + i * d.h;
  d.s.back() = 0.0;
  d.weights.assign(g.N, d.h);
  const double greg[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  for (int i = 0; i < 3; ++i) {
    d.weights[i] *= greg[i];
    d.weights[g.N - 1 - i] *= greg[i];
  }
  const double h = d.h;
  d.D1.resize(g.N);
  d.D2.resize(g.N);
  for (int i = 0; i < g.N; ++i) {
    int start;
    if (i >= 2 && i <= g.N - 3) {
      start = i - 2;
      d.D1[i] = {start, {1 / (12 * h), -8 / (12 * h), 0.0, 8 / (12 * h), -1 / (12 * h)}};
      const double h2 = 12 * h * h;
      d.D2[i] = {start, {-1 / h2, 16 / h2, -30 / h2, 16 / h2, -1 / h2}};
      continue;
    }
    start = i < 2 ? 0 : g.N - 6;
    std::vector<int> off;
    for (int j = 0; j < 6; ++j) off.push_back(start + j - i);
    auto w1 = fd_weights(off, 1), w2 = fd_weights(off, 2);
    for (auto& v : w1) v /= h;
    for (auto& v : w2) v /= h * h;
    d.D1[i] = {start, w1};
    d.D2[i] = {start, w2};
  }
  return d;
}

double SymBand::at(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (j - i > kd) return 0.0;
  return data[(kd + i - j) + static_cast<size_t>(j) * (kd + 1)];
}

std::vector<double> SymBand::to_dense() const {
  std::vector<double> out(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - kd); j <= std::min(n - 1, i + kd); ++j)
      out[static_cast<size_t>(i) * n + j] = at(i, j);
  return out;
}

double SymBand::form(const std::vector<double>& x) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - kd); j <= std::min(n - 1, i + kd); ++j) s += x[i] * at(i, j) * x[j];
  return s;
}

namespace {

using SparseRow = std::vector<std::pair<int, double>>;

struct Operators {
  std::vector<SparseRow> F1, F2, I;
};

Operators build_operators(const Discretization& d) {
  Operators op;
  const double p = d.p;
  for (int i = 0; i < d.N; ++i) {
    std::map<int, double> f1, f2;
    const auto& r1 = d.D1[i];
    const auto& r2 = d.D2[i];
    for (size_t j = 0; j < r1.coef.size(); ++j) {
      f1[r1.start + j] += r1.coef[j];
      f2[r1.start + j] += -(p + 1.0) * r1.coef[j];
    }
    for (size_t j = 0; j < r2.coef.size(); ++j) f2[r2.start + j] += r2.coef[j];
    f1[i] += -0.5 * p;
    f2[i] += 0.25 * p * p + 0.5 * p;
    op.F1.emplace_back(f1.begin(), f1.end());
    op.F2.emplace_back(f2.begin(), f2.end());
    op.I.push_back({{i, 1.0}});
  }
  return op;
}

// Accumulates sum_rows weight * (row . x)^2 into a band matrix over a mapped index space.
class GramBuilder {
 public:
  explicit GramBuilder(int n) : n_(n) {}
  void add(const SparseRow& row, double weight) { rows_.push_back({row, weight}); }
  SymBand build() const {
    int kd = 0;
    for (const auto& [row, w] : rows_)
      for (const auto& a : row)
        for (const auto& b : row) kd = std::max(kd, std::abs(a.first - b.first));
    SymBand out;
    out.n = n_;
    out.kd = kd;
    out.data.assign(static_cast<size_t>(kd + 1) * n_, 0.0);
    for (const auto& [row, w] : rows_)
      for (const auto& a : row)
        for (const auto& b : row)
          if (a.first <= b.first)
            out.data[(kd + a.first - b.first) + static_cast<size_t>(b.first) * (kd + 1)] +=
                w * a.second * b.second;
    return out;
  }

 private:
  int n_;
  std::vector<std::pair<SparseRow, double>> rows_;
};

// Map from full node index to reduced unknowns (a linear substitution).
struct Reduction {
  int n_reduced = 0;
  std::vector<SparseRow> map;  // map[j] = sum of (reduced index, coefficient)

  SparseRow apply(const SparseRow& row) const {
    std::map<int, double> acc;
    for (const auto& [j, c] : row)
      for (const auto& [k, t] : map[j]) acc[k] += c * t;
    SparseRow out;
    for (const auto& [k, v] : acc)
      if (v != 0.0) out.emplace_back(k, v);
    return out;
  }
  std::vector<double> expand(const std::vector<double>& x) const {
    std::vector<double> out(map.size(), 0.0);
    for (size_t j = 0; j < map.size(); ++j)
      for (const auto& [k, t] : map[j]) out[j] += t * x[k];
    return out;
  }
};

bool pins_boundary_value(const ModeForm& mode) {
  return mode.k >= 1 || mode.bc != BoundaryCondition::H2 ||
         mode.kind == QuotientKind::GradOverGrad;
}

Reduction make_reduction(const ModeForm& mode, const Discretization& d) {
  const int N = d.N;
  Reduction red;
  red.map.assign(N, {});
  const bool pin_value = pins_boundary_value(mode);
  const bool pin_slope = mode.bc == BoundaryCondition::H20;
  int next = 0;
  // nodes 0 and 1 carry h = h' = 0 at the inner cutoff
  std::vector<int> index(N, -1);
  for (int j = 2; j < N; ++j) {
    if (j == N - 1 && pin_value) continue;
    if (j == N - 2 && pin_slope) continue;
    index[j] = next++;
  }
  red.n_reduced = next;
  for (int j = 0; j < N; ++j)
    if (index[j] >= 0) red.map[j] = {{index[j], 1.0}};
  if (pin_slope) {
    // f'(R) = 0 with f(R) = 0 reads sum_j D1[N-1][j] h_j = 0; solve for h_{N-2}
    const auto& row = d.D1[N - 1];
    const double piv = row.coef[row.coef.size() - 2];
    SparseRow sub;
    for (size_t j = 0; j + 2 < row.coef.size(); ++j) {
      const int node = row.start + static_cast<int>(j);
      if (index[node] >= 0) sub.emplace_back(index[node], -row.coef[j] / piv);
    }
    red.map[N - 2] = sub;
  }
  return red;
}

SymBand assemble(const ModeForm& mode, const Discretization& d, const Reduction* red,
                 bool numerator) {
  const Operators op = build_operators(d);
  const int n_out = red ? red->n_reduced : d.N;
  auto mapped = [&](const SparseRow& r) { return red ? red->apply(r) : r; };
  const double scale = std::pow(d.R, d.p);
  GramBuilder g(n_out);
  const double n = mode.n, m = mode.m, ck = mode.c_k;
  if (numerator) {
    const double a1 = (n - 1.0) * (2.0 * m + 1.0) + 2.0 * ck;
    const double a0 = ck * (ck + (n - 4.0 - 2.0 * m) * (2.0 * m + 2.0));
    for (int i = 0; i < d.N; ++i) {
      const double w = d.weights[i] * scale;
      g.add(mapped(op.F2[i]), w);
      if (a1 != 0.0) g.add(mapped(op.F1[i]), a1 * w);
      if (a0 != 0.0) g.add(mapped(op.I[i]), a0 * w);
    }
    if (mode.bc != BoundaryCondition::H20)
      g.add(mapped(op.F1[d.N - 1]), (n - 1.0) * scale);
  } else {
    for (int i = 0; i < d.N; ++i) {
      const double w = d.weights[i] * scale;
      if (mode.kind == QuotientKind::GradOverGrad) {
        g.add(mapped(op.F1[i]), w);
        if (ck != 0.0) g.add(mapped(op.I[i]), ck * w);
      } else {
        g.add(mapped(op.I[i]), w);
      }
    }
  }
  return g.build();
}

SymBand widen(const SymBand& a, int kd) {
  if (a.kd == kd) return a;
  SymBand out;
  out.n = a.n;
  out.kd = kd;
  out.data.assign(static_cast<size_t>(kd + 1) * a.n, 0.0);
  for (int j = 0; j < a.n; ++j)
    for (int i = std::max(0, j - a.kd); i <= j; ++i)
      out.data[(kd + i - j) + static_cast<size_t>(j) * (kd + 1)] = a.at(i, j);
  return out;
}

}  // namespace

SymBand assemble_numerator(const ModeForm& mode, const Discretization& d) {
  return assemble(mode, d, nullptr, true);
}

SymBand assemble_denominator(const ModeForm& mode, const Discretization& d) {
  return assemble(mode, d, nullptr, false);
}

EigenPair smallest_generalized(const SymBand& A_in, const SymBand& B_in, bool want_vector) {
  if (A_in.n != B_in.n) fail(ErrorCode::InvalidArgument, "matrix size mismatch");
  const int kd = std::max(A_in.kd, B_in.kd);
  SymBand A = widen(A_in, kd), B = widen(B_in, kd);
  const int n = A.n;
  const char jobz = want_vector ? 'V' : 'N';
  std::vector<double> q(want_vector ? static_cast<size_t>(n) * n : 1), w(n), z(want_vector ? n : 1);
  std::vector<lapack_int> ifail(n);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsbgvx(
      LAPACK_COL_MAJOR, jobz, 'I', 'U', n, kd, kd, A.data.data(), kd + 1, B.data.data(), kd + 1,
      q.data(), want_vector ? n : 1, 0.0, 0.0, 1, 1, 2.0 * LAPACKE_dlamch('S'), &found, w.data(), z.data(), want_vector ? n : 1,
      ifail.data());
  if (info > n)
    fail(ErrorCode::NoConvergence, "denominator matrix is not positive definite (grid too coarse)");
  if (info != 0 || found < 1) fail(ErrorCode::NoConvergence, "generalized eigensolver failed");
  return {w[0], z};
}

double solve_mode(const ModeForm& mode, const GridParams& grid, std::vector<double>* r_out,
                  std::vector<double>* f_out) {
  if (!mode.admissible()) {
    std::ostringstream msg;
    msg << "mode k=" << mode.k << " is not integrable for n=" << mode.n << ", m=" << mode.m;
    fail(ErrorCode::DivergentIntegral, msg.str());
  }
  const double p = mode.n - 2.0 * mode.m - 4.0;
  const Discretization d = Discretization::make(grid, p);
  const Reduction red = make_reduction(mode, d);
  const SymBand A = assemble(mode, d, &red, true);
  const SymBand B = assemble(mode, d, &red, false);
  const EigenPair e = smallest_generalized(A, B, r_out && f_out);
  if (r_out && f_out) {
    const std::vector<double> hfull = red.expand(e.vector);
    r_out->clear();
    f_out->clear();
    double fmax = 0.0;
    for (int i = 0; i < d.N; ++i) {
      if (d.s[i] < -30.0) continue;
      r_out->push_back(grid.R * std::exp(d.s[i]));
      f_out->push_back(std::exp(-0.5 * p * d.s[i]) * hfull[i]);
      fmax = std::max(fmax, std::abs(f_out->back()));
    }
    // sign and scale convention: max |f| = 1 with a positive extremum
    double signed_max = 0.0;
    for (double v : *f_out)
      if (std::abs(v) > std::abs(signed_max)) signed_max = v;
    if (signed_max != 0.0)
      for (auto& v : *f_out) v /= signed_max;
  }
  return e.value;
}

RayleighResult min_rayleigh(int n, double m, QuotientKind kind, BoundaryCondition bc,
                            const RayleighOptions& opts) {
  if (opts.k_max < 2) fail(ErrorCode::InvalidArgument, "k_max must be >= 2");
  RayleighResult out;
  out.value = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= opts.k_max; ++k) {
    const ModeForm mode = ModeForm::make(n, m, k, kind, bc);
    ModeResult mr;
    mr.k = k;
    mr.admissible = mode.admissible();
    if (mr.admissible) {
      mr.value = solve_mode(mode, opts.grid);
      if (mr.value < out.value) {
        out.value = mr.value;
        out.k_star = k;
      }
    } else {
      mr.value = std::numeric_limits<double>::quiet_NaN();
    }
    out.modes.push_back(mr);
  }
  if (!std::isfinite(out.value)) fail(ErrorCode::DivergentIntegral, "no admissible mode");
  const ModeForm best = ModeForm::make(n, m, out.k_star, kind, bc);
  solve_mode(best, opts.grid, &out.r, &out.f);
  out.refinement.push_back({opts.grid.N, opts.grid.s_min, out.value});
  out.richardson = out.value;
  out.extrapolated = out.value;
  if (opts.refine) {
    GridParams coarse = opts.grid;
    coarse.N = opts.grid.N / 2;
    const double v_coarse = solve_mode(best, coarse);
    GridParams half = coarse;
    half.s_min = 0.5 * opts.grid.s_min;
    const double v_half = solve_mode(best, half);
    out.refinement.insert(out.refinement.begin(), {coarse.N, coarse.s_min, v_coarse});
    out.refinement.push_back({half.N, half.s_min, v_half});
    out.richardson = out.value + (out.value - v_coarse) / 15.0;
    const double L = -opts.grid.s_min, L1 = -half.s_min;
    out.extrapolated = (L * L * out.value - L1 * L1 * v_half) / (L * L - L1 * L1);
  }
  return out;
}

EqualInfimaReport check_equal_infima(int n, double m, QuotientKind kind,
                                     const RayleighOptions& opts) {
  EqualInfimaReport rep;
  std::vector<BoundaryCondition> bcs;
  if (kind == QuotientKind::GradOverGrad) bcs.push_back(BoundaryCondition::H2);
  bcs.push_back(BoundaryCondition::H2capH10);
  bcs.push_back(BoundaryCondition::H20);
  RayleighOptions o = opts;
  o.refine = true;
  double err_sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (auto bc : bcs) {
    RayleighResult r = min_rayleigh(n, m, kind, bc, o);
    err_sum += std::abs(r.value - r.extrapolated) + std::abs(r.value - r.richardson);
    lo = std::min(lo, r.value);
    hi = std::max(hi, r.value);
    rep.results.emplace_back(bc, std::move(r));
  }
  rep.tolerance = err_sum + 1e-3 * std::abs(hi);
  rep.spread = (hi - lo) / std::max(std::abs(lo), 1e-300);
  rep.equal = hi - lo <= rep.tolerance;
  rep.ordered = true;
  for (size_t i = 1; i < rep.results.size(); ++i)
    if (rep.results[i].second.value < rep.results[i - 1].second.value - rep.tolerance)
      rep.ordered = false;
  return rep;
}

// ---------------------------------------------------------------------------

std::optional<double> C_of_n(int n) {
  if (n == 3) return 25.0 / 36.0;
  if (n == 4) return 3.0;
  if (n >= 5) return n * n / 4.0;
  return std::nullopt;
}

std::optional<double> a_closed_form(int n, double m) {
  if (m == 0.0) return C_of_n(n);
  const double disc = 2.0 * std::sqrt(static_cast<double>(n) * n - n + 1.0);
  const double lo = (-(n + 4.0) - disc) / 6.0, hi = (-(n + 4.0) + disc) / 6.0;
  if (m >= lo && m <= hi && n - 2.0 * m > 0.0) return (n + 2.0 * m) * (n + 2.0 * m) / 4.0;
  return std::nullopt;
}

double H_closed_form(int n, double m) {
  const double v = (n + 2.0 * m) * (n - 4.0 - 2.0 * m) / 4.0;
  return v * v;
}

ConditionReport check_condition_main(const RadialPotential& V, const RadialPotential& W, int n,
                                     double R, bool with_boundary) {
  ConditionReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  const int samples = 400;
  for (int i = 0; i < samples; ++i) {
    const double r = R * std::pow(10.0, -8.0 * (1.0 - static_cast<double>(i) / (samples - 1)));
    const Jet v = V.jet(r);
    const double w = W.value(r);
    const double raw = w - 2.0 * v.v / (r * r) + 2.0 * v.d1 / r - v.d2;
    const double normalized = raw * r * r / v.v;
    if (normalized < rep.min_value) {
      rep.min_value = normalized;
      rep.min_radius = r;
      rep.min_raw = raw;
    }
  }
  rep.holds = rep.min_value >= -1e-12;
  if (with_boundary) {
    try {
      const OdeProblem p = OdeProblem::make(n, V, W, 1.0, R);
      const double th = theta(p);
      const double VR = V.value(R);
      rep.boundary_value = (n - 1.0 + R * th / VR) * VR;
      rep.boundary_holds = *rep.boundary_value >= 0.0;
    } catch (const Error&) {
      rep.boundary_value.reset();
      rep.boundary_holds.reset();
    }
  }
  return rep;
}

}  // namespace hrkit
