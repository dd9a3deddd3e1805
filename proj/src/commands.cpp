#include "hrkit/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "hrkit/bessel_weight.hpp"
#include "hrkit/config.hpp"
#include "hrkit/error.hpp"
#include "hrkit/inequality.hpp"
#include "hrkit/radial_ode.hpp"
#include "hrkit/special_functions.hpp"
#include "hrkit/spectral.hpp"

namespace hrkit {

using nlohmann::json;

namespace {

const std::set<std::string> kCommon = {"schema", "command", "format", "out", "verbose", "seed",
                                       "threads"};

const std::map<std::string, std::set<std::string>>& command_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"shoot", {"n", "V", "W", "c", "R", "dim", "tol", "r0_rel", "stop_at_zero", "samples"}},
      {"weight", {"n", "V", "W", "R", "dim", "rel_tol"}},
      {"theta", {"n", "V", "W", "c", "R", "dim"}},
      {"sweep", {"n", "V", "W", "R", "dim", "c_min", "c_max", "count", "c_values", "geometric"}},
      {"rayleigh",
       {"n", "m", "quotient", "bc", "N", "s_min", "k_max", "refine", "R", "profile"}},
      {"constants", {"n", "m", "N", "k_max"}},
      {"verify",
       {"ineq", "n", "m", "a", "alpha", "lambda", "k", "R", "V", "W", "W2", "suite", "count",
        "c"}},
      {"mu", {"n"}},
  };
  return keys;
}

void validate(const std::string& command, const json& cfg) {
  if (!cfg.is_object()) fail(ErrorCode::InvalidArgument, "config must be a JSON object");
  const auto it = command_keys().find(command);
  if (it == command_keys().end()) fail(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
  for (const auto& [key, value] : cfg.items()) {
    if (!kCommon.count(key) && !it->second.count(key))
      fail(ErrorCode::InvalidArgument, "unknown key '" + key + "' for command " + command);
    (void)value;
  }
  if (cfg.contains("schema") && cfg["schema"] != kSchema)
    fail(ErrorCode::InvalidArgument, std::string("unsupported schema (expected ") + kSchema + ")");
}

double num_at(const json& c, const char* key, double dflt) {
  if (!c.contains(key)) return dflt;
  if (!c[key].is_number())
    fail(ErrorCode::InvalidArgument, std::string("'") + key + "' must be a number");
  return c[key].get<double>();
}

int int_at(const json& c, const char* key, int dflt) {
  const double v = num_at(c, key, dflt);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    fail(ErrorCode::InvalidArgument, std::string("'") + key + "' must be an integer");
  return static_cast<int>(v);
}

bool bool_at(const json& c, const char* key, bool dflt) {
  if (!c.contains(key)) return dflt;
  if (!c[key].is_boolean())
    fail(ErrorCode::InvalidArgument, std::string("'") + key + "' must be true or false");
  return c[key].get<bool>();
}

std::string str_at(const json& c, const char* key, const std::string& dflt) {
  if (!c.contains(key)) return dflt;
  if (!c[key].is_string())
    fail(ErrorCode::InvalidArgument, std::string("'") + key + "' must be a string");
  return c[key].get<std::string>();
}

PotentialSpec pot_at(const json& c, const char* key, const char* dflt) {
  if (!c.contains(key)) return parse_potential(dflt);
  return potential_from_json(c[key]);
}

OdeDim dim_at(const json& c) {
  const std::string d = str_at(c, "dim", "n");
  if (d == "n") return OdeDim::NDim;
  if (d == "2d" || d == "two") return OdeDim::TwoD;
  fail(ErrorCode::InvalidArgument, "dim must be 'n' or '2d'");
}

int threads_at(const json& c) {
  const int t = int_at(c, "threads", 0);
  return t > 0 ? t : default_thread_count();
}

struct Problem {
  OdeProblem p;
  json echo;
};

Problem problem_at(const json& c, bool with_c) {
  const int n = int_at(c, "n", 3);
  const double R = num_at(c, "R", 1.0);
  const double cc = with_c ? num_at(c, "c", 1.0) : 1.0;
  const PotentialSpec Vs = pot_at(c, "V", "one"), Ws = pot_at(c, "W", "one");
  const OdeDim dim = dim_at(c);
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  Problem out;
  out.p = OdeProblem::make(n, make_potential(Vs, R), make_potential(Ws, R), cc, R, dim);
  out.echo = {{"n", n}, {"R", R}, {"V", potential_to_json(out.p.V.spec())},
              {"W", potential_to_json(out.p.W.spec())}, {"dim", to_string(dim)}};
  if (with_c) out.echo["c"] = cc;
  return out;
}

json trajectory_summary(const Trajectory& t) {
  json j;
  j["sigma"] = num(t.sigma);
  j["first_zero"] = t.first_zero ? num(*t.first_zero) : json(nullptr);
  j["positive_open"] = t.positive_open;
  j["positive_at_R"] = t.positive_at_R;
  j["boundary_degenerate"] = t.boundary_degenerate;
  j["end_ratio"] = num(t.end_ratio);
  j["scale"] = num(t.scale);
  j["points"] = t.r.size();
  return j;
}

json cmd_shoot(const json& c) {
  const Problem pr = problem_at(c, true);
  ShootOptions o;
  o.tol = num_at(c, "tol", o.tol);
  o.r0_rel = num_at(c, "r0_rel", o.r0_rel);
  o.stop_at_zero = bool_at(c, "stop_at_zero", true);
  const int samples = int_at(c, "samples", 0);
  const Trajectory t = shoot_from_origin(pr.p, o);
  json res = trajectory_summary(t);
  if (t.positive_at_R && !t.boundary_degenerate && t.first_zero == std::nullopt)
    res["theta"] = num(pr.p.V.value(pr.p.R) * t.end_ratio);
  json prof = {{"r", json::array()}, {"y", json::array()}, {"yp", json::array()}, {"ypp", json::array()}};
  auto push = [&](double r, const Jet& y) {
    prof["r"].push_back(num(r));
    prof["y"].push_back(num(y.v));
    prof["yp"].push_back(num(y.d1));
    prof["ypp"].push_back(num(y.d2));
  };
  if (samples > 1) {
    const double lo = std::log(t.r.front()), hi = std::log(t.r.back());
    for (int i = 0; i < samples; ++i) {
      const double r = std::exp(lo + (hi - lo) * i / (samples - 1.0));
      push(r, t.sample(std::clamp(r, t.r.front(), t.r.back())));
    }
  } else {
    for (size_t i = 0; i < t.r.size(); ++i) push(t.r[i], Jet{t.y[i], t.yp[i], t.ypp[i]});
  }
  res["profile"] = prof;
  return {{"input", pr.echo}, {"result", res}};
}

json cmd_weight(const json& c) {
  const Problem pr = problem_at(c, false);
  WeightOptions o;
  o.rel_tol = num_at(c, "rel_tol", o.rel_tol);
  const WeightResult w = weight(pr.p, o);
  json res = {{"beta", num(w.beta)},
              {"c_lo", num(w.c_lo)},
              {"c_hi", num(w.c_hi)},
              {"iterations", w.iterations},
              {"unbounded", w.unbounded}};
  res["theta_at_beta"] = w.theta_at_beta ? num(*w.theta_at_beta) : json(nullptr);
  if (!w.unbounded) {
    res["certificate_lo"] = trajectory_summary(w.certificate_lo.certificate);
    res["certificate_hi"] = w.certificate_hi.origin_oscillation
                                ? json({{"origin_oscillation", true}})
                                : trajectory_summary(w.certificate_hi.certificate);
  }
  json echo = pr.echo;
  echo["rel_tol"] = o.rel_tol;
  return {{"input", echo}, {"result", res}};
}

json cmd_theta(const json& c) {
  const Problem pr = problem_at(c, true);
  const double th = theta(pr.p);
  return {{"input", pr.echo},
          {"result",
           {{"theta", num(th)}, {"R_phi_ratio", num(pr.p.R * th / pr.p.V.value(pr.p.R))}}}};
}

json cmd_sweep(const json& c) {
  const Problem pr = problem_at(c, false);
  std::vector<double> cs;
  if (c.contains("c_values")) {
    if (!c["c_values"].is_array()) fail(ErrorCode::InvalidArgument, "c_values must be an array");
    for (const auto& v : c["c_values"]) {
      if (!v.is_number()) fail(ErrorCode::InvalidArgument, "c_values must hold numbers");
      cs.push_back(v.get<double>());
    }
  } else {
    const double lo = num_at(c, "c_min", 0.5), hi = num_at(c, "c_max", 20.0);
    const int count = int_at(c, "count", 10);
    const bool geo = bool_at(c, "geometric", false);
    if (count < 1 || !(hi >= lo)) fail(ErrorCode::InvalidArgument, "need count >= 1 and c_max >= c_min");
    if (geo && !(lo > 0.0)) fail(ErrorCode::InvalidArgument, "geometric sweep needs c_min > 0");
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : i / (count - 1.0);
      cs.push_back(geo ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
  }
  std::vector<json> rows(cs.size());
  std::vector<std::string> errors(cs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < cs.size(); i = next++) {
      json row = {{"c", num(cs[i])}};
      try {
        const PairVerdict v = is_bessel_pair(pr.p, cs[i]);
        row["positive"] = v.positive;
        row["origin_oscillation"] = v.origin_oscillation;
        const Trajectory& t = v.certificate;
        row["first_zero"] = t.first_zero ? num(*t.first_zero) : json(nullptr);
        if (v.positive && t.positive_at_R && !t.boundary_degenerate)
          row["theta"] = num(pr.p.V.value(pr.p.R) * t.end_ratio);
        else
          row["theta"] = nullptr;
      } catch (const Error& e) {
        errors[i] = e.what();
      }
      rows[i] = row;
    }
  };
  const int threads = std::max(1, std::min<int>(threads_at(c), static_cast<int>(cs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) fail(ErrorCode::NoConvergence, "sweep: " + e);
  return {{"input", pr.echo}, {"result", {{"rows", rows}}}};
}

json rayleigh_json(const RayleighResult& r, bool profile) {
  json modes = json::array();
  for (const auto& m : r.modes)
    modes.push_back({{"k", m.k}, {"admissible", m.admissible},
                     {"value", m.admissible ? num(m.value) : json(nullptr)}});
  json ref = json::array();
  for (const auto& row : r.refinement)
    ref.push_back({{"N", row.N}, {"s_min", num(row.s_min)}, {"value", num(row.value)}});
  json j = {{"value", num(r.value)},         {"k_star", r.k_star},
            {"richardson", num(r.richardson)}, {"extrapolated", num(r.extrapolated)},
            {"modes", modes},                 {"refinement", ref}};
  if (profile) {
    json p = {{"r", json::array()}, {"f", json::array()}};
    for (size_t i = 0; i < r.r.size(); ++i) {
      p["r"].push_back(num(r.r[i]));
      p["f"].push_back(num(r.f[i]));
    }
    j["profile"] = p;
  }
  return j;
}

json cmd_rayleigh(const json& c) {
  const int n = int_at(c, "n", 5);
  const double m = num_at(c, "m", 0.0);
  const QuotientKind q = parse_quotient(str_at(c, "quotient", "grad"));
  const BoundaryCondition bc = parse_bc(str_at(c, "bc", "H2"));
  RayleighOptions o;
  o.grid.N = int_at(c, "N", o.grid.N);
  o.grid.s_min = num_at(c, "s_min", o.grid.s_min);
  o.grid.R = num_at(c, "R", 1.0);
  o.k_max = int_at(c, "k_max", o.k_max);
  o.refine = bool_at(c, "refine", true);
  const RayleighResult r = min_rayleigh(n, m, q, bc, o);
  json res = rayleigh_json(r, bool_at(c, "profile", false));
  std::optional<double> closed;
  if (q == QuotientKind::GradOverGrad) closed = a_closed_form(n, m);
  else closed = H_closed_form(n, m);
  // both constants scale as R^0; the quotients are dimensionless
  res["closed_form"] = closed ? num(*closed) : json(nullptr);
  return {{"input",
           {{"n", n}, {"m", m}, {"quotient", to_string(q)}, {"bc", to_string(bc)},
            {"N", o.grid.N}, {"s_min", o.grid.s_min}, {"k_max", o.k_max}, {"R", o.grid.R}}},
          {"result", res}};
}

json cmd_constants(const json& c) {
  const int n = int_at(c, "n", 5);
  const double m = num_at(c, "m", 0.0);
  RayleighOptions o;
  o.grid.N = int_at(c, "N", o.grid.N);
  o.k_max = int_at(c, "k_max", o.k_max);
  json rows = json::array();
  auto row = [&](const char* name, QuotientKind q, BoundaryCondition bc, std::optional<double> closed) {
    json r = {{"quantity", name}, {"n", n}, {"m", m}, {"bc", to_string(bc)}};
    try {
      const RayleighResult rr = min_rayleigh(n, m, q, bc, o);
      r["computed"] = num(rr.value);
      r["extrapolated"] = num(rr.extrapolated);
      r["k_star"] = rr.k_star;
    } catch (const Error& e) {
      r["computed"] = nullptr;
      r["note"] = e.what();
    }
    r["closed_form"] = closed ? num(*closed) : json(nullptr);
    if (closed && r["computed"].is_number() && *closed != 0.0)
      r["rel_diff"] = num(r["computed"].get<double>() / *closed - 1.0);
    rows.push_back(r);
  };
  row("a", QuotientKind::GradOverGrad, BoundaryCondition::H2, a_closed_form(n, m));
  std::optional<double> H;
  if (m >= -0.5 * n && m <= 0.5 * (n - 4)) H = H_closed_form(n, m);
  row("H", QuotientKind::DeltaOverU, BoundaryCondition::H2capH10, H);
  json res = {{"rows", rows}};
  if (m == 0.0) res["C_n"] = C_of_n(n) ? num(*C_of_n(n)) : json(nullptr);
  return {{"input", {{"n", n}, {"m", m}, {"N", o.grid.N}, {"k_max", o.k_max}}}, {"result", res}};
}

json report_json(const DeficitReport& r) {
  json rhs = json::array(), extras = json::array();
  for (const auto& [k, v] : r.rhs_terms) rhs.push_back({{"term", k}, {"value", num(v)}});
  for (const auto& [k, v] : r.extras) extras.push_back({{"term", k}, {"value", num(v)}});
  return {{"inequality", r.inequality}, {"function", r.function},       {"lhs", num(r.lhs)},
          {"rhs", rhs},                 {"extras", extras},             {"deficit", num(r.deficit)},
          {"quad_error", num(r.quad_error)}, {"hypotheses_ok", r.hypotheses_ok},
          {"holds", std::isfinite(r.deficit) && r.holds()}, {"note", r.note}};
}

std::vector<TestFunction> suite_at(const json& c, double R) {
  const json s = c.contains("suite") ? c["suite"] : json("builtin");
  if (s.is_string()) {
    const std::string name = s.get<std::string>();
    if (name == "builtin") return builtin_suite(R);
    if (name == "random") {
      const int seed = int_at(c, "seed", 1);
      return random_suite(int_at(c, "count", 30), static_cast<std::uint64_t>(seed), R);
    }
    fail(ErrorCode::InvalidArgument, "suite must be 'builtin', 'random' or an array of functions");
  }
  return suite_from_json(s, R);
}

CommandResult cmd_verify(const json& c) {
  const std::string ineq = str_at(c, "ineq", "hardy");
  CommandResult out;
  if (ineq == "equivalence") {
    const int n = int_at(c, "n", 3);
    const double R = num_at(c, "R", 1.0);
    const double cc = num_at(c, "c", 1.0);
    const RadialPotential V = make_potential(pot_at(c, "V", "one"), R);
    const RadialPotential W = make_potential(pot_at(c, "W", "one"), R);
    const EquivalenceReport e = verify_equivalence(V, W, n, R, cc, suite_at(c, R));
    json reps = json::array();
    for (const auto& r : e.reports) reps.push_back(report_json(r));
    json res = {{"bessel_pair", e.bessel_pair}, {"consistent", e.consistent},
                {"conclusive", e.conclusive},   {"verdict", e.verdict},
                {"reports", reps}};
    res["theta"] = e.theta ? num(*e.theta) : json(nullptr);
    res["c_lo"] = e.c_lo ? num(*e.c_lo) : json(nullptr);
    res["violator"] = e.violator ? report_json(*e.violator) : json(nullptr);
    out.output = {{"input",
                   {{"ineq", ineq}, {"n", n}, {"R", R}, {"c", cc},
                    {"V", potential_to_json(V.spec())}, {"W", potential_to_json(W.spec())}}},
                  {"result", res}};
    out.violation = !e.consistent;
    return out;
  }
  CaseParams p = default_case(ineq);
  p.n = int_at(c, "n", p.n);
  p.m = num_at(c, "m", p.m);
  p.a = num_at(c, "a", p.a);
  p.alpha = num_at(c, "alpha", p.alpha);
  p.lambda = num_at(c, "lambda", p.lambda);
  p.k = int_at(c, "k", p.k);
  p.R = num_at(c, "R", p.R);
  if (c.contains("V")) p.V = potential_from_json(c["V"]);
  if (c.contains("W")) p.W = potential_from_json(c["W"]);
  if (c.contains("W2")) p.W2 = potential_from_json(c["W2"]);
  const PreparedCase pc = prepare_case(p);
  const auto reports = verify_suite(pc, suite_at(c, p.R), threads_at(c));
  json reps = json::array();
  int in_hyp = 0, violations = 0, outside_negative = 0, not_evaluated = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    reps.push_back(report_json(r));
    if (!std::isfinite(r.deficit)) {
      ++not_evaluated;
      continue;
    }
    const bool ok = r.holds();
    if (r.hypotheses_ok) {
      ++in_hyp;
      if (!ok) ++violations;
      const double margin = r.deficit / std::max(std::abs(r.lhs), 1e-300);
      worst = std::min(worst, margin);
    } else if (!ok) {
      ++outside_negative;
    }
  }
  json constants = json::object();
  for (const auto& [k, v] : pc.constants) constants[k] = num(v);
  json input = {{"ineq", ineq}, {"n", p.n}, {"R", p.R}};
  if (pc.V.R_max() > 0.0 && (ineq == "hardy" || ineq == "hr" || ineq == "hr-radial"))
    input["V"] = potential_to_json(pc.V.spec());
  input["W"] = potential_to_json(pc.W.spec());
  if (ineq == "two-potential") input["W2"] = potential_to_json(pc.W2.spec());
  if (ineq == "gm-hr" || ineq == "weighted-rellich" || ineq == "hr") input["m"] = p.m;
  if (ineq == "hardy") input["a"] = p.a;
  if (ineq == "freq-in") input["alpha"] = p.alpha;
  out.output = {{"input", input},
                {"result",
                 {{"constants", constants},
                  {"reports", reps},
                  {"summary",
                   {{"evaluated", reports.size()},
                    {"within_hypotheses", in_hyp},
                    {"violations", violations},
                    {"outside_hypotheses_negative", outside_negative},
                    {"not_evaluated", not_evaluated},
                    {"worst_relative_deficit", in_hyp ? num(worst) : json(nullptr)}}}}}};
  out.violation = violations > 0;
  return out;
}

json cmd_mu(const json& c) {
  const int n = int_at(c, "n", 4);
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  const MuResult m = mu_for_dimension(n);
  return {{"input", {{"n", n}}},
          {"result", {{"mu", num(m.mu)}, {"residual", num(m.residual)}, {"z0", num(first_zero_j0())}}}};
}

}  // namespace

std::vector<std::string> command_names() {
  return {"shoot", "weight", "theta", "sweep", "rayleigh", "constants", "verify", "mu"};
}

CommandResult run_command(const std::string& command, const json& config) {
  validate(command, config);
  CommandResult r;
  if (command == "shoot") r.output = cmd_shoot(config);
  else if (command == "weight") r.output = cmd_weight(config);
  else if (command == "theta") r.output = cmd_theta(config);
  else if (command == "sweep") r.output = cmd_sweep(config);
  else if (command == "rayleigh") r.output = cmd_rayleigh(config);
  else if (command == "constants") r.output = cmd_constants(config);
  else if (command == "verify") r = cmd_verify(config);
  else if (command == "mu") r.output = cmd_mu(config);
  json full = {{"schema", kSchema}, {"command", command}};
  full.update(r.output);
  r.output = std::move(full);
  return r;
}

}  // namespace hrkit
