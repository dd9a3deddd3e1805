// hrkit command-line front end; talks to the library only through hrkit_c.h.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hrkit_c.h"

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kViolation = 1, kBadConfig = 2, kNumeric = 3 };

enum class Kind { Number, String, Bool, List };

struct Param {
  const char* key;
  Kind kind;
  const char* help;
};

const std::map<std::string, std::vector<Param>>& params() {
  static const std::map<std::string, std::vector<Param>> p = {
      {"shoot",
       {{"n", Kind::Number, "dimension"},
        {"V", Kind::String, "potential V (e.g. one, power:0.5, log:1, JSON)"},
        {"W", Kind::String, "potential W"},
        {"c", Kind::Number, "multiplier of W"},
        {"R", Kind::Number, "ball radius"},
        {"dim", Kind::String, "equation form: n or 2d"},
        {"tol", Kind::Number, "integrator tolerance"},
        {"r0_rel", Kind::Number, "start radius relative to R"},
        {"stop_at_zero", Kind::Bool, "stop at the first zero"},
        {"samples", Kind::Number, "resample the profile on this many log-spaced points"}}},
      {"weight",
       {{"n", Kind::Number, "dimension"},
        {"V", Kind::String, "potential V"},
        {"W", Kind::String, "potential W"},
        {"R", Kind::Number, "ball radius"},
        {"dim", Kind::String, "equation form: n or 2d"},
        {"rel_tol", Kind::Number, "relative bracket width"}}},
      {"theta",
       {{"n", Kind::Number, "dimension"},
        {"V", Kind::String, "potential V"},
        {"W", Kind::String, "potential W"},
        {"c", Kind::Number, "multiplier of W"},
        {"R", Kind::Number, "ball radius"},
        {"dim", Kind::String, "equation form: n or 2d"}}},
      {"sweep",
       {{"n", Kind::Number, "dimension"},
        {"V", Kind::String, "potential V"},
        {"W", Kind::String, "potential W"},
        {"R", Kind::Number, "ball radius"},
        {"dim", Kind::String, "equation form: n or 2d"},
        {"c_min", Kind::Number, "first multiplier"},
        {"c_max", Kind::Number, "last multiplier"},
        {"count", Kind::Number, "number of multipliers"},
        {"c_values", Kind::List, "explicit comma-separated multipliers"},
        {"geometric", Kind::Bool, "geometric spacing"}}},
      {"rayleigh",
       {{"n", Kind::Number, "dimension"},
        {"m", Kind::Number, "weight exponent |x|^{-2m}"},
        {"quotient", Kind::String, "grad or delta"},
        {"bc", Kind::String, "H2, H2capH10 or H20"},
        {"N", Kind::Number, "grid nodes"},
        {"s_min", Kind::Number, "log of the inner radius"},
        {"k_max", Kind::Number, "highest spherical-harmonic degree"},
        {"refine", Kind::Bool, "also solve coarser grids for error estimates"},
        {"R", Kind::Number, "ball radius"},
        {"profile", Kind::Bool, "export the minimizing profile"}}},
      {"constants",
       {{"n", Kind::Number, "dimension"},
        {"m", Kind::Number, "weight exponent"},
        {"N", Kind::Number, "grid nodes"},
        {"k_max", Kind::Number, "highest spherical-harmonic degree"}}},
      {"verify",
       {{"ineq", Kind::String, "hardy, hr-radial, hr, gm-hr, hr-cn, rellich, weighted-rellich, log-rellich, "
                               "two-potential, hr-gradient, freq-in or equivalence"},
        {"n", Kind::Number, "dimension"},
        {"m", Kind::Number, "weight exponent"},
        {"a", Kind::Number, "power in the weighted Hardy case"},
        {"alpha", Kind::Number, "exponent of the one-dimensional inequality"},
        {"lambda", Kind::Number, "decay exponent fallback"},
        {"k", Kind::Number, "log-chain depth"},
        {"R", Kind::Number, "ball radius"},
        {"V", Kind::String, "potential V"},
        {"W", Kind::String, "potential W"},
        {"W2", Kind::String, "second potential"},
        {"suite", Kind::String, "builtin, random, or a JSON file of test functions"},
        {"count", Kind::Number, "size of the random suite"},
        {"c", Kind::Number, "multiplier (equivalence)"}}},
      {"mu", {{"n", Kind::Number, "dimension"}}},
  };
  return p;
}

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> a = {
      {"dim", "ode-dim"}, {"k_max", "kmax"}, {"r0_rel", "r0-rel"}, {"rel_tol", "rel-tol"},
      {"stop_at_zero", "stop-at-zero"}, {"c_min", "c-min"}, {"c_max", "c-max"},
      {"c_values", "c-values"}, {"s_min", "s-min"}};
  return a;
}

const char* type_name(Kind k) {
  switch (k) {
    case Kind::Number: return "NUMBER";
    case Kind::Bool: return "BOOL";
    case Kind::List: return "LIST";
    default: return "TEXT";
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return fmt(v.get<double>());
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return cell(json(v.dump()));
}

std::string to_csv(const std::string& cmd, const json& out) {
  std::ostringstream os;
  const json& r = out.at("result");
  auto table = [&](const std::vector<std::string>& cols, const json& rows) {
    for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << (row.contains(cols[i]) ? cell(row[cols[i]]) : "");
      os << "\n";
    }
  };
  auto columns = [&](const json& p, const std::vector<std::string>& cols) {
    json rows = json::array();
    for (size_t i = 0; i < p.at(cols[0]).size(); ++i) {
      json row;
      for (const auto& c : cols) row[c] = p[c][i];
      rows.push_back(row);
    }
    table(cols, rows);
  };
  if (cmd == "shoot") {
    columns(r.at("profile"), {"r", "y", "yp", "ypp"});
  } else if (cmd == "sweep") {
    table({"c", "positive", "origin_oscillation", "first_zero", "theta"}, r.at("rows"));
  } else if (cmd == "rayleigh") {
    if (r.contains("profile")) columns(r["profile"], {"r", "f"});
    else table({"k", "admissible", "value"}, r.at("modes"));
  } else if (cmd == "constants") {
    table({"quantity", "n", "m", "bc", "computed", "extrapolated", "closed_form", "rel_diff"},
          r.at("rows"));
  } else if (cmd == "verify") {
    json rows = json::array();
    for (const auto& rep : r.at("reports")) {
      json row = rep;
      double rhs = 0.0;
      for (const auto& t : rep.at("rhs"))
        if (t.at("value").is_number()) rhs += t["value"].get<double>();
      row["rhs_total"] = rhs;
      rows.push_back(row);
    }
    table({"inequality", "function", "lhs", "rhs_total", "deficit", "quad_error",
           "hypotheses_ok", "holds", "note"},
          rows);
  } else {
    json rows = json::array();
    for (const auto& [k, v] : r.items())
      if (!v.is_structured()) rows.push_back({{"key", k}, {"value", v}});
    table({"key", "value"}, rows);
  }
  return os.str();
}

void trace(const std::string& cmd, const json& out) {
  const json& r = out.at("result");
  if (cmd == "weight" && r.contains("iterations"))
    std::cerr << "bisection: " << r["iterations"] << " shots, bracket [" << cell(r["c_lo"]) << ", "
              << cell(r["c_hi"]) << "]\n";
  if (r.contains("refinement"))
    for (const auto& row : r["refinement"])
      std::cerr << "refinement N=" << row["N"] << " s_min=" << cell(row["s_min"])
                << " value=" << cell(row["value"]) << "\n";
  if (cmd == "constants")
    for (const auto& row : r["rows"])
      std::cerr << row["quantity"].get<std::string>() << ": computed " << cell(row["computed"])
                << ", closed form " << cell(row["closed_form"]) << "\n";
  if (r.contains("summary")) std::cerr << "summary: " << r["summary"].dump() << "\n";
  if (r.contains("verdict")) std::cerr << "verdict: " << r["verdict"].get<std::string>() << "\n";
}

json convert(const Param& p, const std::string& text) {
  switch (p.kind) {
    case Kind::String:
      if (!text.empty() && text.front() == '{') return json::parse(text);
      return text;
    case Kind::Bool:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw std::invalid_argument(std::string("--") + p.key + " expects true or false");
    case Kind::List: {
      json arr = json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) arr.push_back(std::stod(item));
      return arr;
    }
    case Kind::Number: {
      size_t pos = 0;
      const double v = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(std::string("--") + p.key + ": bad number");
      if (v == std::floor(v) && std::abs(v) < 1e15) return static_cast<long long>(v);
      return v;
    }
  }
  return nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Hardy and Hardy-Rellich inequalities via Bessel pairs"};
  app.require_subcommand(1);
  std::string config_path, out_path, format = "json";
  bool verbose = false;
  long long seed = -1;
  int threads = 0;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_path, "write output here instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--verbose,-v", verbose, "print refinement and bisection traces to stderr");
  app.add_option("--seed", seed, "seed for randomized test suites");
  app.add_option("--threads", threads, "worker threads (default: HRKIT_THREADS or all cores)");
  app.set_version_flag("--version", std::string(hrk_version()));

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [cmd, ps] : params()) {
    CLI::App* sub = app.add_subcommand(cmd, "run " + cmd);
    sub->fallthrough();
    subs[cmd] = sub;
    for (const auto& p : ps) {
      std::string flags = std::string("--") + p.key;
      if (const auto a = aliases().find(p.key); a != aliases().end()) flags += ",--" + a->second;
      sub->add_option(flags, values[cmd][p.key], p.help)->type_name(type_name(p.kind));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  std::string cmd;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) cmd = name;

  json cfg = json::object();
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot read " + config_path);
      cfg = json::parse(in);
      if (!cfg.is_object()) throw std::runtime_error("config must be a JSON object");
      if (cfg.contains("command") && cfg["command"] != cmd)
        throw std::runtime_error("config is for command " + cfg["command"].dump());
      if (cfg.contains("format") && format == "json") format = cfg["format"].get<std::string>();
      if (cfg.contains("out") && out_path.empty()) out_path = cfg["out"].get<std::string>();
      if (cfg.contains("verbose")) verbose = verbose || cfg["verbose"].get<bool>();
      cfg.erase("format");
      cfg.erase("out");
      cfg.erase("verbose");
      cfg.erase("command");
    }
    for (const auto& p : params().at(cmd)) {
      if (subs[cmd]->get_option(std::string("--") + p.key)->count() == 0) continue;
      const std::string& text = values[cmd][p.key];
      if (cmd == "verify" && std::string(p.key) == "suite" && text != "builtin" && text != "random") {
        std::ifstream in(text);
        if (!in) throw std::runtime_error("cannot read suite file " + text);
        cfg["suite"] = json::parse(in);
        continue;
      }
      cfg[p.key] = convert(p, text);
    }
    if (seed >= 0) cfg["seed"] = seed;
    if (threads > 0) cfg["threads"] = threads;
    if (format != "json" && format != "csv") throw std::runtime_error("format must be json or csv");
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kBadConfig;
  }

  char* text = nullptr;
  int violation = 0;
  const hrk_status st = hrk_run(cmd.c_str(), cfg.dump().c_str(), &text, &violation);
  if (st != HRK_OK) {
    std::cerr << cmd << " failed (" << hrk_status_name(st) << "): " << hrk_last_error() << "\n";
    return st == HRK_E_INVALID_ARGUMENT ? kBadConfig : kNumeric;
  }
  const std::string body(text);
  hrk_free_string(text);
  const json out = json::parse(body);
  if (verbose) trace(cmd, out);

  std::string payload = body + "\n";
  if (format == "csv") {
    payload = to_csv(cmd, out);
    if (cmd == "shoot") {
      json summary = out["result"];
      summary.erase("profile");
      std::cerr << summary.dump() << "\n";
    }
  }
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    std::ofstream of(out_path);
    if (!of) {
      std::cerr << "cannot write " << out_path << "\n";
      return kBadConfig;
    }
    of << payload;
  }
  return violation ? kViolation : kOk;
}
