#include "hrkit/config.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <string>

#include "hrkit/error.hpp"

namespace hrkit {

using nlohmann::json;

namespace {

double to_number(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v))
    fail(ErrorCode::InvalidArgument, "bad number '" + s + "' in " + what);
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_number(s, what);
  if (v != std::floor(v)) fail(ErrorCode::InvalidArgument, "expected an integer in " + what);
  return static_cast<int>(v);
}

PotentialKind kind_from_name(const std::string& k) {
  for (auto kind : {PotentialKind::Zero, PotentialKind::Constant, PotentialKind::Power,
                    PotentialKind::LogChain, PotentialKind::XChain, PotentialKind::Scaled,
                    PotentialKind::Sum})
    if (k == to_string(kind)) return kind;
  fail(ErrorCode::InvalidArgument, "unknown potential kind '" + k + "'");
}

double get_num(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) fail(ErrorCode::InvalidArgument, std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace

PotentialSpec parse_potential(const std::string& text) {
  std::string t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
  if (!t.empty() && t.front() == '{') {
    json j;
    try {
      j = json::parse(t);
    } catch (const json::exception& e) {
      fail(ErrorCode::InvalidArgument, std::string("potential JSON: ") + e.what());
    }
    return potential_from_json(j);
  }
  if (t == "zero" || t == "0") return PotentialSpec::zero();
  if (t == "one" || t == "1") return PotentialSpec::constant(1.0);
  const auto colon = t.find(':');
  if (colon == std::string::npos) fail(ErrorCode::InvalidArgument, "unknown potential '" + t + "'");
  const std::string head = t.substr(0, colon), rest = t.substr(colon + 1);
  if (head == "const") return PotentialSpec::constant(to_number(rest, t));
  if (head == "power") return PotentialSpec::power(to_number(rest, t));
  if (head == "log") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos) return PotentialSpec::log_chain(to_int(rest, t), 0.0);
    return PotentialSpec::log_chain(to_int(rest.substr(0, comma), t),
                                    to_number(rest.substr(comma + 1), t));
  }
  if (head == "x") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos) return PotentialSpec::x_chain(to_int(rest, t));
    return PotentialSpec::x_chain(to_int(rest.substr(0, comma), t),
                                  to_number(rest.substr(comma + 1), t));
  }
  if (head == "scaled") {
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos) fail(ErrorCode::InvalidArgument, "scaled needs 'scaled:c:inner'");
    return PotentialSpec::scaled(to_number(rest.substr(0, c2), t), parse_potential(rest.substr(c2 + 1)));
  }
  fail(ErrorCode::InvalidArgument, "unknown potential '" + t + "'");
}

PotentialSpec potential_from_json(const json& j) {
  if (j.is_string()) return parse_potential(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    fail(ErrorCode::InvalidArgument, "potential must be a string or an object with a 'kind'");
  const PotentialKind kind = kind_from_name(j["kind"].get<std::string>());
  static const std::map<PotentialKind, std::set<std::string>> allowed = {
      {PotentialKind::Zero, {}},
      {PotentialKind::Constant, {"value"}},
      {PotentialKind::Power, {"m"}},
      {PotentialKind::LogChain, {"k", "rho"}},
      {PotentialKind::XChain, {"k", "R"}},
      {PotentialKind::Scaled, {"value", "inner"}},
      {PotentialKind::Sum, {"terms"}},
  };
  if (const auto it = allowed.find(kind); it != allowed.end())
    for (const auto& [key, v] : j.items())
      if (key != "kind" && !it->second.count(key))
        fail(ErrorCode::InvalidArgument, "unknown key '" + key + "' for potential kind " + to_string(kind));
  switch (kind) {
    case PotentialKind::Zero:
      return PotentialSpec::zero();
    case PotentialKind::Constant:
      return PotentialSpec::constant(get_num(j, "value", 1.0));
    case PotentialKind::Power:
      return PotentialSpec::power(get_num(j, "m", 0.0));
    case PotentialKind::LogChain:
      return PotentialSpec::log_chain(static_cast<int>(get_num(j, "k", 1)), get_num(j, "rho", 0.0));
    case PotentialKind::XChain:
      return PotentialSpec::x_chain(static_cast<int>(get_num(j, "k", 1)), get_num(j, "R", 0.0));
    case PotentialKind::Scaled:
      if (!j.contains("inner")) fail(ErrorCode::InvalidArgument, "scaled potential needs 'inner'");
      return PotentialSpec::scaled(get_num(j, "value", 1.0), potential_from_json(j["inner"]));
    case PotentialKind::Sum: {
      if (!j.contains("terms") || !j["terms"].is_array())
        fail(ErrorCode::InvalidArgument, "sum potential needs a 'terms' array");
      std::vector<PotentialSpec> terms;
      for (const auto& t : j["terms"]) terms.push_back(potential_from_json(t));
      return PotentialSpec::sum(std::move(terms));
    }
    default:
      break;
  }
  fail(ErrorCode::InvalidArgument, "potential kind not constructible from config");
}

json potential_to_json(const PotentialSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  switch (s.kind) {
    case PotentialKind::Constant: j["value"] = s.value; break;
    case PotentialKind::Power: j["m"] = s.m; break;
    case PotentialKind::LogChain:
      j["k"] = s.k;
      j["rho"] = s.rho;
      break;
    case PotentialKind::XChain:
      j["k"] = s.k;
      j["R"] = s.R;
      break;
    case PotentialKind::Scaled:
      j["value"] = s.value;
      j["inner"] = potential_to_json(s.terms.at(0));
      break;
    case PotentialKind::Sum:
      j["terms"] = json::array();
      for (const auto& t : s.terms) j["terms"].push_back(potential_to_json(t));
      break;
    case PotentialKind::Custom:
      j["exponent"] = s.custom_exponent;
      j["coefficient"] = s.custom_coefficient;
      break;
    case PotentialKind::Zero:
      break;
  }
  return j;
}

std::vector<TestFunction> suite_from_json(const json& j, double R) {
  const json& arr = j.is_object() && j.contains("functions") ? j["functions"] : j;
  if (!arr.is_array()) fail(ErrorCode::InvalidArgument, "suite must be an array of functions");
  std::vector<TestFunction> out;
  for (const auto& f : arr) {
    TestFunction u;
    u.R = R;
    u.name = f.value("name", "function#" + std::to_string(out.size()));
    if (!f.contains("modes") || !f["modes"].is_array() || f["modes"].empty())
      fail(ErrorCode::InvalidArgument, "test function '" + u.name + "' needs modes");
    for (const auto& m : f["modes"]) {
      const int k = m.value("k", 0);
      if (k < 0) fail(ErrorCode::InvalidArgument, "mode index k must be >= 0");
      if (!m.contains("poly") || !m["poly"].is_array())
        fail(ErrorCode::InvalidArgument, "mode needs a 'poly' coefficient array");
      const std::vector<double> c = m["poly"].get<std::vector<double>>();
      for (int i = 0; i < std::min<int>(k, c.size()); ++i)
        if (c[i] != 0.0)
          fail(ErrorCode::InvalidArgument,
               "mode k=" + std::to_string(k) + " of '" + u.name + "' must be O(r^k) at 0");
      u.modes.push_back({k, [c, R](double r) {
                           const double t = r / R;
                           double v = 0.0, d1 = 0.0, d2 = 0.0;
                           for (size_t i = c.size(); i-- > 0;) {
                             d2 = d2 * t + 2.0 * d1;
                             d1 = d1 * t + v;
                             v = v * t + c[i];
                           }
                           return Jet{v, d1 / R, d2 / (R * R)};
                         }});
    }
    out.push_back(std::move(u));
  }
  return out;
}

json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace hrkit
