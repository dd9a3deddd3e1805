#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hrkit/inequality.hpp"
#include "hrkit/potentials.hpp"

namespace hrkit {

inline constexpr const char* kSchema = "hrkit.v1";

// Potentials from short strings ("zero", "one", "const:2", "power:0.5", "log:2",
// "log:1,10", "x:3", "scaled:4:power:1") or JSON objects {"kind": ..., ...}.
PotentialSpec parse_potential(const std::string& text);
PotentialSpec potential_from_json(const nlohmann::json& j);
nlohmann::json potential_to_json(const PotentialSpec& spec);

// Test functions from JSON: [{"name": .., "modes": [{"k": 1, "poly": [c0, c1, ...]}]}]
// with f_k(r) = sum_j c_j (r/R)^j.
std::vector<TestFunction> suite_from_json(const nlohmann::json& j, double R);

// Finite doubles as numbers, the rest as the strings "inf", "-inf", "nan".
nlohmann::json num(double x);

}  // namespace hrkit
