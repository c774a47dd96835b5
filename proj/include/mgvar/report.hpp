#pragma once

#include <map>
#include <optional>
#include <string>

#include "json.hpp"

namespace mgvar {

inline constexpr const char* kVersion = "mgvar 0.1.0";

using json = nlohmann::json;

struct VerificationReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  // Smallest C with lhs <= C * rhs (+inf when rhs == 0 < lhs).  What exactly
  // lhs and rhs are is specific to each verifier and documented there.
  double empirical_constant = 0.0;
  std::map<std::string, double> params;
  bool pass = true;
  std::optional<json> witness;
  json manifest = json::object();
};

/// lhs / rhs with 0/0 = 0 and x/0 = +inf.
double ratio_constant(double lhs, double rhs);

/// Non-finite doubles are written as the strings "inf", "-inf", "nan".
json number_to_json(double x);
double number_from_json(const json& j);

json to_json(const VerificationReport& report);
VerificationReport report_from_json(const json& j);

/// |a - b| / max(|a|, |b|); equal values (including infinities) give 0.
double relative_gap(double a, double b);

}  // namespace mgvar
