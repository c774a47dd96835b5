#include "mgvar/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mgvar {

double ratio_constant(double lhs, double rhs) {
  if (lhs <= 0.0) return 0.0;
  if (rhs <= 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

json to_json(const VerificationReport& report) {
  json params = json::object();
  for (const auto& [key, value] : report.params) params[key] = number_to_json(value);
  json out = {
      {"name", report.name},
      {"lhs", number_to_json(report.lhs)},
      {"rhs", number_to_json(report.rhs)},
      {"empirical_constant", number_to_json(report.empirical_constant)},
      {"params", params},
      {"pass", report.pass},
      {"manifest", report.manifest},
      {"version", kVersion},
  };
  if (report.witness) out["witness"] = *report.witness;
  return out;
}

VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  r.name = j.at("name").get<std::string>();
  r.lhs = number_from_json(j.at("lhs"));
  r.rhs = number_from_json(j.at("rhs"));
  r.empirical_constant = number_from_json(j.at("empirical_constant"));
  for (const auto& [key, value] : j.at("params").items()) r.params[key] = number_from_json(value);
  r.pass = j.at("pass").get<bool>();
  if (j.contains("manifest")) r.manifest = j.at("manifest");
  if (j.contains("witness")) r.witness = j.at("witness");
  return r;
}

double relative_gap(double a, double b) {
  if (a == b) return 0.0;
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::infinity();
  if (std::isinf(a) || std::isinf(b)) return std::numeric_limits<double>::infinity();
  return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

}  // namespace mgvar
