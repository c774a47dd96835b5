#include "mgvar/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "mgvar/errors.hpp"

namespace mgvar {

namespace {

void expect_schema(const json& j, const char* schema) {
  if (!j.is_object() || !j.contains("schema") || j.at("schema") != schema) {
    throw ParameterError(std::string("expected a '") + schema + "' document");
  }
  if (!j.contains("version") || j.at("version") != kSchemaVersion) {
    throw ParameterError(std::string("unsupported '") + schema + "' version");
  }
}

template <class Fn>
auto guarded(const char* what, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

std::string schema_of(const json& j) {
  if (!j.is_object() || !j.contains("schema") || !j.at("schema").is_string()) return "";
  return j.at("schema").get<std::string>();
}

json filtration_to_json(const Filtration& f) {
  const auto mu = f.cell_measure();
  return {{"schema", "mgvar.filtration"},
          {"version", kSchemaVersion},
          {"depth", f.depth()},
          {"dyadic", f.dyadic_layout()},
          {"cell_measure", std::vector<double>(mu.begin(), mu.end())},
          {"levels", f.levels()}};
}

Filtration filtration_from_json(const json& j) {
  expect_schema(j, "mgvar.filtration");
  return guarded("filtration", [&] {
    const int depth = j.at("depth").get<int>();
    if (j.value("dyadic", false)) {
      auto f = Filtration::dyadic(depth);
      if (j.contains("levels") && j.at("levels").get<LevelTable>() != f.levels()) {
        throw ParameterError("levels do not match the dyadic layout");
      }
      return f;
    }
    auto levels = j.at("levels").get<LevelTable>();
    if (levels.size() != static_cast<std::size_t>(depth) + 1) throw ParameterError("depth does not match levels");
    return Filtration::from_levels(j.at("cell_measure").get<std::vector<double>>(), levels);
  });
}

json martingale_to_json(const Martingale& f, const std::string& filtration_ref, const json& manifest) {
  return {{"schema", "mgvar.martingale"},
          {"version", kSchemaVersion},
          {"filtration_ref", filtration_ref},
          {"filtration", filtration_to_json(f.filtration())},
          {"values", f.values()},
          {"manifest", manifest}};
}

Martingale martingale_from_json(const json& j) {
  expect_schema(j, "mgvar.martingale");
  return guarded("martingale", [&] {
    auto filt = std::make_shared<const Filtration>(filtration_from_json(j.at("filtration")));
    return Martingale(filt, j.at("values").get<std::vector<std::vector<double>>>());
  });
}

json weight_to_json(const DyadicWeight& w, const json& manifest) {
  const auto d = w.density();
  return {{"schema", "mgvar.weight"},
          {"version", kSchemaVersion},
          {"depth", w.depth()},
          {"density", std::vector<double>(d.begin(), d.end())},
          {"manifest", manifest}};
}

DyadicWeight weight_from_json(const json& j) {
  expect_schema(j, "mgvar.weight");
  return guarded("weight", [&] {
    return DyadicWeight::from_density(j.at("depth").get<int>(), j.at("density").get<std::vector<double>>());
  });
}

json path_to_json(const std::vector<double>& path) {
  return {{"schema", "mgvar.path"}, {"version", kSchemaVersion}, {"values", path}};
}

std::vector<double> path_from_json(const json& j) {
  expect_schema(j, "mgvar.path");
  return guarded("path", [&] {
    auto v = j.at("values").get<std::vector<double>>();
    if (v.empty()) throw ParameterError("a path needs at least one value");
    return v;
  });
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParameterError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void write_fields_csv(std::ostream& os, const std::vector<std::string>& names,
                      const std::vector<PointwiseField>& fields) {
  os << "cell";
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  const std::size_t cells = fields.empty() ? 0 : fields.front().size();
  os << std::setprecision(17);
  for (std::size_t c = 0; c < cells; ++c) {
    os << c;
    for (const auto& f : fields) os << ',' << f[c];
    os << '\n';
  }
}

}  // namespace mgvar
