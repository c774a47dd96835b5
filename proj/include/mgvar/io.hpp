#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mgvar/filtration.hpp"
#include "mgvar/martingale.hpp"
#include "mgvar/report.hpp"
#include "mgvar/weights.hpp"

// Versioned JSON documents for the CLI.  Every reader checks the schema tag
// and version and throws ParameterError on mismatch or malformed input.

namespace mgvar {

inline constexpr int kSchemaVersion = 1;

json filtration_to_json(const Filtration& filtration);
Filtration filtration_from_json(const json& j);

/// The filtration is embedded; `filtration_ref` records where it came from.
json martingale_to_json(const Martingale& f, const std::string& filtration_ref, const json& manifest);
Martingale martingale_from_json(const json& j);

json weight_to_json(const DyadicWeight& w, const json& manifest);
DyadicWeight weight_from_json(const json& j);

json path_to_json(const std::vector<double>& path);
std::vector<double> path_from_json(const json& j);

/// Schema tag of a document ("mgvar.filtration", ...).
std::string schema_of(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// "cell,<name>,..." header and one row per cell.
void write_fields_csv(std::ostream& os, const std::vector<std::string>& names,
                      const std::vector<PointwiseField>& fields);

}  // namespace mgvar
