#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "eqmine/search.hpp"
#include "eqmine/validate.hpp"

namespace eqmine {

using json = nlohmann::json;

// Stable report layout: top-level keys `config`, `columns`, `levels`,
// `maximal`, `anomalies`, `audit`, `runtime_ms`. Pairs are serialized as
// column names, e.g. {"left": "A", "right": "C"}.
json report_to_json(const DiscoveryReport& report);
DiscoveryReport report_from_json(const json& doc);

json outcome_to_json(const TestOutcome& outcome);
json validation_to_json(const ValidateSummary& summary);

// Write via temp file + rename so failures never leave partial reports.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace eqmine
