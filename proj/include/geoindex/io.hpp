#pragma once

#include <string>

#include <json.hpp>

#include "geoindex/anosov.hpp"

namespace geoindex {

using Json = nlohmann::ordered_json;

// Rationals travel as "p/q" strings, certified reals as their to_string()
// form ("p/q", "d.ddd~k" or "a+b*sqrt(c)"). Parsers reject unknown fields and
// report the offending path in Error(Schema).

Json block_to_json(const BasicBlock& block);
BasicBlock block_from_json(const Json& j, const std::string& path = "block", const PrecisionBudget& budget = {});

Json germ_to_json(const IndexGerm& germ);
IndexGerm germ_from_json(const Json& j, const std::string& path = "curve", const PrecisionBudget& budget = {});

Json system_to_json(const GeodesicSystem& system);
GeodesicSystem system_from_json(const Json& j);
GeodesicSystem parse_system_text(const std::string& text);
GeodesicSystem parse_system(const std::string& path);

Json certificate_to_json(const JumpCertificate& cert);
JumpCertificate certificate_from_json(const Json& j);

Json search_budget_to_json(const SearchBudget& budget);
SearchBudget search_budget_from_json(const Json& j);

/// {"system", "budget", "m_bar", "certificate", "scaled_certificate",
///  "stages": [{"name", "verdict", "witness"}], "final"}.
Json report_to_json(const ImpossibilityReport& report);
ImpossibilityReport report_from_json(const Json& j);

Json verification_to_json(const VerificationReport& report);

std::string report_table(const ImpossibilityReport& report);
std::string certificate_table(const JumpCertificate& cert);
std::string verification_table(const VerificationReport& report);

/// Parses JSON text, turning syntax errors into Error(Schema) with the byte
/// offset and line.
Json parse_json_text(const std::string& text, const std::string& what);
std::string read_file(const std::string& path);
/// Writes text to path; throws Error(Io).
void write_file(const std::string& path, const std::string& text);

}  // namespace geoindex
