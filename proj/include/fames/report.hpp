#ifndef FAMES_REPORT_HPP
#define FAMES_REPORT_HPP

#include <json.hpp>

#include <string>
#include <vector>

#include "fames/fairness.hpp"

namespace fames {

inline constexpr const char* kToolVersion = "0.1.0";

// One verdict object of the report schema: {notion, holds, failed_clause,
// counterexample_world, failing_prefix, reading}.  Absent optionals are null
// (failing_prefix: empty array) so the layout is fixed.
nlohmann::ordered_json verdict_to_json(const FairnessVerdict& v);

// Full report envelope: {version, domain, command, verdicts, result,
// warnings, timing_ms}.  result carries subcommand-specific payloads (null
// for check).
nlohmann::ordered_json make_report(const std::string& domain, const std::string& command,
                                   const std::vector<FairnessVerdict>& verdicts,
                                   const std::vector<std::string>& warnings,
                                   double timing_ms,
                                   nlohmann::ordered_json result = nullptr);

std::string verdict_to_text(const FairnessVerdict& v);

}  // namespace fames

#endif
