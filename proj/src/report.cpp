#include "fames/report.hpp"

namespace fames {

using nlohmann::ordered_json;

ordered_json verdict_to_json(const FairnessVerdict& v) {
  ordered_json j;
  j["notion"] = v.notion;
  j["holds"] = v.holds;
  j["failed_clause"] = v.failed_clause ? ordered_json(*v.failed_clause) : nullptr;
  if (v.diagnostics && v.diagnostics->counterexample_world) {
    ordered_json w = ordered_json::object();
    for (const auto& [atom, val] : v.diagnostics->counterexample_world->to_pairs())
      w[atom] = val;
    j["counterexample_world"] = std::move(w);
  } else {
    j["counterexample_world"] = nullptr;
  }
  ordered_json prefix = ordered_json::array();
  if (v.diagnostics)
    for (const auto& a : v.diagnostics->failing_prefix) prefix.push_back(a.str());
  j["failing_prefix"] = std::move(prefix);
  j["reading"] = v.reading ? ordered_json(*v.reading) : nullptr;
  return j;
}

ordered_json make_report(const std::string& domain, const std::string& command,
                         const std::vector<FairnessVerdict>& verdicts,
                         const std::vector<std::string>& warnings, double timing_ms,
                         ordered_json result) {
  ordered_json j;
  j["version"] = kToolVersion;
  j["domain"] = domain;
  j["command"] = command;
  ordered_json vs = ordered_json::array();
  for (const auto& v : verdicts) vs.push_back(verdict_to_json(v));
  j["verdicts"] = std::move(vs);
  j["result"] = std::move(result);
  j["warnings"] = warnings;
  j["timing_ms"] = timing_ms;
  return j;
}

std::string verdict_to_text(const FairnessVerdict& v) {
  std::string out;
  out += "notion: " + v.notion + "\n";
  out += std::string("holds: ") + (v.holds ? "yes" : "no") + "\n";
  if (v.failed_clause) out += "failed clause: " + *v.failed_clause + "\n";
  if (v.reading) out += "reading: " + *v.reading + "\n";
  if (v.derived_theory) out += "derived theory: " + *v.derived_theory + "\n";
  if (v.diagnostics) {
    const Diagnostics& d = *v.diagnostics;
    out += "failing prefix: " + trace_str(d.failing_prefix) + "\n";
    if (d.counterexample_world)
      out += "counterexample world: " + d.counterexample_world->str() + "\n";
    for (const auto& inst : d.instantiations) out += "instantiation: " + inst + "\n";
    if (!d.subformula_path.empty()) {
      out += "subformula path:\n";
      for (const auto& step : d.subformula_path) out += "  " + step + "\n";
    }
  }
  return out;
}

}  // namespace fames
