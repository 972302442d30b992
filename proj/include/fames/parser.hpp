#ifndef FAMES_PARSER_HPP
#define FAMES_PARSER_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fames/theory.hpp"

namespace fames {

struct ParseDiagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  int line = 1;
  int col = 1;
  std::string message;

  std::string str() const;  // "line:col: error: message"
};

std::string format_diagnostics(const std::vector<ParseDiagnostic>& ds,
                               const std::string& origin);

struct TheoryParseResult {
  std::optional<Theory> theory;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return theory.has_value(); }
};

// Parses the theory DSL: one declaration per line, '#' comments, CRLF
// tolerated.  Declarations may appear in any order; symbol resolution is done
// in a second pass.
TheoryParseResult parse_theory(const std::string& text);
TheoryParseResult parse_theory_file(const std::string& path);

struct FormulaParseResult {
  std::optional<Formula> formula;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return formula.has_value(); }
};

// Parses a query formula against a theory's symbols.  Variables must be bound
// by a quantifier unless listed in allow_free (used for goals with a free x).
FormulaParseResult parse_formula(const std::string& text, const Theory& th,
                                 const std::set<std::string>& allow_free = {});

struct PlanParseResult {
  std::optional<std::vector<ActionInstance>> plan;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return plan.has_value(); }
};

// "approve(n); isMale(nprime)" -> ground action sequence.  Empty input is the
// empty plan.
PlanParseResult parse_plan(const std::string& text, const Theory& th);

struct AtomListParseResult {
  std::optional<std::vector<GroundAtom>> atoms;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return atoms.has_value(); }
};

// "Male(n), Eligible(nprime)" -> ground atoms of declared predicates.
AtomListParseResult parse_atom_list(const std::string& text, const Theory& th);

}  // namespace fames

#endif
