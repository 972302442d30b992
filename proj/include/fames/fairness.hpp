#ifndef FAMES_FAIRNESS_HPP
#define FAMES_FAIRNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "fames/engine.hpp"

namespace fames {

// Inputs shared by the fairness checkers.  goal may have the single free
// variable x for the parametric notions (DP, strong DP, FTU-DP, EO); it must
// be closed for FTU, CF and equitable FTU.
struct FairnessQuery {
  std::vector<ActionInstance> plan;               // delta
  Formula goal;                                   // phi, defaults to true
  std::string protected_pred;                     // theta, unary
  std::optional<std::string> criterion;           // eta for EO
  std::optional<std::string> positive_property;   // eta for equity notions
  std::optional<std::string> individual;          // n for ftu-ind and cf
  std::string eo_reading = "conditioned";         // or "literal"
};

struct FairnessVerdict {
  std::string notion;
  bool holds = false;
  std::optional<std::string> failed_clause;  // present iff !holds
  std::optional<Diagnostics> diagnostics;
  std::optional<std::string> derived_theory;  // set when forgetting was applied
  std::optional<std::string> reading;         // set by check_eo
  std::vector<std::string> warnings;
};

// Clause labels used in failed_clause: "knowledge-of-goal", "ignorance-prefix",
// "parity", "knows-whether", "attribute-undetermined", "counterfactual-goal",
// "equity", "integrity-violation".

FairnessVerdict check_ftu(const Engine& eng, const FairnessQuery& q);
FairnessVerdict check_ftu_individual(const Engine& eng, const FairnessQuery& q);
FairnessVerdict check_dp(const Engine& eng, const FairnessQuery& q);
FairnessVerdict check_strong_dp(const Engine& eng, const FairnessQuery& q);
FairnessVerdict check_ftu_dp(const Engine& eng, const FairnessQuery& q);
FairnessVerdict check_eo(const Engine& eng, const FairnessQuery& q);
FairnessVerdict check_cf(const Engine& eng, const FairnessQuery& q);
FairnessVerdict check_strong_equity(const Engine& eng, const FairnessQuery& q);
FairnessVerdict check_weak_equity(const Engine& eng, const FairnessQuery& q);
FairnessVerdict check_equitable_ftu(const Engine& eng, const FairnessQuery& q);

// Declared unary predicates eta distinct from theta with
// entails(forall x (eta(x) -> theta(x))), in declaration order.
std::vector<PredicateDecl> proxy_set(const Engine& eng, const std::string& protected_pred);

const std::vector<std::string>& fairness_notions();
FairnessVerdict run_check(const Engine& eng, const std::string& notion,
                          const FairnessQuery& q);

}  // namespace fames

#endif
