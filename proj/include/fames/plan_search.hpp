#ifndef FAMES_PLAN_SEARCH_HPP
#define FAMES_PLAN_SEARCH_HPP

#include <string>
#include <utility>
#include <vector>

#include "fames/fairness.hpp"

namespace fames {

struct SearchConfig {
  int horizon = 2;
  std::string notion = "ftu";
  FairnessQuery query;  // plan field is ignored
  int max_results = 1;
  std::vector<std::string> action_filter;  // action names; empty = all declared
  long long node_budget = 200000;          // total candidate sequences
};

using PlanResult = std::pair<std::vector<ActionInstance>, FairnessVerdict>;

// Exhaustive breadth-first enumeration of ground-action sequences of length
// 0..horizon, in length-then-lexicographic order (lexicographic by declared
// action order).  Returns up to max_results plans whose verdict holds; an
// empty result means no plan within the horizon implements the notion.
std::vector<PlanResult> find_plans(const Engine& eng, const SearchConfig& cfg);
std::vector<PlanResult> find_plans(const Theory& th, const SearchConfig& cfg);

}  // namespace fames

#endif
