#include "fames/plan_search.hpp"

#include <algorithm>

namespace fames {

std::vector<PlanResult> find_plans(const Engine& eng, const SearchConfig& cfg) {
  if (cfg.horizon < 0)
    throw MalformedFormulaError("search horizon must be >= 0");
  if (cfg.max_results < 1)
    throw MalformedFormulaError("max_results must be >= 1");
  // fail fast on an unknown notion before enumerating anything
  if (std::find(fairness_notions().begin(), fairness_notions().end(), cfg.notion) ==
      fairness_notions().end())
    throw MalformedFormulaError("unknown fairness notion '" + cfg.notion + "'");

  std::vector<ActionInstance> alphabet;
  for (const auto& a : eng.ground_actions()) {
    if (cfg.action_filter.empty() ||
        std::find(cfg.action_filter.begin(), cfg.action_filter.end(), a.action) !=
            cfg.action_filter.end())
      alphabet.push_back(a);
  }
  for (const auto& name : cfg.action_filter)
    if (!eng.theory().find_action(name))
      throw MalformedFormulaError("action '" + name + "' is not declared");
  if (alphabet.empty())
    throw MalformedFormulaError("the ground action set is empty");

  long long total = 0, layer = 1;
  for (int k = 0; k <= cfg.horizon; ++k) {
    total += layer;
    if (total > cfg.node_budget)
      throw ResourceError("plan search at horizon " + std::to_string(cfg.horizon) +
                          " would enumerate more than " +
                          std::to_string(cfg.node_budget) + " sequences");
    layer *= static_cast<long long>(alphabet.size());
    if (layer > cfg.node_budget + 1) layer = cfg.node_budget + 1;
  }

  std::vector<PlanResult> results;
  FairnessQuery q = cfg.query;
  for (int len = 0; len <= cfg.horizon; ++len) {
    std::vector<int> odo(len, 0);
    while (true) {
      q.plan.clear();
      for (int i : odo) q.plan.push_back(alphabet[i]);
      FairnessVerdict v = run_check(eng, cfg.notion, q);
      if (v.holds) {
        results.emplace_back(q.plan, std::move(v));
        if (static_cast<int>(results.size()) >= cfg.max_results) return results;
      }
      // next sequence of this length, rightmost digit fastest
      int pos = len - 1;
      while (pos >= 0 && odo[pos] == static_cast<int>(alphabet.size()) - 1)
        odo[pos--] = 0;
      if (pos < 0) break;
      ++odo[pos];
    }
  }
  return results;
}

std::vector<PlanResult> find_plans(const Theory& th, const SearchConfig& cfg) {
  Engine eng(th);
  return find_plans(eng, cfg);
}

}  // namespace fames
