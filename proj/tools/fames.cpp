#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "fames/engine.hpp"
#include "fames/fairness.hpp"
#include "fames/forgetting.hpp"
#include "fames/parser.hpp"
#include "fames/plan_search.hpp"
#include "fames/report.hpp"

namespace {

using namespace fames;
using nlohmann::ordered_json;

struct Cli {
  std::string domain;
  bool json = false;
  std::string notion;
  std::string plan_text;
  std::string goal_text = "true";
  std::string protected_pred;
  std::string criterion;
  std::string property;
  std::string individual;
  std::string eo_reading = "conditioned";
  int horizon = 2;
  int max_results = 1;
  std::string after_text;
  bool after_given = false;
  int world_index = 0;
  std::string atoms_text;
};

EngineOptions engine_options() {
  EngineOptions opt;
  if (const char* cap = std::getenv("FAMES_ATOM_CAP")) {
    char* end = nullptr;
    long v = std::strtol(cap, &end, 10);
    if (end == cap || *end != '\0' || v < 1)
      throw MalformedFormulaError("FAMES_ATOM_CAP must be a positive integer");
    opt.atom_cap = static_cast<int>(v);
  }
  return opt;
}

Theory load_theory(const std::string& path) {
  auto res = parse_theory_file(path);
  if (!res.ok()) {
    std::cerr << format_diagnostics(res.diagnostics, path);
    throw Error("cannot load theory '" + path + "'");
  }
  if (!res.diagnostics.empty())
    std::cerr << format_diagnostics(res.diagnostics, path);
  return *res.theory;
}

std::vector<ActionInstance> parse_plan_arg(const std::string& text, const Theory& th) {
  auto res = parse_plan(text, th);
  if (!res.ok()) {
    std::cerr << format_diagnostics(res.diagnostics, "--plan");
    throw Error("cannot parse plan");
  }
  return *res.plan;
}

Formula parse_goal_arg(const std::string& text, const Theory& th) {
  auto res = parse_formula(text, th, {"x"});
  if (!res.ok()) {
    std::cerr << format_diagnostics(res.diagnostics, "--goal");
    throw Error("cannot parse goal formula");
  }
  return *res.formula;
}

FairnessQuery build_query(const Cli& c, const Theory& th, bool with_plan) {
  FairnessQuery q;
  if (with_plan) q.plan = parse_plan_arg(c.plan_text, th);
  q.goal = parse_goal_arg(c.goal_text, th);
  q.protected_pred = c.protected_pred;
  if (!c.criterion.empty()) q.criterion = c.criterion;
  if (!c.property.empty()) q.positive_property = c.property;
  if (!c.individual.empty()) q.individual = c.individual;
  q.eo_reading = c.eo_reading;
  return q;
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const Cli& c, const std::string& domain, const std::string& command,
          const std::vector<FairnessVerdict>& verdicts,
          const std::vector<std::string>& warnings, double ms, ordered_json result,
          const std::string& text) {
  if (c.json) {
    std::cout << make_report(domain, command, verdicts, warnings, ms, std::move(result))
                     .dump(2)
              << "\n";
  } else {
    std::cout << text;
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  }
}

int cmd_check(const Cli& c) {
  Theory th = load_theory(c.domain);
  Engine eng(th, engine_options());
  FairnessQuery q = build_query(c, th, true);
  Timer t;
  FairnessVerdict v = run_check(eng, c.notion, q);
  emit(c, th.name, "check", {v}, v.warnings, t.ms(), nullptr, verdict_to_text(v));
  return v.holds ? 0 : 1;
}

int cmd_plan(const Cli& c) {
  Theory th = load_theory(c.domain);
  Engine eng(th, engine_options());
  SearchConfig cfg;
  cfg.horizon = c.horizon;
  cfg.max_results = c.max_results;
  cfg.notion = c.notion;
  cfg.query = build_query(c, th, false);
  Timer t;
  auto results = find_plans(eng, cfg);

  std::vector<FairnessVerdict> verdicts;
  std::vector<std::string> warnings;
  ordered_json plans = ordered_json::array();
  std::string text;
  for (const auto& [plan, verdict] : results) {
    ordered_json steps = ordered_json::array();
    for (const auto& a : plan) steps.push_back(a.str());
    plans.push_back(std::move(steps));
    text += "plan: " + trace_str(plan) + "\n" + verdict_to_text(verdict);
    for (const auto& w : verdict.warnings)
      if (std::find(warnings.begin(), warnings.end(), w) == warnings.end())
        warnings.push_back(w);
    verdicts.push_back(verdict);
  }
  if (results.empty())
    text = "no plan within horizon " + std::to_string(c.horizon) + " implements " +
           c.notion + "\n";
  ordered_json result;
  result["plans"] = std::move(plans);
  emit(c, th.name, "plan", verdicts, warnings, t.ms(), std::move(result), text);
  return results.empty() ? 1 : 0;
}

int cmd_worlds(const Cli& c) {
  Theory th = load_theory(c.domain);
  Timer t;
  Engine eng(th, engine_options());
  std::string text = "|W0|=" + std::to_string(eng.initial_worlds().size()) +
                     " |E|=" + std::to_string(eng.epistemic_worlds().size()) + "\n";
  ordered_json result;
  result["w0_count"] = eng.initial_worlds().size();
  result["e_count"] = eng.epistemic_worlds().size();
  result["after"] = nullptr;
  result["world_index"] = nullptr;
  result["compatible_count"] = nullptr;
  if (c.after_given) {
    auto plan = parse_plan_arg(c.after_text, th);
    if (c.world_index < 0 ||
        c.world_index >= static_cast<int>(eng.initial_worlds().size()))
      throw MalformedFormulaError("world index " + std::to_string(c.world_index) +
                                  " is out of range");
    const WorldState& w = eng.initial_worlds()[c.world_index];
    size_t compatible = eng.compatible_worlds(w, plan).size();
    text += "compatible=" + std::to_string(compatible) + " after " + trace_str(plan) +
            " from world " + std::to_string(c.world_index) + "\n";
    ordered_json steps = ordered_json::array();
    for (const auto& a : plan) steps.push_back(a.str());
    result["after"] = std::move(steps);
    result["world_index"] = c.world_index;
    result["compatible_count"] = compatible;
  }
  emit(c, th.name, "worlds", {}, eng.warnings(), t.ms(), std::move(result), text);
  return 0;
}

int cmd_forget(const Cli& c) {
  Theory th = load_theory(c.domain);
  auto res = parse_atom_list(c.atoms_text, th);
  if (!res.ok()) {
    std::cerr << format_diagnostics(res.diagnostics, "--atoms");
    throw Error("cannot parse atom list");
  }
  Timer t;
  Theory th2 = forget_theory(th, *res.atoms);
  Engine eng(th2, engine_options());
  std::string text = "init_true: " + to_string(th2.init_true) + "\n" +
                     "init_known: " + to_string(th2.init_known) + "\n" +
                     "|W0|=" + std::to_string(eng.initial_worlds().size()) +
                     " |E|=" + std::to_string(eng.epistemic_worlds().size()) + "\n";
  ordered_json result;
  result["init_true"] = to_string(th2.init_true);
  result["init_known"] = to_string(th2.init_known);
  result["w0_count"] = eng.initial_worlds().size();
  result["e_count"] = eng.epistemic_worlds().size();
  emit(c, th.name, "forget", {}, eng.warnings(), t.ms(), std::move(result), text);
  return 0;
}

int cmd_proxy(const Cli& c) {
  Theory th = load_theory(c.domain);
  Timer t;
  Engine eng(th, engine_options());
  auto proxies = proxy_set(eng, c.protected_pred);
  std::string line = "proxy(" + c.protected_pred + "):";
  ordered_json names = ordered_json::array();
  if (proxies.empty()) line += " (none)";
  for (const auto& pd : proxies) {
    line += " " + pd.name;
    names.push_back(pd.name);
  }
  ordered_json result;
  result["protected"] = c.protected_pred;
  result["proxies"] = std::move(names);
  emit(c, th.name, "proxy", {}, eng.warnings(), t.ms(), std::move(result), line + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fames: fairness model checking for epistemic action theories"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Cli c;

  auto common = [&c](CLI::App* sub) {
    sub->add_option("--domain", c.domain, "theory file (.fth)")->required();
    sub->add_flag("--json", c.json, "emit a JSON report on stdout");
  };

  CLI::App* check = app.add_subcommand("check", "decide a fairness notion for a plan");
  common(check);
  check->add_option("--notion", c.notion, "fairness notion")->required();
  check->add_option("--plan", c.plan_text, "';'-separated ground actions");
  check->add_option("--goal", c.goal_text, "goal formula (free x for parametric notions)");
  check->add_option("--protected", c.protected_pred, "protected attribute")->required();
  check->add_option("--individual", c.individual, "individual for ftu-ind/cf");
  check->add_option("--criterion", c.criterion, "criterion predicate for eo");
  check->add_option("--property", c.property, "positive property for equity notions");
  check->add_option("--eo-reading", c.eo_reading, "conditioned|literal");

  CLI::App* plan = app.add_subcommand("plan", "search plans implementing a notion");
  common(plan);
  plan->add_option("--notion", c.notion, "fairness notion")->required();
  plan->add_option("--goal", c.goal_text, "goal formula");
  plan->add_option("--protected", c.protected_pred, "protected attribute")->required();
  plan->add_option("--individual", c.individual, "individual for ftu-ind/cf");
  plan->add_option("--criterion", c.criterion, "criterion predicate for eo");
  plan->add_option("--property", c.property, "positive property for equity notions");
  plan->add_option("--eo-reading", c.eo_reading, "conditioned|literal");
  plan->add_option("--horizon", c.horizon, "maximum plan length");
  plan->add_option("--max-results", c.max_results, "stop after this many plans");

  CLI::App* worlds = app.add_subcommand("worlds", "count worlds and compatibility");
  common(worlds);
  worlds->add_option("--after", c.after_text, "plan to advance along");
  worlds->add_option("--world", c.world_index, "index into W0 (default 0)");

  CLI::App* forget = app.add_subcommand("forget", "forget atoms from the initial formulas");
  common(forget);
  forget->add_option("--atoms", c.atoms_text, "','-separated ground atoms")->required();

  CLI::App* proxy = app.add_subcommand("proxy", "list proxies of a protected attribute");
  common(proxy);
  proxy->add_option("--protected", c.protected_pred, "protected attribute")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  c.after_given = worlds->count("--after") > 0;

  try {
    if (app.got_subcommand(check)) return cmd_check(c);
    if (app.got_subcommand(plan)) return cmd_plan(c);
    if (app.got_subcommand(worlds)) return cmd_worlds(c);
    if (app.got_subcommand(forget)) return cmd_forget(c);
    if (app.got_subcommand(proxy)) return cmd_proxy(c);
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
