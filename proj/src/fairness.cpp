#include "fames/fairness.hpp"

#include <algorithm>

#include "fames/forgetting.hpp"

namespace fames {

namespace {

Term vx() { return Term::var("x"); }

Formula pred1(const std::string& p, Term t) {
  return Formula::atom(p, {std::move(t)});
}

const PredicateDecl& unary_pred(const Engine& eng, const std::string& name,
                                const char* role) {
  const PredicateDecl* pd = eng.theory().find_predicate(name);
  if (!pd)
    throw MalformedFormulaError(std::string(role) + " predicate '" + name +
                                "' is not declared");
  if (pd->arity != 1)
    throw MalformedFormulaError(std::string(role) + " predicate '" + name +
                                "' must be unary");
  return *pd;
}

void require_closed_goal(const FairnessQuery& q, const char* notion) {
  if (!free_variables(q.goal).empty())
    throw MalformedFormulaError(std::string("notion '") + notion +
                                "' requires a closed goal formula");
}

void require_open_goal(const FairnessQuery& q, const char* notion) {
  auto fv = free_variables(q.goal);
  if (fv.size() != 1 || *fv.begin() != "x")
    throw MalformedFormulaError(std::string("notion '") + notion +
                                "' requires a goal with the single free variable x");
}

const std::string& require_individual(const Engine& eng, const FairnessQuery& q,
                                      const char* notion) {
  if (!q.individual)
    throw MalformedFormulaError(std::string("notion '") + notion +
                                "' requires an individual");
  if (!eng.theory().has_object(*q.individual))
    throw MalformedFormulaError("individual '" + *q.individual +
                                "' is not a declared object");
  return *q.individual;
}

void absorb(FairnessVerdict& v, const Verdict& r) {
  for (const auto& w : r.warnings)
    if (std::find(v.warnings.begin(), v.warnings.end(), w) == v.warnings.end())
      v.warnings.push_back(w);
}

// Runs one entailment clause; on failure stamps the clause label and
// diagnostics into the verdict and returns false.
bool clause(const Engine& eng, FairnessVerdict& v, const Formula& f,
            const char* label) {
  Verdict r = eng.entails(f);
  absorb(v, r);
  if (r.holds) return true;
  v.holds = false;
  v.failed_clause = label;
  v.diagnostics = std::move(r.diagnostics);
  return false;
}

// Ignorance over every prefix of the plan, the empty one and the full plan
// included.  The first failing prefix is reported.
bool ignorance_clause(const Engine& eng, const FairnessQuery& q, const Formula& ign,
                      FairnessVerdict& v) {
  for (size_t k = 0; k <= q.plan.size(); ++k) {
    std::vector<ActionInstance> prefix(q.plan.begin(), q.plan.begin() + k);
    Verdict r = eng.entails(Formula::after_plan(prefix, ign));
    absorb(v, r);
    if (!r.holds) {
      v.holds = false;
      v.failed_clause = "ignorance-prefix";
      if (r.diagnostics) r.diagnostics->failing_prefix = prefix;
      v.diagnostics = std::move(r.diagnostics);
      return false;
    }
  }
  return true;
}

Formula dp_matrix(const std::string& theta, const Formula& goal) {
  Formula tx = pred1(theta, vx());
  return Formula::conj2(
      Formula::forall("x", Formula::implies(tx, goal)),
      Formula::forall("x", Formula::implies(Formula::negate(tx), goal)));
}

}  // namespace

FairnessVerdict check_ftu(const Engine& eng, const FairnessQuery& q) {
  FairnessVerdict v;
  v.notion = "ftu";
  if (q.individual)
    throw MalformedFormulaError("ftu does not take an individual; use ftu-ind");
  require_closed_goal(q, "ftu");
  const auto& theta = unary_pred(eng, q.protected_pred, "protected");
  if (!clause(eng, v, Formula::after_plan(q.plan, Formula::knows(q.goal)),
              "knowledge-of-goal"))
    return v;
  Formula ign =
      Formula::negate(Formula::exists("x", Formula::knows(pred1(theta.name, vx()))));
  if (!ignorance_clause(eng, q, ign, v)) return v;
  v.holds = true;
  return v;
}

FairnessVerdict check_ftu_individual(const Engine& eng, const FairnessQuery& q) {
  FairnessVerdict v;
  v.notion = "ftu-ind";
  const std::string& ind = require_individual(eng, q, "ftu-ind");
  require_closed_goal(q, "ftu-ind");
  const auto& theta = unary_pred(eng, q.protected_pred, "protected");
  if (!clause(eng, v, Formula::after_plan(q.plan, Formula::knows(q.goal)),
              "knowledge-of-goal"))
    return v;
  Formula ign = Formula::negate(Formula::knows(pred1(theta.name, Term::object(ind))));
  if (!ignorance_clause(eng, q, ign, v)) return v;
  v.holds = true;
  return v;
}

FairnessVerdict check_dp(const Engine& eng, const FairnessQuery& q) {
  FairnessVerdict v;
  v.notion = "dp";
  require_open_goal(q, "dp");
  const auto& theta = unary_pred(eng, q.protected_pred, "protected");
  Formula f =
      Formula::after_plan(q.plan, Formula::knows(dp_matrix(theta.name, q.goal)));
  if (!clause(eng, v, f, "parity")) return v;
  v.holds = true;
  return v;
}

FairnessVerdict check_strong_dp(const Engine& eng, const FairnessQuery& q) {
  FairnessVerdict v = check_dp(eng, q);
  v.notion = "strong-dp";
  if (!v.holds) return v;
  const auto& theta = unary_pred(eng, q.protected_pred, "protected");
  Formula tx = pred1(theta.name, vx());
  Formula kw = Formula::forall(
      "x", Formula::disj2(Formula::knows(tx), Formula::knows(Formula::negate(tx))));
  if (!clause(eng, v, Formula::after_plan(q.plan, kw), "knows-whether")) return v;
  v.holds = true;
  return v;
}

FairnessVerdict check_ftu_dp(const Engine& eng, const FairnessQuery& q) {
  FairnessVerdict v = check_dp(eng, q);
  v.notion = "ftu-dp";
  if (!v.holds) return v;
  const auto& theta = unary_pred(eng, q.protected_pred, "protected");
  Formula ign =
      Formula::negate(Formula::exists("x", Formula::knows(pred1(theta.name, vx()))));
  if (!ignorance_clause(eng, q, ign, v)) return v;
  v.holds = true;
  return v;
}

FairnessVerdict check_eo(const Engine& eng, const FairnessQuery& q) {
  FairnessVerdict v;
  v.notion = "eo";
  if (!q.criterion)
    throw MalformedFormulaError("notion 'eo' requires a criterion predicate");
  if (q.eo_reading != "conditioned" && q.eo_reading != "literal")
    throw MalformedFormulaError("eo reading must be 'conditioned' or 'literal'");
  require_open_goal(q, "eo");
  const auto& theta = unary_pred(eng, q.protected_pred, "protected");
  const auto& eta = unary_pred(eng, *q.criterion, "criterion");
  v.reading = q.eo_reading;
  Formula tx = pred1(theta.name, vx());
  Formula ex = pred1(eta.name, vx());
  Formula first =
      Formula::forall("x", Formula::implies(Formula::conj2(ex, tx), q.goal));
  // The worked loan example needs the criterion kept in the second conjunct;
  // the textbook formula negates the whole conjunction instead.  Both
  // readings are available; "conditioned" is the default.
  Formula second =
      q.eo_reading == "conditioned"
          ? Formula::forall(
                "x", Formula::implies(Formula::conj2(ex, Formula::negate(tx)), q.goal))
          : Formula::forall(
                "x",
                Formula::implies(Formula::negate(Formula::conj2(ex, tx)), q.goal));
  Formula f = Formula::after_plan(
      q.plan, Formula::knows(Formula::conj2(std::move(first), std::move(second))));
  if (!clause(eng, v, f, "parity")) return v;
  v.holds = true;
  return v;
}

FairnessVerdict check_cf(const Engine& eng, const FairnessQuery& q) {
  FairnessVerdict v;
  v.notion = "cf";
  const std::string& ind = require_individual(eng, q, "cf");
  require_closed_goal(q, "cf");
  const auto& theta = unary_pred(eng, q.protected_pred, "protected");
  GroundAtom ga{theta.name, {ind}};
  Formula tn = Formula::atom(ga);

  Verdict pos = eng.entails(tn);
  absorb(v, pos);
  bool b;
  if (pos.holds) {
    b = true;
  } else {
    Verdict neg = eng.entails(Formula::negate(tn));
    absorb(v, neg);
    if (neg.holds) {
      b = false;
    } else {
      v.holds = false;
      v.failed_clause = "attribute-undetermined";
      return v;
    }
  }

  Formula goal_known = Formula::after_plan(q.plan, Formula::knows(q.goal));
  if (!clause(eng, v, goal_known, "knowledge-of-goal")) return v;

  // Counterfactual side: forget the attribute literal, then pin it to the
  // opposite value in both the actual and the known initial formulas.
  Theory th2 = forget_theory(eng.theory(), {ga});
  Formula lit = b ? Formula::negate(tn) : tn;
  th2.init_true = Formula::conj2(th2.init_true, lit);
  th2.init_known = Formula::conj2(th2.init_known, lit);
  v.derived_theory = "counterfactual theory: forget(Sigma, " + ga.str() + ") with " +
                     to_string(lit) + " conjoined to both initial formulas";
  Engine eng2(th2, eng.options());
  Verdict r = eng2.entails(goal_known);
  absorb(v, r);
  if (!r.holds) {
    v.holds = false;
    v.failed_clause = "counterfactual-goal";
    v.diagnostics = std::move(r.diagnostics);
    return v;
  }
  v.holds = true;
  return v;
}

FairnessVerdict check_strong_equity(const Engine& eng, const FairnessQuery& q) {
  FairnessVerdict v;
  v.notion = "strong-equity";
  if (!q.positive_property)
    throw MalformedFormulaError(
        "notion 'strong-equity' requires a positive property predicate");
  const auto& theta = unary_pred(eng, q.protected_pred, "protected");
  const auto& eta = unary_pred(eng, *q.positive_property, "positive property");
  Formula tx = pred1(theta.name, vx());
  Formula ex = pred1(eta.name, vx());
  Formula f =
      Formula::conj2(Formula::forall("x", Formula::implies(tx, ex)),
                     Formula::forall("x", Formula::implies(Formula::negate(tx), ex)));
  if (!clause(eng, v, f, "equity")) return v;
  v.holds = true;
  return v;
}

FairnessVerdict check_weak_equity(const Engine& eng, const FairnessQuery& q) {
  FairnessVerdict v;
  v.notion = "weak-equity";
  if (!q.positive_property)
    throw MalformedFormulaError(
        "notion 'weak-equity' requires a positive property predicate");
  const auto& theta = unary_pred(eng, q.protected_pred, "protected");
  const auto& eta = unary_pred(eng, *q.positive_property, "positive property");
  Formula tx = pred1(theta.name, vx());
  Formula ty = pred1(theta.name, Term::var("y"));
  Formula integrity = Formula::exists(
      "x", Formula::exists("y", Formula::conj2(tx, Formula::negate(ty))));
  if (!clause(eng, v, integrity, "integrity-violation")) return v;
  Formula ex = pred1(eta.name, vx());
  Formula f = Formula::conj2(
      Formula::exists("x", Formula::conj2(tx, ex)),
      Formula::exists("x", Formula::conj2(Formula::negate(tx), ex)));
  if (!clause(eng, v, f, "equity")) return v;
  v.holds = true;
  return v;
}

FairnessVerdict check_equitable_ftu(const Engine& eng, const FairnessQuery& q) {
  if (!q.positive_property)
    throw MalformedFormulaError(
        "notion 'equitable-ftu' requires a positive property predicate");
  require_closed_goal(q, "equitable-ftu");
  const auto& eta = unary_pred(eng, *q.positive_property, "positive property");
  FairnessVerdict weak = check_weak_equity(eng, q);
  FairnessVerdict v;
  if (weak.holds) {
    v = check_ftu(eng, q);
  } else {
    std::vector<GroundAtom> s;
    std::vector<std::string> names;
    for (const auto& obj : eng.theory().objects) {
      s.push_back(GroundAtom{eta.name, {obj}});
      names.push_back(s.back().str());
    }
    Theory th2 = forget_theory(eng.theory(), s);
    Engine eng2(th2, eng.options());
    v = check_ftu(eng2, q);
    std::string listing;
    for (size_t i = 0; i < names.size(); ++i)
      listing += (i ? ", " : "") + names[i];
    v.derived_theory = "weak equity does not hold; FTU evaluated on forget(Sigma, {" +
                       listing +
                       "}); one step suffices since forgetting is idempotent on S";
  }
  v.notion = "equitable-ftu";
  for (const auto& w : weak.warnings)
    if (std::find(v.warnings.begin(), v.warnings.end(), w) == v.warnings.end())
      v.warnings.push_back(w);
  return v;
}

std::vector<PredicateDecl> proxy_set(const Engine& eng,
                                     const std::string& protected_pred) {
  const auto& theta = unary_pred(eng, protected_pred, "protected");
  std::vector<PredicateDecl> out;
  for (const auto& pd : eng.theory().predicates) {
    if (pd.name == theta.name || pd.arity != 1) continue;
    Formula impl = Formula::forall(
        "x", Formula::implies(pred1(pd.name, vx()), pred1(theta.name, vx())));
    if (eng.entails(impl).holds) out.push_back(pd);
  }
  return out;
}

const std::vector<std::string>& fairness_notions() {
  static const std::vector<std::string> names = {
      "ftu",          "ftu-ind", "dp", "strong-dp",     "ftu-dp",
      "eo",           "cf",      "strong-equity", "weak-equity",
      "equitable-ftu"};
  return names;
}

FairnessVerdict run_check(const Engine& eng, const std::string& notion,
                          const FairnessQuery& q) {
  if (notion == "ftu") return check_ftu(eng, q);
  if (notion == "ftu-ind") return check_ftu_individual(eng, q);
  if (notion == "dp") return check_dp(eng, q);
  if (notion == "strong-dp") return check_strong_dp(eng, q);
  if (notion == "ftu-dp") return check_ftu_dp(eng, q);
  if (notion == "eo") return check_eo(eng, q);
  if (notion == "cf") return check_cf(eng, q);
  if (notion == "strong-equity") return check_strong_equity(eng, q);
  if (notion == "weak-equity") return check_weak_equity(eng, q);
  if (notion == "equitable-ftu") return check_equitable_ftu(eng, q);
  throw MalformedFormulaError("unknown fairness notion '" + notion + "'");
}

}  // namespace fames
