#include "fames/formula.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fames {

static std::string join_args(const std::vector<std::string>& args) {
  if (args.empty()) return "";
  std::string s = "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += ", ";
    s += args[i];
  }
  return s + ")";
}

std::string GroundAtom::str() const { return predicate + join_args(args); }

std::string ActionInstance::str() const { return action + join_args(args); }

ActionTerm ActionTerm::of(const ActionInstance& a) {
  ActionTerm t;
  t.action = a.action;
  for (const auto& x : a.args) t.args.push_back(Term::object(x));
  return t;
}

bool ActionTerm::is_ground() const {
  return std::all_of(args.begin(), args.end(),
                     [](const Term& t) { return !t.is_var(); });
}

ActionInstance ActionTerm::instance() const {
  ActionInstance a;
  a.action = action;
  for (const auto& t : args) {
    if (t.is_var()) throw MalformedFormulaError("action term " + str() + " is not ground");
    a.args.push_back(t.name);
  }
  return a;
}

std::string ActionTerm::str() const {
  std::vector<std::string> names;
  for (const auto& t : args) names.push_back(t.name);
  return action + join_args(names);
}

Formula::Formula() : n_(std::make_shared<const Node>()) {}

Formula Formula::make(Node n) {
  return Formula(std::make_shared<const Node>(std::move(n)));
}

GroundAtom Formula::atom() const {
  GroundAtom a;
  a.predicate = n_->name;
  for (const auto& t : n_->terms) {
    if (t.is_var()) throw MalformedFormulaError("atom " + str() + " is not ground");
    a.args.push_back(t.name);
  }
  return a;
}

Formula Formula::truth() { return Formula(); }

Formula Formula::falsity() {
  Node n;
  n.kind = Kind::False;
  return make(std::move(n));
}

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  Node n;
  n.kind = Kind::Atom;
  n.name = std::move(pred);
  n.terms = std::move(args);
  return make(std::move(n));
}

Formula Formula::atom(const GroundAtom& a) {
  std::vector<Term> ts;
  for (const auto& x : a.args) ts.push_back(Term::object(x));
  return atom(a.predicate, std::move(ts));
}

Formula Formula::term_eq(Term l, Term r) {
  Node n;
  n.kind = Kind::TermEq;
  n.terms = {std::move(l), std::move(r)};
  return make(std::move(n));
}

Formula Formula::action_eq(std::string action_var, ActionTerm rhs) {
  Node n;
  n.kind = Kind::ActionEq;
  n.aeq_var = true;
  n.name = std::move(action_var);
  n.actions = {std::move(rhs)};
  return make(std::move(n));
}

Formula Formula::action_eq(ActionTerm lhs, ActionTerm rhs) {
  Node n;
  n.kind = Kind::ActionEq;
  n.aeq_var = false;
  n.actions = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

Formula Formula::negate(Formula f) {
  Node n;
  n.kind = Kind::Not;
  n.kids = {std::move(f)};
  return make(std::move(n));
}

Formula Formula::conj(std::vector<Formula> fs) {
  if (fs.empty()) return truth();
  if (fs.size() == 1) return fs[0];
  Node n;
  n.kind = Kind::And;
  n.kids = std::move(fs);
  return make(std::move(n));
}

Formula Formula::disj(std::vector<Formula> fs) {
  if (fs.empty()) return falsity();
  if (fs.size() == 1) return fs[0];
  Node n;
  n.kind = Kind::Or;
  n.kids = std::move(fs);
  return make(std::move(n));
}

Formula Formula::conj2(Formula a, Formula b) {
  std::vector<Formula> fs;
  fs.push_back(std::move(a));
  fs.push_back(std::move(b));
  return conj(std::move(fs));
}

Formula Formula::disj2(Formula a, Formula b) {
  std::vector<Formula> fs;
  fs.push_back(std::move(a));
  fs.push_back(std::move(b));
  return disj(std::move(fs));
}

Formula Formula::implies(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Implies;
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::iff(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Iff;
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
  Node n;
  n.kind = Kind::Forall;
  n.name = std::move(var);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
  Node n;
  n.kind = Kind::Exists;
  n.name = std::move(var);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::knows(Formula body) {
  Node n;
  n.kind = Kind::Knows;
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::only_knows(Formula body) {
  Node n;
  n.kind = Kind::OnlyKnows;
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::after(ActionTerm a, Formula body) {
  Node n;
  n.kind = Kind::AfterAction;
  n.actions = {std::move(a)};
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::after(const ActionInstance& a, Formula body) {
  return after(ActionTerm::of(a), std::move(body));
}

Formula Formula::after_plan(std::vector<ActionTerm> plan, Formula body) {
  if (plan.empty()) return body;
  if (plan.size() == 1) return after(std::move(plan[0]), std::move(body));
  Node n;
  n.kind = Kind::AfterPlan;
  n.actions = std::move(plan);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula Formula::after_plan(const std::vector<ActionInstance>& plan, Formula body) {
  std::vector<ActionTerm> ts;
  for (const auto& a : plan) ts.push_back(ActionTerm::of(a));
  return after_plan(std::move(ts), std::move(body));
}

bool Formula::operator==(const Formula& o) const {
  if (n_ == o.n_) return true;
  const Node& a = *n_;
  const Node& b = *o.n_;
  if (a.kind != b.kind || a.name != b.name || a.aeq_var != b.aeq_var ||
      a.terms != b.terms || a.actions != b.actions ||
      a.kids.size() != b.kids.size())
    return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!(a.kids[i] == b.kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Substitution

static Term subst_term(const Term& t, const std::string& var, const Term& value) {
  if (t.is_var() && t.name == var) return value;
  return t;
}

static ActionTerm subst_action_term(const ActionTerm& a, const std::string& var,
                                    const Term& value) {
  ActionTerm r = a;
  for (auto& t : r.args) t = subst_term(t, var, value);
  return r;
}

Formula substitute(const Formula& f, const std::string& var, const Term& value) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return f;
    case K::Atom: {
      std::vector<Term> args;
      for (const auto& t : f.args()) args.push_back(subst_term(t, var, value));
      return Formula::atom(f.pred(), std::move(args));
    }
    case K::TermEq:
      return Formula::term_eq(subst_term(f.lhs(), var, value),
                              subst_term(f.rhs(), var, value));
    case K::ActionEq:
      if (f.aeq_lhs_is_var())
        return Formula::action_eq(f.aeq_var(),
                                  subst_action_term(f.aeq_rhs(), var, value));
      return Formula::action_eq(subst_action_term(f.aeq_lhs(), var, value),
                                subst_action_term(f.aeq_rhs(), var, value));
    case K::Not:
      return Formula::negate(substitute(f.child(), var, value));
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(substitute(k, var, value));
      return f.kind() == K::And ? Formula::conj(std::move(kids))
                                : Formula::disj(std::move(kids));
    }
    case K::Implies:
      return Formula::implies(substitute(f.child(0), var, value),
                              substitute(f.child(1), var, value));
    case K::Iff:
      return Formula::iff(substitute(f.child(0), var, value),
                          substitute(f.child(1), var, value));
    case K::Forall:
    case K::Exists: {
      if (f.var() == var) return f;  // shadowed
      Formula body = substitute(f.child(), var, value);
      return f.kind() == K::Forall ? Formula::forall(f.var(), std::move(body))
                                   : Formula::exists(f.var(), std::move(body));
    }
    case K::Knows:
      return Formula::knows(substitute(f.child(), var, value));
    case K::OnlyKnows:
      return Formula::only_knows(substitute(f.child(), var, value));
    case K::AfterAction:
    case K::AfterPlan: {
      std::vector<ActionTerm> plan;
      for (const auto& a : f.plan()) plan.push_back(subst_action_term(a, var, value));
      return Formula::after_plan(std::move(plan), substitute(f.child(), var, value));
    }
  }
  throw MalformedFormulaError("substitute: unknown node");
}

Formula substitute(const Formula& f, const std::string& var,
                   const std::string& object_name) {
  return substitute(f, var, Term::object(object_name));
}

Formula substitute_action(const Formula& f, const std::string& action_var,
                          const ActionInstance& value) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
    case K::Atom:
    case K::TermEq:
      return f;
    case K::ActionEq:
      if (f.aeq_lhs_is_var() && f.aeq_var() == action_var)
        return Formula::action_eq(ActionTerm::of(value), f.aeq_rhs());
      return f;
    case K::Not:
      return Formula::negate(substitute_action(f.child(), action_var, value));
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children())
        kids.push_back(substitute_action(k, action_var, value));
      return f.kind() == K::And ? Formula::conj(std::move(kids))
                                : Formula::disj(std::move(kids));
    }
    case K::Implies:
      return Formula::implies(substitute_action(f.child(0), action_var, value),
                              substitute_action(f.child(1), action_var, value));
    case K::Iff:
      return Formula::iff(substitute_action(f.child(0), action_var, value),
                          substitute_action(f.child(1), action_var, value));
    case K::Forall:
      return Formula::forall(f.var(), substitute_action(f.child(), action_var, value));
    case K::Exists:
      return Formula::exists(f.var(), substitute_action(f.child(), action_var, value));
    case K::Knows:
      return Formula::knows(substitute_action(f.child(), action_var, value));
    case K::OnlyKnows:
      return Formula::only_knows(substitute_action(f.child(), action_var, value));
    case K::AfterAction:
    case K::AfterPlan: {
      std::vector<ActionTerm> plan = f.plan();
      return Formula::after_plan(std::move(plan),
                                 substitute_action(f.child(), action_var, value));
    }
  }
  throw MalformedFormulaError("substitute_action: unknown node");
}

Formula replace_atom(const Formula& f, const GroundAtom& a, bool value) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      if (f.pred() != a.predicate || f.args().size() != a.args.size()) return f;
      for (size_t i = 0; i < a.args.size(); ++i) {
        const Term& t = f.args()[i];
        if (t.is_var() || t.name != a.args[i]) return f;
      }
      return Formula::boolean(value);
    }
    case K::True:
    case K::False:
    case K::TermEq:
    case K::ActionEq:
      return f;
    case K::Not:
      return Formula::negate(replace_atom(f.child(), a, value));
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(replace_atom(k, a, value));
      return f.kind() == K::And ? Formula::conj(std::move(kids))
                                : Formula::disj(std::move(kids));
    }
    case K::Implies:
      return Formula::implies(replace_atom(f.child(0), a, value),
                              replace_atom(f.child(1), a, value));
    case K::Iff:
      return Formula::iff(replace_atom(f.child(0), a, value),
                          replace_atom(f.child(1), a, value));
    case K::Forall:
      return Formula::forall(f.var(), replace_atom(f.child(), a, value));
    case K::Exists:
      return Formula::exists(f.var(), replace_atom(f.child(), a, value));
    case K::Knows:
      return Formula::knows(replace_atom(f.child(), a, value));
    case K::OnlyKnows:
      return Formula::only_knows(replace_atom(f.child(), a, value));
    case K::AfterAction:
    case K::AfterPlan: {
      std::vector<ActionTerm> plan = f.plan();
      return Formula::after_plan(std::move(plan), replace_atom(f.child(), a, value));
    }
  }
  throw MalformedFormulaError("replace_atom: unknown node");
}

// ---------------------------------------------------------------------------
// Grounding

namespace {

struct Grounder {
  const std::vector<std::string>& objects;
  std::map<std::string, std::string> env;

  std::string resolve(const Term& t) {
    if (!t.is_var()) return t.name;
    auto it = env.find(t.name);
    if (it == env.end())
      throw MalformedFormulaError("unbound variable '" + t.name + "'");
    return it->second;
  }

  ActionInstance resolve(const ActionTerm& a) {
    ActionInstance r;
    r.action = a.action;
    for (const auto& t : a.args) r.args.push_back(resolve(t));
    return r;
  }

  Formula run(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True:
      case K::False:
        return f;
      case K::Atom: {
        std::vector<Term> args;
        for (const auto& t : f.args()) args.push_back(Term::object(resolve(t)));
        return Formula::atom(f.pred(), std::move(args));
      }
      case K::TermEq:
        return Formula::boolean(resolve(f.lhs()) == resolve(f.rhs()));
      case K::ActionEq: {
        if (f.aeq_lhs_is_var())
          throw MalformedFormulaError("unbound action variable '" + f.aeq_var() + "'");
        return Formula::boolean(resolve(f.aeq_lhs()) == resolve(f.aeq_rhs()));
      }
      case K::Not:
        return Formula::negate(run(f.child()));
      case K::And:
      case K::Or: {
        std::vector<Formula> kids;
        for (const auto& k : f.children()) kids.push_back(run(k));
        return f.kind() == K::And ? Formula::conj(std::move(kids))
                                  : Formula::disj(std::move(kids));
      }
      case K::Implies:
        return Formula::implies(run(f.child(0)), run(f.child(1)));
      case K::Iff:
        return Formula::iff(run(f.child(0)), run(f.child(1)));
      case K::Forall:
      case K::Exists: {
        if (objects.empty())
          throw MalformedFormulaError("cannot ground quantifier over empty domain");
        std::vector<Formula> kids;
        auto saved = env.find(f.var()) != env.end()
                         ? std::optional<std::string>(env[f.var()])
                         : std::nullopt;
        for (const auto& d : objects) {
          env[f.var()] = d;
          kids.push_back(run(f.child()));
        }
        if (saved)
          env[f.var()] = *saved;
        else
          env.erase(f.var());
        return f.kind() == K::Forall ? Formula::conj(std::move(kids))
                                     : Formula::disj(std::move(kids));
      }
      case K::Knows:
        return Formula::knows(run(f.child()));
      case K::OnlyKnows:
        return Formula::only_knows(run(f.child()));
      case K::AfterAction:
      case K::AfterPlan: {
        std::vector<ActionTerm> plan;
        for (const auto& a : f.plan()) plan.push_back(ActionTerm::of(resolve(a)));
        return Formula::after_plan(std::move(plan), run(f.child()));
      }
    }
    throw MalformedFormulaError("ground: unknown node");
  }
};

}  // namespace

Formula ground(const Formula& f, const std::vector<std::string>& objects) {
  Grounder g{objects, {}};
  return simplify(g.run(f));
}

// ---------------------------------------------------------------------------
// Simplification

Formula simplify(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
    case K::Atom:
      return f;
    case K::TermEq:
      // Unique names: a ground equality is a constant.
      if (!f.lhs().is_var() && !f.rhs().is_var())
        return Formula::boolean(f.lhs().name == f.rhs().name);
      return f;
    case K::ActionEq: {
      if (f.aeq_lhs_is_var()) return f;
      const ActionTerm& l = f.aeq_lhs();
      const ActionTerm& r = f.aeq_rhs();
      if (l.action != r.action) return Formula::falsity();
      if (l.is_ground() && r.is_ground())
        return Formula::boolean(l.instance() == r.instance());
      return f;
    }
    case K::Not: {
      Formula c = simplify(f.child());
      if (c.kind() == K::True) return Formula::falsity();
      if (c.kind() == K::False) return Formula::truth();
      return Formula::negate(std::move(c));
    }
    case K::And: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) {
        Formula c = simplify(k);
        if (c.kind() == K::False) return Formula::falsity();
        if (c.kind() == K::True) continue;
        kids.push_back(std::move(c));
      }
      return Formula::conj(std::move(kids));
    }
    case K::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) {
        Formula c = simplify(k);
        if (c.kind() == K::True) return Formula::truth();
        if (c.kind() == K::False) continue;
        kids.push_back(std::move(c));
      }
      return Formula::disj(std::move(kids));
    }
    case K::Implies: {
      Formula a = simplify(f.child(0));
      Formula b = simplify(f.child(1));
      if (a.kind() == K::False || b.kind() == K::True) return Formula::truth();
      if (a.kind() == K::True) return b;
      if (b.kind() == K::False) return simplify(Formula::negate(std::move(a)));
      return Formula::implies(std::move(a), std::move(b));
    }
    case K::Iff: {
      Formula a = simplify(f.child(0));
      Formula b = simplify(f.child(1));
      if (a.kind() == K::True) return b;
      if (b.kind() == K::True) return a;
      if (a.kind() == K::False) return simplify(Formula::negate(std::move(b)));
      if (b.kind() == K::False) return simplify(Formula::negate(std::move(a)));
      return Formula::iff(std::move(a), std::move(b));
    }
    case K::Forall:
      return Formula::forall(f.var(), simplify(f.child()));
    case K::Exists:
      return Formula::exists(f.var(), simplify(f.child()));
    case K::Knows:
      // K(false) is not equivalent to false when the compatible set is empty,
      // so knowledge operators are never folded.
      return Formula::knows(simplify(f.child()));
    case K::OnlyKnows:
      return Formula::only_knows(simplify(f.child()));
    case K::AfterAction:
    case K::AfterPlan: {
      Formula body = simplify(f.child());
      if (body.kind() == K::True || body.kind() == K::False) return body;
      std::vector<ActionTerm> plan = f.plan();
      return Formula::after_plan(std::move(plan), std::move(body));
    }
  }
  throw MalformedFormulaError("simplify: unknown node");
}

// ---------------------------------------------------------------------------
// Static evaluation

bool eval_static(const Formula& f,
                 const std::function<bool(const GroundAtom&)>& val) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Atom:
      return val(f.atom());  // throws if non-ground
    case K::TermEq: {
      if (f.lhs().is_var() || f.rhs().is_var())
        throw MalformedFormulaError("eval_static: non-ground equality");
      return f.lhs().name == f.rhs().name;
    }
    case K::ActionEq: {
      if (f.aeq_lhs_is_var())
        throw MalformedFormulaError("eval_static: unresolved action variable");
      return f.aeq_lhs().instance() == f.aeq_rhs().instance();
    }
    case K::Not:
      return !eval_static(f.child(), val);
    case K::And:
      for (const auto& k : f.children())
        if (!eval_static(k, val)) return false;
      return true;
    case K::Or:
      for (const auto& k : f.children())
        if (eval_static(k, val)) return true;
      return false;
    case K::Implies:
      return !eval_static(f.child(0), val) || eval_static(f.child(1), val);
    case K::Iff:
      return eval_static(f.child(0), val) == eval_static(f.child(1), val);
    case K::Forall:
    case K::Exists:
      throw MalformedFormulaError("eval_static requires a grounded formula");
    case K::Knows:
    case K::OnlyKnows:
    case K::AfterAction:
    case K::AfterPlan:
      throw NotStaticError("eval_static: modal operator in static formula");
  }
  throw MalformedFormulaError("eval_static: unknown node");
}

// ---------------------------------------------------------------------------
// Inspection

static void collect_free(const Formula& f, std::set<std::string>& bound,
                         std::set<std::string>& out) {
  using K = Formula::Kind;
  auto term = [&](const Term& t) {
    if (t.is_var() && !bound.count(t.name)) out.insert(t.name);
  };
  auto act = [&](const ActionTerm& a) {
    for (const auto& t : a.args) term(t);
  };
  switch (f.kind()) {
    case K::Atom:
      for (const auto& t : f.args()) term(t);
      return;
    case K::TermEq:
      term(f.lhs());
      term(f.rhs());
      return;
    case K::ActionEq:
      if (!f.aeq_lhs_is_var()) act(f.aeq_lhs());
      act(f.aeq_rhs());
      return;
    case K::Forall:
    case K::Exists: {
      bool inserted = bound.insert(f.var()).second;
      collect_free(f.child(), bound, out);
      if (inserted) bound.erase(f.var());
      return;
    }
    case K::AfterAction:
    case K::AfterPlan:
      for (const auto& a : f.plan()) act(a);
      collect_free(f.child(), bound, out);
      return;
    default:
      for (size_t i = 0; i < f.child_count(); ++i)
        collect_free(f.child(i), bound, out);
      return;
  }
}

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool is_static(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Knows:
    case K::OnlyKnows:
    case K::AfterAction:
    case K::AfterPlan:
      return false;
    default:
      for (size_t i = 0; i < f.child_count(); ++i)
        if (!is_static(f.child(i))) return false;
      return true;
  }
}

bool mentions_atom(const Formula& f, const GroundAtom& a) {
  using K = Formula::Kind;
  if (f.kind() == K::Atom) {
    if (f.pred() != a.predicate || f.args().size() != a.args.size()) return false;
    // A variable argument may be instantiated to the atom's object, so it
    // counts as a potential mention.
    for (size_t i = 0; i < a.args.size(); ++i) {
      const Term& t = f.args()[i];
      if (!t.is_var() && t.name != a.args[i]) return false;
    }
    return true;
  }
  for (size_t i = 0; i < f.child_count(); ++i)
    if (mentions_atom(f.child(i), a)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Printing.  Precedence: ! > & > | > -> > <->; quantifiers, K, O and [..]
// swallow the rest of the formula, so they print parenthesized whenever they
// appear in a tighter context.  K/O always print with parentheses around the
// argument, which keeps them primary-tight.

namespace {

constexpr int kPrecBinder = 0;
constexpr int kPrecIff = 1;
constexpr int kPrecImplies = 2;
constexpr int kPrecOr = 3;
constexpr int kPrecAnd = 4;
constexpr int kPrecNot = 5;
constexpr int kPrecPrimary = 6;

int precedence(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Iff:
      return kPrecIff;
    case K::Implies:
      return kPrecImplies;
    case K::Or:
      return kPrecOr;
    case K::And:
      return kPrecAnd;
    case K::Not:
      // != prints as a primary
      return f.child().kind() == K::TermEq || f.child().kind() == K::ActionEq
                 ? kPrecPrimary
                 : kPrecNot;
    case K::Forall:
    case K::Exists:
    case K::AfterAction:
    case K::AfterPlan:
      return kPrecBinder;
    default:
      return kPrecPrimary;
  }
}

void print(std::ostream& os, const Formula& f, int min_prec);

void print_plan(std::ostream& os, const std::vector<ActionTerm>& plan) {
  os << '[';
  for (size_t i = 0; i < plan.size(); ++i) {
    if (i) os << "; ";
    os << plan[i].str();
  }
  os << ']';
}

void print_eq(std::ostream& os, const Formula& f, bool negated) {
  const char* op = negated ? " != " : " == ";
  if (f.kind() == Formula::Kind::TermEq) {
    os << f.lhs().name << op << f.rhs().name;
  } else if (f.aeq_lhs_is_var()) {
    os << f.aeq_var() << op << f.aeq_rhs().str();
  } else {
    os << f.aeq_lhs().str() << op << f.aeq_rhs().str();
  }
}

void print(std::ostream& os, const Formula& f, int min_prec) {
  using K = Formula::Kind;
  if (precedence(f) < min_prec) {
    os << '(';
    print(os, f, kPrecBinder);
    os << ')';
    return;
  }
  switch (f.kind()) {
    case K::True:
      os << "true";
      return;
    case K::False:
      os << "false";
      return;
    case K::Atom: {
      os << f.pred();
      if (!f.args().empty()) {
        os << '(';
        for (size_t i = 0; i < f.args().size(); ++i) {
          if (i) os << ", ";
          os << f.args()[i].name;
        }
        os << ')';
      }
      return;
    }
    case K::TermEq:
    case K::ActionEq:
      print_eq(os, f, false);
      return;
    case K::Not: {
      const Formula& c = f.child();
      if (c.kind() == K::TermEq || c.kind() == K::ActionEq) {
        print_eq(os, c, true);
        return;
      }
      os << '!';
      print(os, c, kPrecNot);
      return;
    }
    case K::And: {
      for (size_t i = 0; i < f.child_count(); ++i) {
        if (i) os << " & ";
        print(os, f.child(i), kPrecAnd + 1);
      }
      return;
    }
    case K::Or: {
      for (size_t i = 0; i < f.child_count(); ++i) {
        if (i) os << " | ";
        print(os, f.child(i), kPrecOr + 1);
      }
      return;
    }
    case K::Implies:
      print(os, f.child(0), kPrecImplies + 1);
      os << " -> ";
      print(os, f.child(1), kPrecImplies);
      return;
    case K::Iff:
      print(os, f.child(0), kPrecIff);
      os << " <-> ";
      print(os, f.child(1), kPrecIff + 1);
      return;
    case K::Forall:
    case K::Exists:
      os << (f.kind() == K::Forall ? "forall " : "exists ") << f.var() << ". ";
      print(os, f.child(), kPrecBinder);
      return;
    case K::Knows:
    case K::OnlyKnows:
      os << (f.kind() == K::Knows ? "K(" : "O(");
      print(os, f.child(), kPrecBinder);
      os << ')';
      return;
    case K::AfterAction:
    case K::AfterPlan:
      print_plan(os, f.plan());
      os << ' ';
      print(os, f.child(), kPrecBinder);
      return;
  }
}

}  // namespace

std::string Formula::str() const {
  std::ostringstream os;
  print(os, *this, kPrecBinder);
  return os.str();
}

std::string to_string(const Formula& f) { return f.str(); }

}  // namespace fames
