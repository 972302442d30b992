#ifndef FAMES_FORMULA_HPP
#define FAMES_FORMULA_HPP

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fames {

// Errors thrown by the semantic operations.  Parse errors are reported as
// diagnostics, not exceptions (see parser.hpp).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedFormulaError : Error {
  using Error::Error;
};
struct NotStaticError : Error {
  using Error::Error;
};
struct ResourceError : Error {
  using Error::Error;
};
struct UnsupportedError : Error {
  using Error::Error;
};

// A term is a variable or a standard (object) name.  The domain is finite and
// fixed per theory, so object names double as the quantifier range.
struct Term {
  enum class Kind { Variable, Object };
  Kind kind = Kind::Object;
  std::string name;

  static Term var(std::string n) { return {Kind::Variable, std::move(n)}; }
  static Term object(std::string n) { return {Kind::Object, std::move(n)}; }
  bool is_var() const { return kind == Kind::Variable; }
  bool operator==(const Term&) const = default;
  bool operator<(const Term& o) const {
    return kind != o.kind ? kind < o.kind : name < o.name;
  }
};

struct GroundAtom {
  std::string predicate;
  std::vector<std::string> args;

  std::string str() const;
  bool operator==(const GroundAtom&) const = default;
  bool operator<(const GroundAtom& o) const {
    return predicate != o.predicate ? predicate < o.predicate : args < o.args;
  }
};

// Fully ground action, e.g. approve(n).
struct ActionInstance {
  std::string action;
  std::vector<std::string> args;

  std::string str() const;
  bool operator==(const ActionInstance&) const = default;
  bool operator<(const ActionInstance& o) const {
    return action != o.action ? action < o.action : args < o.args;
  }
};

// Action term whose arguments may still be variables; used in action-equality
// tests inside successor state axioms and in [..] modalities before grounding.
struct ActionTerm {
  std::string action;
  std::vector<Term> args;

  static ActionTerm of(const ActionInstance& a);
  bool is_ground() const;
  ActionInstance instance() const;  // requires is_ground()
  std::string str() const;
  bool operator==(const ActionTerm&) const = default;
};

struct PredicateDecl {
  std::string name;
  int arity = 0;
  bool rigid = false;  // rigid predicates keep their initial value on every trace
};

class Formula;

struct ActionDecl {
  std::string name;
  int arity = 0;
  std::vector<std::string> params;         // canonical parameter names
  std::shared_ptr<Formula> sensing;        // SF schema over params; null = true
  std::shared_ptr<Formula> precondition;   // Poss schema over params; null = true
};

// Immutable formula AST.  And/Or are n-ary exactly as written; the parser only
// flattens unparenthesized chains, so printing and re-parsing preserves
// structure.  The unbounded "always" operator of the logic is deliberately
// absent: bounded validity enumerates traces instead.
class Formula {
 public:
  enum class Kind {
    True,
    False,
    Atom,
    TermEq,
    ActionEq,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Forall,
    Exists,
    Knows,
    OnlyKnows,
    AfterAction,
    AfterPlan,
  };

  Formula();  // True

  Kind kind() const { return n_->kind; }

  // Atom
  const std::string& pred() const { return n_->name; }
  const std::vector<Term>& args() const { return n_->terms; }
  GroundAtom atom() const;  // requires ground atom node

  // TermEq
  const Term& lhs() const { return n_->terms[0]; }
  const Term& rhs() const { return n_->terms[1]; }

  // ActionEq: lhs is either the distinguished action variable or a pattern
  bool aeq_lhs_is_var() const { return n_->aeq_var; }
  const std::string& aeq_var() const { return n_->name; }
  const ActionTerm& aeq_lhs() const { return n_->actions[0]; }
  const ActionTerm& aeq_rhs() const { return n_->actions[n_->aeq_var ? 0 : 1]; }

  // Quantifiers
  const std::string& var() const { return n_->name; }

  // After modalities
  const std::vector<ActionTerm>& plan() const { return n_->actions; }

  // Children (Not/K/O/quantifier/After: 1; Implies/Iff: 2; And/Or: n)
  size_t child_count() const { return n_->kids.size(); }
  const Formula& child(size_t i = 0) const { return n_->kids[i]; }
  const std::vector<Formula>& children() const { return n_->kids; }

  // Builders
  static Formula truth();
  static Formula falsity();
  static Formula boolean(bool b) { return b ? truth() : falsity(); }
  static Formula atom(std::string pred, std::vector<Term> args);
  static Formula atom(const GroundAtom& a);
  static Formula term_eq(Term l, Term r);
  static Formula action_eq(std::string action_var, ActionTerm rhs);
  static Formula action_eq(ActionTerm lhs, ActionTerm rhs);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> fs);      // n-ary as given
  static Formula disj(std::vector<Formula> fs);
  static Formula conj2(Formula a, Formula b);
  static Formula disj2(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);
  static Formula knows(Formula body);
  static Formula only_knows(Formula body);
  static Formula after(ActionTerm a, Formula body);
  static Formula after(const ActionInstance& a, Formula body);
  // Empty plan returns body; singleton builds AfterAction.
  static Formula after_plan(std::vector<ActionTerm> plan, Formula body);
  static Formula after_plan(const std::vector<ActionInstance>& plan, Formula body);

  bool operator==(const Formula& o) const;  // structural
  bool operator!=(const Formula& o) const { return !(*this == o); }

  std::string str() const;  // re-parseable concrete syntax

 private:
  struct Node {
    Kind kind = Kind::True;
    std::string name;                // atom predicate / quantifier var / action var
    std::vector<Term> terms;         // atom args / equality sides
    std::vector<ActionTerm> actions; // action-eq sides / plan
    std::vector<Formula> kids;
    bool aeq_var = false;            // ActionEq lhs is the action variable
  };
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Formula make(Node n);
  std::shared_ptr<const Node> n_;
};

// Substitution is capture-free in the usual sense: binders shadow.
Formula substitute(const Formula& f, const std::string& var, const Term& value);
Formula substitute(const Formula& f, const std::string& var, const std::string& object_name);
// Replaces the distinguished action variable in ActionEq nodes.
Formula substitute_action(const Formula& f, const std::string& action_var,
                          const ActionInstance& value);
// Replaces a ground atom by a constant (used by forgetting).
Formula replace_atom(const Formula& f, const GroundAtom& a, bool value);

// Expands quantifiers over the given object list (in order), resolves ground
// term/action equalities by unique-names, and folds constants.  Throws
// MalformedFormulaError on unbound variables or quantification over an empty
// domain.  Idempotent.
Formula ground(const Formula& f, const std::vector<std::string>& objects);

// Constant folding only; never reorders or drops non-constant structure.
Formula simplify(const Formula& f);

// Truth of a ground, non-modal formula under a valuation.  Throws
// NotStaticError if f contains K/O/[..]; MalformedFormulaError if non-ground.
bool eval_static(const Formula& f, const std::function<bool(const GroundAtom&)>& val);

std::set<std::string> free_variables(const Formula& f);
bool is_static(const Formula& f);  // no modal operators anywhere
bool mentions_atom(const Formula& f, const GroundAtom& a);

std::string to_string(const Formula& f);

}  // namespace fames

#endif
