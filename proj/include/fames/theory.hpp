#ifndef FAMES_THEORY_HPP
#define FAMES_THEORY_HPP

#include <optional>
#include <string>
#include <vector>

#include "fames/formula.hpp"

namespace fames {

// Successor state axiom for one fluent.  The right-hand side is a formula
// over the fluent's parameters and the distinguished action variable "a",
// mentioning only current-state atoms, term equalities and action-equality
// tests.
struct SsaDecl {
  std::string fluent;
  std::vector<std::string> params;
  Formula rhs;
};

// A basic action theory over a finite object domain.  init_true is what holds
// initially (sigma_0); init_known is all the agent only-knows initially
// (sigma_0'); neither needs to entail the other.
struct Theory {
  std::string name;
  std::vector<std::string> objects;       // declaration order is significant
  std::vector<PredicateDecl> predicates;  // declaration order
  std::vector<ActionDecl> actions;        // declaration order
  std::vector<SsaDecl> ssas;              // exactly one per fluent
  Formula init_true;                      // defaults to true
  Formula init_known;                     // defaults to true

  const PredicateDecl* find_predicate(const std::string& n) const;
  const ActionDecl* find_action(const std::string& n) const;
  const SsaDecl* find_ssa(const std::string& fluent) const;
  bool has_object(const std::string& n) const;

  // All ground atoms, ordered lexicographically by predicate name and then by
  // argument position in declared object order.  This ordering fixes world
  // enumeration and report output.
  std::vector<GroundAtom> ground_atoms() const;
  // All ground actions, in action declaration order with argument tuples in
  // declared object order.  This ordering fixes plan search.
  std::vector<ActionInstance> ground_action_instances() const;

  // Sensing / precondition schema for a ground action, instantiated with its
  // arguments (true when the schema was omitted).
  Formula sensing_formula(const ActionInstance& a) const;
  Formula precondition_formula(const ActionInstance& a) const;
  // SSA right-hand side for a ground fluent atom under a ground action.
  Formula ssa_formula(const GroundAtom& fluent_atom, const ActionInstance& a) const;

  std::string to_dsl() const;  // re-parseable theory text
};

std::vector<std::vector<std::string>> object_tuples(const std::vector<std::string>& objects,
                                                    int arity);

}  // namespace fames

#endif
