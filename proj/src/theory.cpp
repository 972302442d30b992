#include "fames/theory.hpp"

#include <algorithm>
#include <sstream>

namespace fames {

const PredicateDecl* Theory::find_predicate(const std::string& n) const {
  for (const auto& p : predicates)
    if (p.name == n) return &p;
  return nullptr;
}

const ActionDecl* Theory::find_action(const std::string& n) const {
  for (const auto& a : actions)
    if (a.name == n) return &a;
  return nullptr;
}

const SsaDecl* Theory::find_ssa(const std::string& fluent) const {
  for (const auto& s : ssas)
    if (s.fluent == fluent) return &s;
  return nullptr;
}

bool Theory::has_object(const std::string& n) const {
  return std::find(objects.begin(), objects.end(), n) != objects.end();
}

std::vector<std::vector<std::string>> object_tuples(
    const std::vector<std::string>& objects, int arity) {
  std::vector<std::vector<std::string>> out{{}};
  for (int i = 0; i < arity; ++i) {
    std::vector<std::vector<std::string>> next;
    for (const auto& tuple : out)
      for (const auto& d : objects) {
        auto t = tuple;
        t.push_back(d);
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<GroundAtom> Theory::ground_atoms() const {
  std::vector<const PredicateDecl*> preds;
  for (const auto& p : predicates) preds.push_back(&p);
  std::sort(preds.begin(), preds.end(),
            [](const PredicateDecl* a, const PredicateDecl* b) {
              return a->name < b->name;
            });
  std::vector<GroundAtom> out;
  for (const auto* p : preds)
    for (auto& tuple : object_tuples(objects, p->arity))
      out.push_back(GroundAtom{p->name, std::move(tuple)});
  return out;
}

std::vector<ActionInstance> Theory::ground_action_instances() const {
  std::vector<ActionInstance> out;
  for (const auto& a : actions)
    for (auto& tuple : object_tuples(objects, a.arity))
      out.push_back(ActionInstance{a.name, std::move(tuple)});
  return out;
}

static Formula instantiate_schema(const Formula& schema,
                                  const std::vector<std::string>& params,
                                  const std::vector<std::string>& args) {
  Formula f = schema;
  for (size_t i = 0; i < params.size(); ++i) f = substitute(f, params[i], args[i]);
  return f;
}

Formula Theory::sensing_formula(const ActionInstance& a) const {
  const ActionDecl* d = find_action(a.action);
  if (!d) throw MalformedFormulaError("unknown action '" + a.action + "'");
  if (!d->sensing) return Formula::truth();
  return instantiate_schema(*d->sensing, d->params, a.args);
}

Formula Theory::precondition_formula(const ActionInstance& a) const {
  const ActionDecl* d = find_action(a.action);
  if (!d) throw MalformedFormulaError("unknown action '" + a.action + "'");
  if (!d->precondition) return Formula::truth();
  return instantiate_schema(*d->precondition, d->params, a.args);
}

Formula Theory::ssa_formula(const GroundAtom& fluent_atom,
                            const ActionInstance& a) const {
  const SsaDecl* s = find_ssa(fluent_atom.predicate);
  if (!s)
    throw MalformedFormulaError("no successor state axiom for '" +
                                fluent_atom.predicate + "'");
  Formula f = substitute_action(s->rhs, "a", a);
  return instantiate_schema(f, s->params, fluent_atom.args);
}

std::string Theory::to_dsl() const {
  std::ostringstream os;
  os << "domain " << name << "\n";
  if (!objects.empty()) {
    os << "objects: ";
    for (size_t i = 0; i < objects.size(); ++i) {
      if (i) os << ", ";
      os << objects[i];
    }
    os << "\n";
  }
  for (const auto& p : predicates)
    os << (p.rigid ? "rigid " : "fluent ") << p.name << "/" << p.arity << "\n";
  auto params = [](const std::vector<std::string>& ps) {
    if (ps.empty()) return std::string();
    std::string s = "(";
    for (size_t i = 0; i < ps.size(); ++i) {
      if (i) s += ", ";
      s += ps[i];
    }
    return s + ")";
  };
  for (const auto& a : actions) {
    os << "action " << a.name << params(a.params) << "\n";
    if (a.sensing)
      os << "sense " << a.name << params(a.params) << ": " << a.sensing->str() << "\n";
    if (a.precondition)
      os << "poss " << a.name << params(a.params) << ": " << a.precondition->str()
         << "\n";
  }
  for (const auto& s : ssas)
    os << "ssa " << s.fluent << params(s.params) << ": " << s.rhs.str() << "\n";
  os << "init_true: " << init_true.str() << "\n";
  os << "init_known: " << init_known.str() << "\n";
  return os.str();
}

}  // namespace fames
