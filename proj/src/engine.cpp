#include "fames/engine.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fames {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string resolve_term(const Term& t, const std::map<std::string, std::string>& env) {
  if (!t.is_var()) return t.name;
  auto it = env.find(t.name);
  if (it == env.end())
    throw MalformedFormulaError("unbound variable '" + t.name + "'");
  return it->second;
}

ActionInstance resolve_action(const ActionTerm& at,
                              const std::map<std::string, std::string>& env) {
  ActionInstance inst;
  inst.action = at.action;
  inst.args.reserve(at.args.size());
  for (const auto& t : at.args) inst.args.push_back(resolve_term(t, env));
  return inst;
}

}  // namespace

// ---------------------------------------------------------------------------
// WorldState

bool WorldState::value(const GroundAtom& a) const {
  if (!table_) throw MalformedFormulaError("world has no theory attached");
  for (size_t i = 0; i < table_->size(); ++i)
    if ((*table_)[i] == a) return (bits_ >> i) & 1u;
  throw MalformedFormulaError("atom '" + a.str() + "' is not part of this theory");
}

std::vector<std::pair<std::string, bool>> WorldState::to_pairs() const {
  std::vector<std::pair<std::string, bool>> out;
  if (!table_) return out;
  out.reserve(table_->size());
  for (size_t i = 0; i < table_->size(); ++i)
    out.emplace_back((*table_)[i].str(), ((bits_ >> i) & 1u) != 0);
  return out;
}

std::string WorldState::str() const {
  std::string out = "{";
  auto pairs = to_pairs();
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += ", ";
    out += pairs[i].first + "=" + (pairs[i].second ? "1" : "0");
  }
  return out + "}";
}

std::string trace_str(const Trace& z) {
  std::vector<std::string> parts;
  parts.reserve(z.size());
  for (const auto& a : z) parts.push_back(a.str());
  return "[" + join(parts, "; ") + "]";
}

// ---------------------------------------------------------------------------
// Universe

int Engine::Universe::find(uint64_t bits) const {
  if (full) return static_cast<int>(bits);
  auto it = index.find(bits);
  return it == index.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------
// Construction

Engine::Engine(Theory th, EngineOptions opt) : th_(std::move(th)), opt_(opt) {
  auto atoms = th_.ground_atoms();
  const int n = static_cast<int>(atoms.size());
  const int cap = std::min(opt_.atom_cap, 62);
  if (n > cap)
    throw ResourceError("theory grounds to " + std::to_string(n) +
                        " atoms, exceeding the atom cap " + std::to_string(cap));
  table_ = std::make_shared<const std::vector<GroundAtom>>(std::move(atoms));
  rigid_.resize(n);
  for (int i = 0; i < n; ++i) {
    atom_index_[(*table_)[i]] = i;
    const PredicateDecl* pd = th_.find_predicate((*table_)[i].predicate);
    rigid_[i] = pd && pd->rigid;
  }
  actions_ = th_.ground_action_instances();
  for (size_t i = 0; i < actions_.size(); ++i)
    action_index_[actions_[i]] = static_cast<int>(i);

  CProg p0 = compile_ground_static(th_.init_true);
  CProg pk = compile_ground_static(th_.init_known);
  const uint64_t count = 1ull << n;
  for (uint64_t v = 0; v < count; ++v) {
    if (eval_state(p0, p0.root, v)) {
      w0_bits_.push_back(v);
      w0_.emplace_back(table_, v);
    }
    if (eval_state(pk, pk.root, v)) {
      e_bits_.push_back(v);
      e_.emplace_back(table_, v);
    }
  }
  if (w0_.empty())
    warnings_.push_back("initial theory is unsatisfiable; entailment is vacuous");
  if (e_.empty())
    warnings_.push_back(
        "known theory is unsatisfiable; the epistemic state is empty and K is vacuous");

  ssa_progs_.resize(n);
  for (int i = 0; i < n; ++i) {
    if (rigid_[i]) continue;
    ssa_progs_[i].reserve(actions_.size());
    for (const auto& a : actions_)
      ssa_progs_[i].push_back(compile_ground_static(th_.ssa_formula((*table_)[i], a)));
  }
  sf_progs_.reserve(actions_.size());
  poss_progs_.reserve(actions_.size());
  for (const auto& a : actions_) {
    sf_progs_.push_back(compile_ground_static(th_.sensing_formula(a)));
    poss_progs_.push_back(compile_ground_static(th_.precondition_formula(a)));
  }
}

int Engine::atom_index(const GroundAtom& a) const {
  auto it = atom_index_.find(a);
  return it == atom_index_.end() ? -1 : it->second;
}

int Engine::action_index(const ActionInstance& a) const {
  auto it = action_index_.find(a);
  return it == action_index_.end() ? -1 : it->second;
}

WorldState Engine::world_from_bits(uint64_t bits) const {
  const uint64_t limit = 1ull << table_->size();
  if (bits >= limit)
    throw MalformedFormulaError("bit pattern does not denote a world of this theory");
  return WorldState(table_, bits);
}

// ---------------------------------------------------------------------------
// Compilation to flat programs

Engine::CProg Engine::compile_ground_static(const Formula& f) const {
  CProg prog;
  prog.root = compile_static(simplify(ground(f, th_.objects)), prog);
  return prog;
}

int Engine::compile_static(const Formula& f, CProg& prog) const {
  auto push = [&prog](CNode nd) {
    prog.nodes.push_back(std::move(nd));
    return static_cast<int>(prog.nodes.size()) - 1;
  };
  CNode nd;
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      nd.op = CNode::Op::Const;
      nd.cval = f.kind() == Formula::Kind::True;
      return push(std::move(nd));
    case Formula::Kind::Atom: {
      GroundAtom g = f.atom();
      int idx = atom_index(g);
      if (idx < 0)
        throw MalformedFormulaError("atom '" + g.str() + "' is not part of the theory");
      nd.op = CNode::Op::Atom;
      nd.atom = idx;
      return push(std::move(nd));
    }
    case Formula::Kind::Not:
      nd.op = CNode::Op::Not;
      break;
    case Formula::Kind::And:
      nd.op = CNode::Op::And;
      break;
    case Formula::Kind::Or:
      nd.op = CNode::Op::Or;
      break;
    case Formula::Kind::Implies:
      nd.op = CNode::Op::Implies;
      break;
    case Formula::Kind::Iff:
      nd.op = CNode::Op::Iff;
      break;
    case Formula::Kind::TermEq:
    case Formula::Kind::ActionEq:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      // ground() resolves these
      throw MalformedFormulaError("formula was not fully grounded: " + f.str());
    default:
      throw NotStaticError("modal operator in a static context: " + f.str());
  }
  for (const auto& kid : f.children()) nd.kids.push_back(compile_static(kid, prog));
  return push(std::move(nd));
}

int Engine::compile_query(const Formula& f, std::map<std::string, std::string>& env,
                          CProg& prog) const {
  auto push = [&prog](CNode nd) {
    prog.nodes.push_back(std::move(nd));
    return static_cast<int>(prog.nodes.size()) - 1;
  };
  auto mk_const = [&](bool b) {
    CNode nd;
    nd.op = CNode::Op::Const;
    nd.cval = b;
    nd.origin = b ? "true" : "false";
    return push(std::move(nd));
  };
  CNode nd;
  switch (f.kind()) {
    case Formula::Kind::True:
      return mk_const(true);
    case Formula::Kind::False:
      return mk_const(false);
    case Formula::Kind::Atom: {
      GroundAtom g;
      g.predicate = f.pred();
      for (const auto& t : f.args()) g.args.push_back(resolve_term(t, env));
      int idx = atom_index(g);
      if (idx < 0)
        throw MalformedFormulaError("atom '" + g.str() + "' is not part of the theory");
      nd.op = CNode::Op::Atom;
      nd.atom = idx;
      nd.origin = g.str();
      return push(std::move(nd));
    }
    case Formula::Kind::TermEq:
      return mk_const(resolve_term(f.lhs(), env) == resolve_term(f.rhs(), env));
    case Formula::Kind::ActionEq: {
      if (f.aeq_lhs_is_var())
        throw MalformedFormulaError(
            "the action variable is only meaningful inside successor state axioms");
      return mk_const(resolve_action(f.aeq_lhs(), env) == resolve_action(f.aeq_rhs(), env));
    }
    case Formula::Kind::Not:
      nd.op = CNode::Op::Not;
      nd.origin = "!";
      break;
    case Formula::Kind::And:
      nd.op = CNode::Op::And;
      nd.origin = "&";
      break;
    case Formula::Kind::Or:
      nd.op = CNode::Op::Or;
      nd.origin = "|";
      break;
    case Formula::Kind::Implies:
      nd.op = CNode::Op::Implies;
      nd.origin = "->";
      break;
    case Formula::Kind::Iff:
      nd.op = CNode::Op::Iff;
      nd.origin = "<->";
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (th_.objects.empty())
        throw MalformedFormulaError("cannot ground quantifier over empty domain");
      bool is_forall = f.kind() == Formula::Kind::Forall;
      nd.op = is_forall ? CNode::Op::And : CNode::Op::Or;
      nd.origin = (is_forall ? "forall " : "exists ") + f.var();
      auto saved = env.find(f.var()) == env.end()
                       ? std::optional<std::string>()
                       : std::optional<std::string>(env[f.var()]);
      for (const auto& obj : th_.objects) {
        env[f.var()] = obj;
        nd.kids.push_back(compile_query(f.child(), env, prog));
        nd.labels.push_back(f.var() + " = " + obj);
      }
      if (saved)
        env[f.var()] = *saved;
      else
        env.erase(f.var());
      return push(std::move(nd));
    }
    case Formula::Kind::Knows:
      nd.op = CNode::Op::Knows;
      nd.origin = "K";
      break;
    case Formula::Kind::OnlyKnows:
      nd.op = CNode::Op::Only;
      nd.origin = "O";
      prog.has_only = true;
      break;
    case Formula::Kind::AfterAction:
    case Formula::Kind::AfterPlan: {
      nd.op = CNode::Op::After;
      std::vector<std::string> parts;
      for (const auto& at : f.plan()) {
        ActionInstance inst = resolve_action(at, env);
        int idx = action_index(inst);
        if (idx < 0)
          throw MalformedFormulaError("action '" + inst.str() +
                                      "' is not part of the theory");
        nd.plan.push_back(idx);
        parts.push_back(inst.str());
      }
      nd.origin = "[" + join(parts, "; ") + "]";
      nd.kids.push_back(compile_query(f.child(), env, prog));
      return push(std::move(nd));
    }
  }
  for (const auto& kid : f.children()) nd.kids.push_back(compile_query(kid, env, prog));
  return push(std::move(nd));
}

// ---------------------------------------------------------------------------
// State-level evaluation

bool Engine::eval_state(const CProg& prog, int node, uint64_t state) const {
  const CNode& nd = prog.nodes[node];
  switch (nd.op) {
    case CNode::Op::Const:
      return nd.cval;
    case CNode::Op::Atom:
      return (state >> nd.atom) & 1u;
    case CNode::Op::Not:
      return !eval_state(prog, nd.kids[0], state);
    case CNode::Op::And:
      for (int k : nd.kids)
        if (!eval_state(prog, k, state)) return false;
      return true;
    case CNode::Op::Or:
      for (int k : nd.kids)
        if (eval_state(prog, k, state)) return true;
      return false;
    case CNode::Op::Implies:
      return !eval_state(prog, nd.kids[0], state) || eval_state(prog, nd.kids[1], state);
    case CNode::Op::Iff:
      return eval_state(prog, nd.kids[0], state) == eval_state(prog, nd.kids[1], state);
    default:
      throw NotStaticError("modal operator in a static context");
  }
}

uint64_t Engine::progress_bits(uint64_t state, int action) const {
  uint64_t out = 0;
  for (size_t i = 0; i < table_->size(); ++i) {
    bool v = rigid_[i] ? ((state >> i) & 1u)
                       : eval_state(ssa_progs_[i][action], ssa_progs_[i][action].root, state);
    if (v) out |= 1ull << i;
  }
  return out;
}

bool Engine::sf_bit(uint64_t state, int action) const {
  return eval_state(sf_progs_[action], sf_progs_[action].root, state);
}

bool Engine::poss_bit(uint64_t state, int action) const {
  return eval_state(poss_progs_[action], poss_progs_[action].root, state);
}

// ---------------------------------------------------------------------------
// Public world operations

WorldState Engine::progress(const WorldState& s, const ActionInstance& a) const {
  if (s.table() != table_)
    throw MalformedFormulaError("world does not belong to this theory");
  int ai = action_index(a);
  if (ai < 0)
    throw MalformedFormulaError("action '" + a.str() + "' is not part of the theory");
  return WorldState(table_, progress_bits(s.bits(), ai));
}

WorldState Engine::state_after(const WorldState& s, const Trace& z) const {
  WorldState cur = s;
  for (const auto& a : z) cur = progress(cur, a);
  return cur;
}

bool Engine::sf_value(const WorldState& w, const Trace& z, const ActionInstance& a) const {
  int ai = action_index(a);
  if (ai < 0)
    throw MalformedFormulaError("action '" + a.str() + "' is not part of the theory");
  return sf_bit(state_after(w, z).bits(), ai);
}

bool Engine::poss_value(const WorldState& w, const Trace& z, const ActionInstance& a) const {
  int ai = action_index(a);
  if (ai < 0)
    throw MalformedFormulaError("action '" + a.str() + "' is not part of the theory");
  return poss_bit(state_after(w, z).bits(), ai);
}

std::vector<WorldState> Engine::compatible_worlds(const WorldState& w, const Trace& z) const {
  if (w.table() != table_)
    throw MalformedFormulaError("world does not belong to this theory");
  std::vector<int> ids;
  for (const auto& a : z) {
    int ai = action_index(a);
    if (ai < 0)
      throw MalformedFormulaError("action '" + a.str() + "' is not part of the theory");
    ids.push_back(ai);
  }
  std::vector<WorldState> out;
  for (const auto& cand : e_) {
    uint64_t sc = cand.bits(), sw = w.bits();
    bool ok = true;
    for (int ai : ids) {
      // executability is required of the candidate only; sensing must agree
      if (!poss_bit(sc, ai) || sf_bit(sc, ai) != sf_bit(sw, ai)) {
        ok = false;
        break;
      }
      sc = progress_bits(sc, ai);
      sw = progress_bits(sw, ai);
    }
    if (ok) out.push_back(cand);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Universes and trace contexts

Engine::Universe Engine::make_universe(const std::vector<uint64_t>& members,
                                       const std::vector<uint64_t>& e_members,
                                       bool need_full) const {
  Universe u;
  const int n = static_cast<int>(table_->size());
  if (need_full) {
    if (n > opt_.only_knowing_atom_cap)
      throw ResourceError("O in a query enumerates all worlds; " + std::to_string(n) +
                          " atoms exceed the cap " +
                          std::to_string(opt_.only_knowing_atom_cap));
    u.full = true;
    u.init.resize(1ull << n);
    for (uint64_t v = 0; v < u.init.size(); ++v) u.init[v] = v;
  } else {
    u.init = members;
    std::sort(u.init.begin(), u.init.end());
    u.init.erase(std::unique(u.init.begin(), u.init.end()), u.init.end());
    for (size_t i = 0; i < u.init.size(); ++i)
      u.index[u.init[i]] = static_cast<int>(i);
  }
  u.in_e.assign(u.size(), 0);
  for (uint64_t b : e_members) {
    int i = u.find(b);
    if (i >= 0) u.in_e[i] = 1;
  }
  return u;
}

Engine::Ctx Engine::initial_ctx(const Universe& u) const {
  Ctx ctx;
  ctx.state = u.init;
  ctx.cls.assign(u.size(), 0);
  ctx.exec.assign(u.size(), 1);
  ctx.next_cls = 1;
  return ctx;
}

Engine::Ctx Engine::step(const Universe& u, const Ctx& ctx, int action) const {
  Ctx out;
  const int n = u.size();
  out.state.resize(n);
  out.cls.resize(n);
  out.exec = ctx.exec;
  out.trace = ctx.trace;
  out.trace.push_back(action);
  out.next_cls = 0;
  std::map<std::pair<int, int>, int> renum;
  for (int v = 0; v < n; ++v) {
    bool sf = sf_bit(ctx.state[v], action);
    auto key = std::make_pair(ctx.cls[v], sf ? 1 : 0);
    auto it = renum.find(key);
    if (it == renum.end()) it = renum.emplace(key, out.next_cls++).first;
    out.cls[v] = it->second;
    if (!poss_bit(ctx.state[v], action)) out.exec[v] = 0;
    out.state[v] = progress_bits(ctx.state[v], action);
  }
  return out;
}

Trace Engine::ids_to_trace(const std::vector<int>& ids) const {
  Trace z;
  z.reserve(ids.size());
  for (int id : ids) z.push_back(actions_[id]);
  return z;
}

// ---------------------------------------------------------------------------
// Query evaluation over a universe

class Engine::Evaluator {
 public:
  using Bits = std::vector<char>;

  Evaluator(const Engine& eng, const CProg& prog, const Universe& u)
      : eng_(eng), prog_(prog), u_(u) {}

  Bits eval(int ni, const Ctx& ctx) {
    const CNode& nd = prog_.nodes[ni];
    const int n = u_.size();
    switch (nd.op) {
      case CNode::Op::Const:
        return Bits(n, nd.cval ? 1 : 0);
      case CNode::Op::Atom: {
        Bits b(n);
        for (int v = 0; v < n; ++v) b[v] = (ctx.state[v] >> nd.atom) & 1u;
        return b;
      }
      case CNode::Op::Not: {
        Bits b = eval(nd.kids[0], ctx);
        for (int v = 0; v < n; ++v) b[v] = !b[v];
        return b;
      }
      case CNode::Op::And: {
        Bits b(n, 1);
        for (int k : nd.kids) {
          Bits kb = eval(k, ctx);
          for (int v = 0; v < n; ++v) b[v] = b[v] && kb[v];
        }
        return b;
      }
      case CNode::Op::Or: {
        Bits b(n, 0);
        for (int k : nd.kids) {
          Bits kb = eval(k, ctx);
          for (int v = 0; v < n; ++v) b[v] = b[v] || kb[v];
        }
        return b;
      }
      case CNode::Op::Implies: {
        Bits a = eval(nd.kids[0], ctx), b = eval(nd.kids[1], ctx);
        for (int v = 0; v < n; ++v) a[v] = !a[v] || b[v];
        return a;
      }
      case CNode::Op::Iff: {
        Bits a = eval(nd.kids[0], ctx), b = eval(nd.kids[1], ctx);
        for (int v = 0; v < n; ++v) a[v] = a[v] == b[v];
        return a;
      }
      case CNode::Op::Knows: {
        Bits body = eval(nd.kids[0], ctx);
        std::vector<char> bad(ctx.next_cls, 0), nonempty(ctx.next_cls, 0);
        for (int v = 0; v < n; ++v) {
          if (u_.in_e[v] && ctx.exec[v]) {
            nonempty[ctx.cls[v]] = 1;
            if (!body[v]) bad[ctx.cls[v]] = 1;
          }
        }
        Bits out(n);
        bool vacuous = false;
        for (int v = 0; v < n; ++v) {
          out[v] = !bad[ctx.cls[v]];
          if (!nonempty[ctx.cls[v]]) vacuous = true;
        }
        if (vacuous)
          warn("K has no compatible epistemic world at trace " +
               trace_str(eng_.ids_to_trace(ctx.trace)) + "; it holds vacuously there");
        return out;
      }
      case CNode::Op::Only: {
        Bits body = eval(nd.kids[0], ctx);
        std::vector<char> ok(ctx.next_cls, 1);
        for (int v = 0; v < n; ++v)
          if (ctx.exec[v] && (u_.in_e[v] != 0) != (body[v] != 0)) ok[ctx.cls[v]] = 0;
        Bits out(n);
        for (int v = 0; v < n; ++v) out[v] = ok[ctx.cls[v]];
        return out;
      }
      case CNode::Op::After: {
        Ctx cur = ctx;
        for (int a : nd.plan) cur = eng_.step(u_, cur, a);
        return eval(nd.kids[0], cur);
      }
    }
    throw Error("unreachable");
  }

  // Walks the failure: at each node, record why its value differs from the
  // expected one, descending into the decisive child.  K descends into the
  // offending compatible world, After into the advanced trace.
  void explain(int ni, const Ctx& ctx, int v, bool expected, Diagnostics& d) {
    const CNode& nd = prog_.nodes[ni];
    Bits bits = eval(ni, ctx);
    const bool actual = bits[v] != 0;
    d.subformula_path.push_back(nd.origin + std::string(" = ") +
                                (actual ? "true" : "false"));
    if (actual == expected) return;
    switch (nd.op) {
      case CNode::Op::Const:
      case CNode::Op::Atom:
        return;
      case CNode::Op::Not:
        explain(nd.kids[0], ctx, v, !expected, d);
        return;
      case CNode::Op::And:
        if (!actual) {
          for (size_t i = 0; i < nd.kids.size(); ++i) {
            if (!eval(nd.kids[i], ctx)[v]) {
              if (!nd.labels.empty()) d.instantiations.push_back(nd.labels[i]);
              explain(nd.kids[i], ctx, v, true, d);
              return;
            }
          }
        }
        d.subformula_path.push_back("(all conjuncts hold)");
        return;
      case CNode::Op::Or:
        if (actual) {
          for (size_t i = 0; i < nd.kids.size(); ++i) {
            if (eval(nd.kids[i], ctx)[v]) {
              if (!nd.labels.empty()) d.instantiations.push_back(nd.labels[i]);
              explain(nd.kids[i], ctx, v, false, d);
              return;
            }
          }
        }
        d.subformula_path.push_back("(no disjunct holds)");
        return;
      case CNode::Op::Implies:
        if (!actual) {
          explain(nd.kids[1], ctx, v, true, d);
        } else if (!eval(nd.kids[0], ctx)[v]) {
          explain(nd.kids[0], ctx, v, true, d);
        } else {
          explain(nd.kids[1], ctx, v, false, d);
        }
        return;
      case CNode::Op::Iff: {
        bool l = eval(nd.kids[0], ctx)[v] != 0;
        if (!actual)
          explain(nd.kids[l ? 1 : 0], ctx, v, true, d);
        else
          d.subformula_path.push_back("(both sides agree)");
        return;
      }
      case CNode::Op::Knows: {
        if (!actual) {
          Bits body = eval(nd.kids[0], ctx);
          for (int v2 = 0; v2 < u_.size(); ++v2) {
            if (u_.in_e[v2] && ctx.exec[v2] && ctx.cls[v2] == ctx.cls[v] && !body[v2]) {
              d.counterexample_world = eng_.world_from_bits(u_.init[v2]);
              d.subformula_path.push_back("(fails in a compatible world)");
              explain(nd.kids[0], ctx, v2, true, d);
              return;
            }
          }
        }
        d.subformula_path.push_back("(holds over all compatible worlds)");
        return;
      }
      case CNode::Op::Only: {
        if (!actual) {
          Bits body = eval(nd.kids[0], ctx);
          for (int v2 = 0; v2 < u_.size(); ++v2) {
            if (ctx.exec[v2] && ctx.cls[v2] == ctx.cls[v] &&
                (u_.in_e[v2] != 0) != (body[v2] != 0)) {
              d.counterexample_world = eng_.world_from_bits(u_.init[v2]);
              if (u_.in_e[v2]) {
                d.subformula_path.push_back("(a known world falsifies the body)");
                explain(nd.kids[0], ctx, v2, true, d);
              } else {
                d.subformula_path.push_back("(the body holds outside the known set)");
                explain(nd.kids[0], ctx, v2, false, d);
              }
              return;
            }
          }
        }
        d.subformula_path.push_back("(the known set matches the body exactly)");
        return;
      }
      case CNode::Op::After: {
        Ctx cur = ctx;
        for (int a : nd.plan) cur = eng_.step(u_, cur, a);
        d.failing_prefix = eng_.ids_to_trace(cur.trace);
        explain(nd.kids[0], cur, v, expected, d);
        return;
      }
    }
  }

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  void warn(const std::string& msg) {
    if (seen_.insert(msg).second) warnings_.push_back(msg);
  }

  const Engine& eng_;
  const CProg& prog_;
  const Universe& u_;
  std::vector<std::string> warnings_;
  std::set<std::string> seen_;
};

// ---------------------------------------------------------------------------
// Entry points

bool Engine::holds(const EpistemicSituation& sit, const Formula& f,
                   std::vector<std::string>* warnings) const {
  if (sit.w.table() != table_)
    throw MalformedFormulaError("world does not belong to this theory");
  std::vector<uint64_t> members, eb;
  members.reserve(sit.e.size() + 1);
  for (const auto& we : sit.e) {
    if (we.table() != table_)
      throw MalformedFormulaError("world does not belong to this theory");
    members.push_back(we.bits());
    eb.push_back(we.bits());
  }
  members.push_back(sit.w.bits());

  CProg prog;
  std::map<std::string, std::string> env;
  prog.root = compile_query(f, env, prog);
  Universe u = make_universe(members, eb, prog.has_only);
  Ctx ctx = initial_ctx(u);
  for (const auto& a : sit.z) {
    int ai = action_index(a);
    if (ai < 0)
      throw MalformedFormulaError("action '" + a.str() + "' is not part of the theory");
    ctx = step(u, ctx, ai);
  }
  Evaluator ev(*this, prog, u);
  auto bits = ev.eval(prog.root, ctx);
  if (warnings)
    warnings->insert(warnings->end(), ev.warnings().begin(), ev.warnings().end());
  return bits[u.find(sit.w.bits())] != 0;
}

Verdict Engine::entails(const Formula& f) const {
  CProg prog;
  std::map<std::string, std::string> env;
  prog.root = compile_query(f, env, prog);
  std::vector<uint64_t> members = w0_bits_;
  members.insert(members.end(), e_bits_.begin(), e_bits_.end());
  Universe u = make_universe(members, e_bits_, prog.has_only);
  Ctx ctx = initial_ctx(u);
  Evaluator ev(*this, prog, u);
  auto bits = ev.eval(prog.root, ctx);

  Verdict out;
  out.holds = true;
  out.warnings = warnings_;
  for (uint64_t b : w0_bits_) {
    int i = u.find(b);
    if (!bits[i]) {
      out.holds = false;
      Diagnostics d;
      d.counterexample_world = world_from_bits(b);
      ev.explain(prog.root, ctx, i, true, d);
      out.diagnostics = std::move(d);
      break;
    }
  }
  out.warnings.insert(out.warnings.end(), ev.warnings().begin(), ev.warnings().end());
  return out;
}

Verdict Engine::validity_bounded(const Formula& f, int horizon) const {
  if (horizon < 0) throw MalformedFormulaError("horizon must be >= 0");
  long long total = 0, layer = 1;
  for (int k = 0; k <= horizon; ++k) {
    total += layer;
    if (total > opt_.trace_budget)
      throw ResourceError("bounded validity at horizon " + std::to_string(horizon) +
                          " would enumerate more than " +
                          std::to_string(opt_.trace_budget) + " traces");
    layer *= static_cast<long long>(actions_.size());
    if (layer > opt_.trace_budget + 1) layer = opt_.trace_budget + 1;
  }

  CProg prog;
  std::map<std::string, std::string> env;
  prog.root = compile_query(f, env, prog);
  std::vector<uint64_t> members = w0_bits_;
  members.insert(members.end(), e_bits_.begin(), e_bits_.end());
  Universe u = make_universe(members, e_bits_, prog.has_only);
  Evaluator ev(*this, prog, u);

  Verdict out;
  out.holds = true;
  out.note = "bounded validity (horizon " + std::to_string(horizon) + ")";
  out.warnings = warnings_;

  // Depth-first over traces: shorter prefixes are checked before their
  // extensions, actions in declaration order, so the reported counterexample
  // is deterministic.
  std::function<bool(const Ctx&, int)> rec = [&](const Ctx& ctx, int depth) -> bool {
    auto bits = ev.eval(prog.root, ctx);
    for (uint64_t b : w0_bits_) {
      int i = u.find(b);
      if (!bits[i]) {
        Diagnostics d;
        d.counterexample_world = world_from_bits(b);
        d.failing_prefix = ids_to_trace(ctx.trace);
        ev.explain(prog.root, ctx, i, true, d);
        out.holds = false;
        out.diagnostics = std::move(d);
        return false;
      }
    }
    if (depth == horizon) return true;
    for (size_t ai = 0; ai < actions_.size(); ++ai) {
      Ctx next = step(u, ctx, static_cast<int>(ai));
      if (!rec(next, depth + 1)) return false;
    }
    return true;
  };
  rec(initial_ctx(u), 0);
  out.warnings.insert(out.warnings.end(), ev.warnings().begin(), ev.warnings().end());
  return out;
}

}  // namespace fames
