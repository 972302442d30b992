#ifndef FAMES_ENGINE_HPP
#define FAMES_ENGINE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fames/theory.hpp"

namespace fames {

// A world, keyed by its initial valuation.  Values on later situations follow
// from the successor state axioms, which all worlds share.
class WorldState {
 public:
  WorldState() = default;
  WorldState(std::shared_ptr<const std::vector<GroundAtom>> table, uint64_t bits)
      : table_(std::move(table)), bits_(bits) {}

  bool value(const GroundAtom& a) const;
  uint64_t bits() const { return bits_; }
  const std::vector<GroundAtom>& atoms() const { return *table_; }
  const std::shared_ptr<const std::vector<GroundAtom>>& table() const { return table_; }
  std::vector<std::pair<std::string, bool>> to_pairs() const;  // table order
  std::string str() const;

  bool operator==(const WorldState& o) const { return bits_ == o.bits_; }

 private:
  std::shared_ptr<const std::vector<GroundAtom>> table_;
  uint64_t bits_ = 0;
};

using Trace = std::vector<ActionInstance>;

std::string trace_str(const Trace& z);

// Model triple (e, w, z).  w is not required to be a member of e.
struct EpistemicSituation {
  std::vector<WorldState> e;
  WorldState w;
  Trace z;
};

struct Diagnostics {
  std::optional<WorldState> counterexample_world;
  Trace failing_prefix;
  std::vector<std::string> instantiations;   // "x = nprime" along the failure path
  std::vector<std::string> subformula_path;  // readable trail from root to leaf
};

struct Verdict {
  bool holds = false;
  std::optional<Diagnostics> diagnostics;  // present iff !holds
  std::vector<std::string> warnings;
  std::string note;
};

struct EngineOptions {
  int atom_cap = 24;              // FAMES_ATOM_CAP overrides in the CLI
  long long trace_budget = 200000;  // bounded validity: total traces up to horizon
  int only_knowing_atom_cap = 20;   // O in queries ranges over all 2^n worlds
};

// Finite-domain evaluator for a single theory: enumerates the initial worlds
// W0 (models of init_true) and the epistemic set E (models of init_known; by
// only-knowing, e is exactly this set), progresses worlds on demand, and
// decides queries per the satisfaction clauses.
class Engine {
 public:
  explicit Engine(Theory th, EngineOptions opt = {});

  const Theory& theory() const { return th_; }
  const EngineOptions& options() const { return opt_; }
  const std::vector<GroundAtom>& atoms() const { return *table_; }
  const std::vector<ActionInstance>& ground_actions() const { return actions_; }
  const std::vector<WorldState>& initial_worlds() const { return w0_; }
  const std::vector<WorldState>& epistemic_worlds() const { return e_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  int atom_index(const GroundAtom& a) const;      // -1 if undeclared
  int action_index(const ActionInstance& a) const;  // -1 if undeclared
  WorldState world_from_bits(uint64_t bits) const;

  WorldState progress(const WorldState& s, const ActionInstance& a) const;
  WorldState state_after(const WorldState& s, const Trace& z) const;
  bool sf_value(const WorldState& w, const Trace& z, const ActionInstance& a) const;
  bool poss_value(const WorldState& w, const Trace& z, const ActionInstance& a) const;

  // Worlds of E compatible with w after z: executable along z and agreeing
  // with w on every sensing outcome.  Executability is checked on the
  // candidate only.
  std::vector<WorldState> compatible_worlds(const WorldState& w, const Trace& z) const;

  bool holds(const EpistemicSituation& sit, const Formula& f,
             std::vector<std::string>* warnings = nullptr) const;

  // Background-theory entailment: true iff the query holds at (E, w, <>) for
  // every w in W0.
  Verdict entails(const Formula& f) const;

  // Bounded substitute for validities under the always-operator: the query
  // must hold at (E, w, z) for every w in W0 and every trace z up to horizon.
  Verdict validity_bounded(const Formula& f, int horizon) const;

 private:
  struct CNode {
    enum class Op { Const, Atom, Not, And, Or, Implies, Iff, Knows, Only, After };
    Op op = Op::Const;
    bool cval = false;
    int atom = -1;
    std::vector<int> kids;
    std::vector<int> plan;               // action ids
    std::vector<std::string> labels;     // per-kid quantifier instantiations
    std::string origin;
  };
  struct CProg {
    std::vector<CNode> nodes;
    int root = -1;
    bool has_only = false;
  };
  struct Universe {
    std::vector<uint64_t> init;  // ascending initial valuations
    std::vector<char> in_e;
    bool full = false;
    std::unordered_map<uint64_t, int> index;
    int find(uint64_t bits) const;
    int size() const { return static_cast<int>(init.size()); }
  };
  struct Ctx {
    std::vector<uint64_t> state;
    std::vector<int> cls;
    std::vector<char> exec;
    std::vector<int> trace;
    int next_cls = 1;
  };
  class Evaluator;
  friend class Evaluator;

  int compile_static(const Formula& f, CProg& prog) const;
  int compile_query(const Formula& f, std::map<std::string, std::string>& env,
                    CProg& prog) const;
  CProg compile_ground_static(const Formula& f) const;  // grounds, then compiles
  bool eval_state(const CProg& prog, int node, uint64_t state) const;
  uint64_t progress_bits(uint64_t state, int action) const;
  bool sf_bit(uint64_t state, int action) const;
  bool poss_bit(uint64_t state, int action) const;

  Universe make_universe(const std::vector<uint64_t>& members,
                         const std::vector<uint64_t>& e_members,
                         bool need_full) const;
  Ctx initial_ctx(const Universe& u) const;
  Ctx step(const Universe& u, const Ctx& ctx, int action) const;
  Trace ids_to_trace(const std::vector<int>& ids) const;

  Theory th_;
  EngineOptions opt_;
  std::shared_ptr<const std::vector<GroundAtom>> table_;
  std::map<GroundAtom, int> atom_index_;
  std::vector<char> rigid_;  // per atom
  std::vector<ActionInstance> actions_;
  std::map<ActionInstance, int> action_index_;
  std::vector<std::vector<CProg>> ssa_progs_;  // [atom][action]; empty for rigids
  std::vector<CProg> sf_progs_;         // per action
  std::vector<CProg> poss_progs_;       // per action
  std::vector<WorldState> w0_;
  std::vector<WorldState> e_;
  std::vector<uint64_t> w0_bits_, e_bits_;
  std::vector<std::string> warnings_;
};

}  // namespace fames

#endif
