#ifndef FAMES_TESTS_ORACLE_HPP
#define FAMES_TESTS_ORACLE_HPP

#include <map>
#include <vector>

#include "fames/theory.hpp"

namespace fames::testing {

// Reference evaluator written independently of the engine: worlds are plain
// atom->bool maps, the universe is fully materialized, compatibility follows
// the recursive definition from the back of the trace, and K/O quantify over
// all valuations.  Deliberately slow and literal.
class Oracle {
 public:
  using World = std::map<GroundAtom, bool>;
  using Plan = std::vector<ActionInstance>;

  explicit Oracle(const Theory& th);

  const std::vector<World>& universe() const { return universe_; }
  std::vector<World> models_of(const Formula& static_f) const;
  const std::vector<World>& w0() const { return w0_; }
  const std::vector<World>& e() const { return e_; }

  bool eval_ground(const World& s, const Formula& f) const;  // static, ground
  World progress(const World& s, const ActionInstance& a) const;
  World state_after(const World& s, const Plan& z) const;
  bool sf(const World& w, const Plan& z, const ActionInstance& a) const;
  bool poss(const World& w, const Plan& z, const ActionInstance& a) const;
  bool compatible(const World& wp, const World& w, const Plan& z) const;

  // The satisfaction clauses, transcribed one by one.
  bool holds(const std::vector<World>& e, const World& w, const Plan& z,
             const Formula& f) const;
  bool entails(const Formula& f) const;
  bool valid_up_to(const Formula& f, int horizon) const;

 private:
  const Theory th_;
  std::vector<GroundAtom> atoms_;
  std::vector<World> universe_;
  std::vector<World> w0_, e_;
};

}  // namespace fames::testing

#endif
