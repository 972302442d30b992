#ifndef FAMES_TESTS_GENERATORS_HPP
#define FAMES_TESTS_GENERATORS_HPP

#include <random>
#include <vector>

#include "fames/theory.hpp"

namespace fames::testing {

struct GenOptions {
  int max_atoms = 6;
  int max_ground_actions = 4;
  // Keep every precondition `true`.  The validity suite includes the
  // knowledge/successor-state interaction, which is only sound when actions
  // are always executable.
  bool trivial_poss = true;
  bool allow_sensing = true;
};

// Small random theory; rejection-samples until the initial formula is
// satisfiable so entailment never degenerates.
Theory random_theory(std::mt19937& rng, const GenOptions& opt = {});

// Closed query over the theory's vocabulary.
Formula random_query(std::mt19937& rng, const Theory& th, int depth,
                     bool allow_modal, bool allow_only);

// Quantifier-free ground formula over the given atoms.
Formula random_ground_static(std::mt19937& rng,
                             const std::vector<GroundAtom>& atoms, int depth);

std::vector<ActionInstance> random_plan(std::mt19937& rng, const Theory& th,
                                        int max_len);

}  // namespace fames::testing

#endif
