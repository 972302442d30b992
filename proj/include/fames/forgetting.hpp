#ifndef FAMES_FORGETTING_HPP
#define FAMES_FORGETTING_HPP

#include <cstdint>
#include <vector>

#include "fames/theory.hpp"

namespace fames {

// Lin-Reiter forgetting of ground atoms from a static formula:
// forget(f, p) = f[p/true] | f[p/false], folded over the set.  The formula is
// grounded over the given domain first.  At most 16 atoms may be forgotten.
Formula forget_formula(const Formula& f, const std::vector<GroundAtom>& atoms,
                       const std::vector<std::string>& objects);

// Semantic counterpart: closes a set of worlds (bitmask valuations) under
// flips of the given atom positions.  Returns a sorted, duplicate-free set.
std::vector<uint64_t> forget_worlds(const std::vector<uint64_t>& worlds,
                                    const std::vector<int>& atom_indices);

// Applies forget_formula to both initial formulas of a theory.  The atoms
// must be ground instances of declared predicates.
Theory forget_theory(const Theory& th, const std::vector<GroundAtom>& atoms);

}  // namespace fames

#endif
