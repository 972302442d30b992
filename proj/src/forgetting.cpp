#include "fames/forgetting.hpp"

#include <algorithm>
#include <set>

namespace fames {

namespace {

constexpr size_t kForgetCap = 16;

std::vector<GroundAtom> dedupe(std::vector<GroundAtom> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

}  // namespace

Formula forget_formula(const Formula& f, const std::vector<GroundAtom>& atoms,
                       const std::vector<std::string>& objects) {
  if (!is_static(f))
    throw NotStaticError("forgetting applies to static formulas only");
  auto set = dedupe(atoms);
  if (set.size() > kForgetCap)
    throw ResourceError("forgetting " + std::to_string(set.size()) +
                        " atoms exceeds the cap of " + std::to_string(kForgetCap));
  Formula g = simplify(ground(f, objects));
  for (const auto& a : set) {
    if (!mentions_atom(g, a)) continue;
    g = simplify(Formula::disj2(replace_atom(g, a, true), replace_atom(g, a, false)));
  }
  return g;
}

std::vector<uint64_t> forget_worlds(const std::vector<uint64_t>& worlds,
                                    const std::vector<int>& atom_indices) {
  std::set<int> idx(atom_indices.begin(), atom_indices.end());
  if (idx.size() > kForgetCap)
    throw ResourceError("forgetting " + std::to_string(idx.size()) +
                        " atoms exceeds the cap of " + std::to_string(kForgetCap));
  uint64_t mask = 0;
  for (int i : idx) {
    if (i < 0 || i > 62)
      throw MalformedFormulaError("atom index out of range in forget_worlds");
    mask |= 1ull << i;
  }
  std::set<uint64_t> out;
  for (uint64_t w : worlds) {
    const uint64_t base = w & ~mask;
    uint64_t sub = mask;
    while (true) {
      out.insert(base | sub);
      if (sub == 0) break;
      sub = (sub - 1) & mask;
    }
  }
  return std::vector<uint64_t>(out.begin(), out.end());
}

Theory forget_theory(const Theory& th, const std::vector<GroundAtom>& atoms) {
  auto declared = th.ground_atoms();
  std::set<GroundAtom> table(declared.begin(), declared.end());
  for (const auto& a : atoms)
    if (!table.count(a))
      throw MalformedFormulaError("atom '" + a.str() + "' is not part of the theory");
  Theory out = th;
  out.init_true = forget_formula(th.init_true, atoms, th.objects);
  out.init_known = forget_formula(th.init_known, atoms, th.objects);
  return out;
}

}  // namespace fames
