#include <doctest.h>

#include <cstdlib>
#include <random>
#include <set>
#include <string>

#include "fames/engine.hpp"
#include "fames/forgetting.hpp"
#include "fames/parser.hpp"
#include "support/generators.hpp"

using namespace fames;
using fames::testing::random_ground_static;

namespace {

Theory load(const std::string& name) {
  const char* d = std::getenv("FAMES_DOMAINS");
  REQUIRE(d != nullptr);
  auto r = parse_theory_file(std::string(d) + "/" + name + ".fth");
  REQUIRE(r.ok());
  return *r.theory;
}

std::vector<uint64_t> models(const Formula& f, const Theory& th) {
  auto atoms = th.ground_atoms();
  Formula g = ground(f, th.objects);
  std::vector<uint64_t> out;
  for (uint64_t v = 0; v < (1ull << atoms.size()); ++v) {
    auto val = [&](const GroundAtom& a) {
      for (size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] == a) return ((v >> i) & 1) != 0;
      return false;
    };
    if (eval_static(g, val)) out.push_back(v);
  }
  return out;
}

std::vector<int> indices_of(const std::vector<GroundAtom>& set, const Theory& th) {
  auto atoms = th.ground_atoms();
  std::vector<int> idx;
  for (const auto& a : set)
    for (size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i] == a) idx.push_back(static_cast<int>(i));
  return idx;
}

}  // namespace

TEST_CASE("forgetting one atom, by construction") {
  Theory th = load("loan");
  GroundAtom male_n{"Male", {"n"}};
  Formula f = Formula::conj2(Formula::atom(male_n), Formula::atom(GroundAtom{"Eligible", {"n"}}));

  Formula kept = forget_formula(f, {male_n}, th.objects);
  CHECK(models(kept, th) == models(Formula::atom(GroundAtom{"Eligible", {"n"}}), th));
  CHECK_FALSE(mentions_atom(kept, male_n));

  Formula gone = forget_formula(
      Formula::disj2(Formula::atom(male_n), Formula::atom(GroundAtom{"Eligible", {"n"}})),
      {male_n}, th.objects);
  CHECK(models(gone, th).size() == 256);  // tautology over 8 atoms

  CHECK(forget_formula(f, {}, th.objects) == ground(f, th.objects));
}

TEST_CASE("forget_worlds closes under flips") {
  Theory th = load("loan");
  auto w0 = models(th.init_true, th);
  CHECK(w0.size() == 16);
  auto widened = forget_worlds(w0, indices_of({{"Male", {"n"}}}, th));
  CHECK(widened.size() == 32);
  CHECK(forget_worlds(w0, {}) == w0);
  // Sorted and duplicate-free.
  for (size_t i = 1; i < widened.size(); ++i) CHECK(widened[i - 1] < widened[i]);
}

TEST_CASE("forget_theory rewrites only the initial formulas") {
  Theory th = load("loan");
  Theory cf = forget_theory(th, {{"Male", {"n"}}});
  CHECK(models(cf.init_true, th) ==
        forget_worlds(models(th.init_true, th), indices_of({{"Male", {"n"}}}, th)));
  CHECK(to_string(cf.init_known) == to_string(ground(th.init_known, th.objects)));
  CHECK(cf.ssas.size() == th.ssas.size());
  for (size_t i = 0; i < th.ssas.size(); ++i) CHECK(cf.ssas[i].rhs == th.ssas[i].rhs);

  Theory eq = forget_theory(th, {{"Eligible", {"n"}}, {"Eligible", {"nprime"}}});
  CHECK(eq.init_known == Formula::truth());
  Engine eng(eq);
  CHECK(eng.epistemic_worlds().size() == 256);

  Theory same = forget_theory(th, {});
  CHECK(same.init_true == th.init_true);
  CHECK(same.init_known == th.init_known);

  CHECK_THROWS_AS(forget_theory(th, {{"Round", {"n"}}}), MalformedFormulaError);
  CHECK_THROWS_AS(forget_theory(th, {{"Male", {"someone"}}}), MalformedFormulaError);
}

TEST_CASE("forgetting rejects modal input and oversized sets") {
  Theory th = load("loan");
  CHECK_THROWS_AS(forget_formula(Formula::knows(Formula::truth()), {{"Male", {"n"}}}, th.objects),
                  NotStaticError);
  std::vector<GroundAtom> too_many;
  for (int i = 0; i < 17; ++i) too_many.push_back(GroundAtom{"Male", {"n" + std::to_string(i)}});
  CHECK_THROWS_AS(forget_formula(Formula::truth(), too_many, th.objects), ResourceError);
}

TEST_CASE("syntactic and semantic forgetting agree on random inputs") {
  std::mt19937 rng(20260814);
  Theory th = load("loan");
  auto atoms = th.ground_atoms();
  for (int trial = 0; trial < 200; ++trial) {
    Formula f = random_ground_static(rng, atoms, 3);
    std::vector<GroundAtom> s;
    std::set<size_t> chosen;
    int take = 1 + static_cast<int>(rng() % 3);
    while (static_cast<int>(chosen.size()) < take) chosen.insert(rng() % atoms.size());
    for (size_t i : chosen) s.push_back(atoms[i]);

    CAPTURE(trial);
    Formula syn = forget_formula(f, s, th.objects);
    auto semantic = forget_worlds(models(f, th), indices_of(s, th));
    CHECK(models(syn, th) == semantic);

    // Weakening.
    auto before = models(f, th);
    auto after = models(syn, th);
    CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));

    // Idempotence, as model sets.
    CHECK(models(forget_formula(syn, s, th.objects), th) == after);

    // Order independence: one-by-one, in both orders.
    Formula fwd = f, rev = f;
    for (size_t i = 0; i < s.size(); ++i) fwd = forget_formula(fwd, {s[i]}, th.objects);
    for (size_t i = s.size(); i-- > 0;) rev = forget_formula(rev, {s[i]}, th.objects);
    CHECK(models(fwd, th) == after);
    CHECK(models(rev, th) == after);
  }
}

TEST_CASE("forgotten knowledge still transfers to K") {
  std::mt19937 rng(7);
  Theory th = load("loan");
  auto atoms = th.ground_atoms();
  for (int trial = 0; trial < 50; ++trial) {
    GroundAtom p = atoms[rng() % atoms.size()];
    Theory forgotten = forget_theory(th, {p});
    // Any weakening of the forgotten knowledge base is classically entailed
    // by it; the proposition promises K then picks it up.
    Formula psi =
        simplify(Formula::disj2(ground(forgotten.init_known, th.objects),
                                random_ground_static(rng, atoms, 2)));
    auto base = models(forgotten.init_known, th);
    auto good = models(psi, th);
    REQUIRE(std::includes(good.begin(), good.end(), base.begin(), base.end()));

    Engine eng(forgotten);
    CAPTURE(trial);
    CHECK(eng.entails(Formula::knows(psi)).holds);
  }
}
