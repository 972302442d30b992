#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>

#include "fames/engine.hpp"
#include "fames/parser.hpp"

using namespace fames;

namespace {

Theory load(const std::string& name) {
  const char* d = std::getenv("FAMES_DOMAINS");
  REQUIRE(d != nullptr);
  auto r = parse_theory_file(std::string(d) + "/" + name + ".fth");
  REQUIRE_MESSAGE(r.ok(), format_diagnostics(r.diagnostics, name));
  return *r.theory;
}

Formula q(const Engine& eng, const std::string& text) {
  auto r = parse_formula(text, eng.theory());
  REQUIRE_MESSAGE(r.ok(), format_diagnostics(r.diagnostics, text));
  return *r.formula;
}

std::set<uint64_t> bits_of(const std::vector<WorldState>& ws) {
  std::set<uint64_t> out;
  for (const auto& w : ws) out.insert(w.bits());
  return out;
}

}  // namespace

TEST_CASE("loan world enumeration") {
  Engine eng(load("loan"));
  CHECK(eng.atoms().size() == 8);
  CHECK(eng.initial_worlds().size() == 16);
  CHECK(eng.epistemic_worlds().size() == 64);
  CHECK(eng.warnings().empty());

  // Atom table: predicate name, then argument tuples in declared object order.
  CHECK(eng.atoms()[0] == GroundAtom{"Eligible", {"n"}});
  CHECK(eng.atoms()[1] == GroundAtom{"Eligible", {"nprime"}});
  CHECK(eng.atoms()[2] == GroundAtom{"Male", {"n"}});

  // W0 is ascending by valuation integer; every member satisfies init_true.
  const auto& w0 = eng.initial_worlds();
  for (size_t i = 1; i < w0.size(); ++i) CHECK(w0[i - 1].bits() < w0[i].bits());
  for (const auto& w : w0) {
    CHECK(w.value(GroundAtom{"Male", {"n"}}));
    CHECK_FALSE(w.value(GroundAtom{"Male", {"nprime"}}));
    CHECK(w.value(GroundAtom{"Eligible", {"n"}}));
  }
}

TEST_CASE("progression follows the successor state axioms") {
  Engine eng(load("loan"));
  WorldState w = eng.initial_worlds()[0];
  GroundAtom loan_n{"hasLoan", {"n"}};
  GroundAtom salary_np{"highSalary", {"nprime"}};
  REQUIRE_FALSE(w.value(loan_n));

  WorldState w2 = eng.progress(w, ActionInstance{"approve", {"n"}});
  CHECK(w2.value(loan_n));
  CHECK_FALSE(w2.value(GroundAtom{"hasLoan", {"nprime"}}));
  WorldState w3 = eng.progress(w2, ActionInstance{"deny", {"n"}});
  CHECK_FALSE(w3.value(loan_n));

  // promote only works on the eligible; nprime is not.
  WorldState w4 = eng.progress(w, ActionInstance{"promote", {"nprime"}});
  CHECK_FALSE(w4.value(salary_np));
  CHECK(eng.progress(w, ActionInstance{"promote", {"n"}}).value(GroundAtom{"highSalary", {"n"}}));

  // Rigid atoms never move, on any trace.
  Trace z = {{"approve", {"n"}}, {"promote", {"n"}}, {"deny", {"nprime"}}};
  WorldState end = eng.state_after(w, z);
  for (const auto& a : eng.atoms())
    if (a.predicate == "Male" || a.predicate == "Eligible")
      CHECK(end.value(a) == w.value(a));
}

TEST_CASE("compatibility narrows with sensing") {
  Engine eng(load("loan"));
  WorldState w = eng.initial_worlds()[0];

  CHECK(eng.compatible_worlds(w, {}).size() == 64);
  CHECK(eng.compatible_worlds(w, {{"approve", {"n"}}}).size() == 64);  // no sensing
  auto after_one = eng.compatible_worlds(w, {{"isMale", {"n"}}});
  CHECK(after_one.size() == 32);
  for (const auto& wp : after_one)
    CHECK(wp.value(GroundAtom{"Male", {"n"}}) == w.value(GroundAtom{"Male", {"n"}}));

  Trace both = {{"isMale", {"n"}}, {"isMale", {"nprime"}}};
  CHECK(eng.compatible_worlds(w, both).size() == 16);

  // Knowledge expansion: compatibility only shrinks along a trace.
  Trace z;
  auto prev = bits_of(eng.compatible_worlds(w, z));
  for (const ActionInstance& a :
       {ActionInstance{"isMale", {"nprime"}}, ActionInstance{"approve", {"n"}},
        ActionInstance{"isMale", {"n"}}}) {
    z.push_back(a);
    auto cur = bits_of(eng.compatible_worlds(w, z));
    CHECK(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
    prev = std::move(cur);
  }
}

TEST_CASE("entailment examples") {
  Engine eng(load("loan"));
  CHECK(eng.entails(q(eng, "Male(n)")).holds);
  CHECK(eng.entails(q(eng, "[approve(n); approve(nprime)] K(forall x. hasLoan(x))")).holds);

  Verdict v = eng.entails(q(eng, "K(Male(n))"));
  CHECK_FALSE(v.holds);
  REQUIRE(v.diagnostics.has_value());
  REQUIRE(v.diagnostics->counterexample_world.has_value());
  // The K-failure witness is an epistemic world where Male(n) is false.
  CHECK_FALSE(v.diagnostics->counterexample_world->value(GroundAtom{"Male", {"n"}}));

  // Sensing produces knowledge.
  CHECK(eng.entails(q(eng, "[isMale(n)] K(Male(n))")).holds);
  CHECK_FALSE(eng.entails(q(eng, "[isMale(nprime)] K(Male(n))")).holds);
  CHECK(eng.entails(q(eng, "[isMale(nprime)] K(!Male(nprime))")).holds);

  // The agent knows what it was told initially.
  CHECK(eng.entails(q(eng, "K(Eligible(n) & !Eligible(nprime))")).holds);
}

TEST_CASE("holds evaluates at explicit model triples") {
  Engine eng(load("loan"));
  WorldState w = eng.initial_worlds()[0];
  EpistemicSituation sit{eng.epistemic_worlds(), w, {}};
  CHECK(eng.holds(sit, q(eng, "Male(n)")));
  CHECK_FALSE(eng.holds(sit, q(eng, "K(Male(n))")));

  // Sensing done before the situation's trace end counts: K is evaluated with
  // compatibility accumulated from the initial situation.
  sit.z = {{"isMale", {"n"}}};
  CHECK(eng.holds(sit, q(eng, "K(Male(n))")));

  // Term equality under quantification.
  sit.z = {};
  CHECK(eng.holds(sit, q(eng, "exists x. x == nprime")));
  CHECK_FALSE(eng.holds(sit, q(eng, "n == nprime")));
}

TEST_CASE("no truth axiom: knowledge may be false") {
  Engine eng(load("belief-gap"));
  CHECK(eng.entails(q(eng, "K(Q(n))")).holds);
  CHECK_FALSE(eng.entails(q(eng, "Q(n)")).holds);
  CHECK(eng.entails(q(eng, "P(n)")).holds);
  CHECK_FALSE(eng.entails(q(eng, "K(P(n))")).holds);
}

TEST_CASE("introspection and quantifier exchange hold as bounded validities") {
  for (const std::string name : {"loan", "belief-gap"}) {
    Engine eng(load(name));
    Theory th = eng.theory();
    CAPTURE(name);

    // alpha/beta instantiated with theory-specific atoms.
    std::string alpha = name == "loan" ? "Eligible(n)" : "Q(n)";
    std::string beta = name == "loan" ? "Eligible(n) | Male(n)" : "P(n) | Q(n)";
    std::string open_alpha = name == "loan" ? "hasLoan(x)" : "Q(x)";

    auto query = [&](const std::string& text) {
      auto r = parse_formula(text, th);
      REQUIRE_MESSAGE(r.ok(), format_diagnostics(r.diagnostics, text));
      return *r.formula;
    };

    // 1. modus-ponens closure
    CHECK(eng.validity_bounded(
                 query("K(" + alpha + ") & K(" + alpha + " -> " + beta + ") -> K(" + beta + ")"), 2)
              .holds);
    // 2. positive introspection
    CHECK(eng.validity_bounded(query("K(" + alpha + ") -> K(K(" + alpha + "))"), 2).holds);
    // 3. negative introspection
    CHECK(eng.validity_bounded(query("!K(" + alpha + ") -> K(!K(" + alpha + "))"), 2).holds);
    // 4./5. Barcan directions
    CHECK(eng.validity_bounded(
                 query("(forall x. K(" + open_alpha + ")) -> K(forall x. " + open_alpha + ")"), 2)
              .holds);
    CHECK(eng.validity_bounded(
                 query("(exists x. K(" + open_alpha + ")) -> K(exists x. " + open_alpha + ")"), 2)
              .holds);

    Verdict v = eng.validity_bounded(query("true"), 2);
    CHECK(v.note.find("horizon 2") != std::string::npos);
  }
}

TEST_CASE("knowledge after a sensing action decomposes by the sensed value") {
  Engine eng(load("loan"));
  // [a]K(alpha) == (SF(a) & K(SF(a) -> [a]alpha)) | (!SF(a) & K(!SF(a) -> [a]alpha))
  std::string lhs = "[isMale(n)] K(Male(n))";
  std::string rhs =
      "(Male(n) & K(Male(n) -> [isMale(n)] Male(n)))"
      " | (!Male(n) & K(!Male(n) -> [isMale(n)] Male(n)))";
  CHECK(eng.validity_bounded(q(eng, "(" + lhs + ") <-> (" + rhs + ")"), 1).holds);
}

TEST_CASE("bounded validity reports counterexamples deterministically") {
  Engine eng(load("loan"));
  // True initially (hasLoan(n) is epistemically open) but falsified as soon
  // as approve(n) runs.
  Verdict v = eng.validity_bounded(q(eng, "!K(hasLoan(n))"), 2);
  CHECK_FALSE(v.holds);
  REQUIRE(v.diagnostics.has_value());
  // Shortest failing trace first; approve(n) is the first declared action.
  CHECK(trace_str(v.diagnostics->failing_prefix) == "[approve(n)]");
}

TEST_CASE("unsatisfiable initial formulas warn and entail vacuously") {
  auto r = parse_theory(
      "domain d\nobjects: n\nfluent F/1\nssa F(x): F(x)\n"
      "init_true: F(n) & !F(n)\ninit_known: true\n");
  REQUIRE(r.ok());
  Engine eng(*r.theory);
  CHECK(eng.initial_worlds().empty());
  REQUIRE_FALSE(eng.warnings().empty());
  CHECK(eng.warnings()[0].find("unsatisfiable") != std::string::npos);
  Verdict v = eng.entails(Formula::falsity());
  CHECK(v.holds);
  CHECK_FALSE(v.warnings.empty());
}

TEST_CASE("empty compatible set makes K vacuous, with a warning") {
  auto r = parse_theory(
      "domain d\nobjects: n\nfluent F/1\naction go\n"
      "poss go: false\nssa F(x): F(x)\n"
      "init_true: F(n)\ninit_known: true\n");
  REQUIRE(r.ok());
  Engine eng(*r.theory);
  Verdict v = eng.entails(*parse_formula("[go] K(false)", *r.theory).formula);
  CHECK(v.holds);
  bool warned = false;
  for (const auto& w : v.warnings) warned |= w.find("vacuous") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("only-knowing queries enumerate the full valuation space") {
  Engine eng(load("belief-gap"));
  CHECK(eng.entails(q(eng, "O(Q(n))")).holds);
  CHECK_FALSE(eng.entails(q(eng, "O(Q(n) & P(n))")).holds);
  CHECK_FALSE(eng.entails(q(eng, "O(true)")).holds);
  CHECK_FALSE(eng.entails(q(eng, "K(P(n))")).holds);

  Engine loan_eng(load("loan"));
  CHECK(loan_eng.entails(q(loan_eng, "O(Eligible(n) & !Eligible(nprime))")).holds);
  CHECK_FALSE(loan_eng.entails(q(loan_eng, "O(Eligible(n))")).holds);
}

TEST_CASE("resource limits") {
  std::string src = "domain big\nobjects: n\n";
  for (char c = 'A'; c <= 'Z'; ++c) {
    if (c == 'K' || c == 'O') continue;  // reserved operator names
    src += std::string("rigid ") + c + "/1\n";
  }
  src += "rigid AA/1\n";  // push past the 24-atom default cap
  src += "init_true: true\ninit_known: true\n";
  auto r = parse_theory(src);
  REQUIRE(r.ok());
  CHECK_THROWS_AS(Engine(*r.theory), ResourceError);

  Engine eng(load("loan"));
  EngineOptions tight;
  tight.trace_budget = 10;
  Engine small(load("loan"), tight);
  CHECK_THROWS_AS(small.validity_bounded(Formula::truth(), 3), ResourceError);

  // O over too many atoms is rejected rather than silently subset-checked.
  EngineOptions ocap;
  ocap.only_knowing_atom_cap = 4;
  Engine capped(load("loan"), ocap);
  CHECK_THROWS_AS(capped.entails(q(capped, "O(true)")), ResourceError);
}

TEST_CASE("queries reject the bare action variable and box") {
  Engine eng(load("loan"));
  auto r = parse_formula("a == approve(n)", eng.theory());
  REQUIRE_FALSE(r.ok());  // 'a' only lives inside ssa right-hand sides
}
