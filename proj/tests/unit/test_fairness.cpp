#include <doctest.h>

#include <cstdlib>
#include <memory>
#include <string>

#include "fames/fairness.hpp"
#include "fames/forgetting.hpp"
#include "fames/parser.hpp"

using namespace fames;

namespace {

Theory load(const std::string& name) {
  const char* d = std::getenv("FAMES_DOMAINS");
  REQUIRE(d != nullptr);
  auto r = parse_theory_file(std::string(d) + "/" + name + ".fth");
  REQUIRE(r.ok());
  return *r.theory;
}

const Engine& loan() {
  static Engine eng(load("loan"));
  return eng;
}

Formula goal(const Engine& eng, const std::string& text) {
  auto r = parse_formula(text, eng.theory(), {"x"});
  REQUIRE_MESSAGE(r.ok(), format_diagnostics(r.diagnostics, text));
  return *r.formula;
}

std::vector<ActionInstance> plan(const Engine& eng, const std::string& text) {
  auto r = parse_plan(text, eng.theory());
  REQUIRE_MESSAGE(r.ok(), format_diagnostics(r.diagnostics, text));
  return *r.plan;
}

FairnessQuery query(const Engine& eng, const std::string& plan_text,
                    const std::string& goal_text, const std::string& prot) {
  FairnessQuery q;
  q.plan = plan(eng, plan_text);
  q.goal = goal(eng, goal_text);
  q.protected_pred = prot;
  return q;
}

}  // namespace

TEST_CASE("ftu: ignorance of the protected attribute along the plan") {
  const Engine& eng = loan();
  auto q = query(eng, "approve(n); approve(nprime)", "forall x. hasLoan(x)", "Male");
  FairnessVerdict v = check_ftu(eng, q);
  CHECK(v.holds);
  CHECK(v.notion == "ftu");
  CHECK_FALSE(v.failed_clause.has_value());

  q.plan = plan(eng, "isMale(n); approve(n); approve(nprime)");
  v = check_ftu(eng, q);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_clause == "ignorance-prefix");
  REQUIRE(v.diagnostics.has_value());
  CHECK(trace_str(v.diagnostics->failing_prefix) == "[isMale(n)]");
  REQUIRE_FALSE(v.diagnostics->instantiations.empty());
  CHECK(v.diagnostics->instantiations[0] == "x = n");  // the individual who became known

  q.plan = {};
  v = check_ftu(eng, q);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_clause == "knowledge-of-goal");

  // Closed-goal FTU on a single individual's loan.
  q = query(eng, "approve(n); approve(nprime)", "hasLoan(n)", "Male");
  CHECK(check_ftu(eng, q).holds);
}

TEST_CASE("ftu input validation") {
  const Engine& eng = loan();
  auto q = query(eng, "", "hasLoan(x)", "Male");
  CHECK_THROWS_AS(check_ftu(eng, q), MalformedFormulaError);  // open goal
  q = query(eng, "", "hasLoan(n)", "Male");
  q.individual = "n";
  CHECK_THROWS_AS(check_ftu(eng, q), MalformedFormulaError);  // ftu-ind instead
  q = query(eng, "", "hasLoan(n)", "Round");
  CHECK_THROWS_AS(check_ftu(eng, q), MalformedFormulaError);  // undeclared attribute
  // Any declared unary predicate can act as the attribute, fluents included.
  q = query(eng, "", "Male(n)", "hasLoan");
  CHECK_FALSE(check_ftu(eng, q).holds);
}

TEST_CASE("ftu-ind: the ignorance clause is about one individual") {
  const Engine& eng = loan();
  auto q = query(eng, "approve(n); approve(nprime)", "hasLoan(n)", "Male");
  q.individual = "n";
  CHECK(check_ftu_individual(eng, q).holds);

  q.plan = plan(eng, "isMale(nprime); approve(n)");
  CHECK(check_ftu_individual(eng, q).holds);  // only nprime's gender is learned

  // Sensing nprime teaches the agent that nprime is NOT male; the clause
  // guards knowledge of the positive attribute, which is never acquired.
  q.individual = "nprime";
  CHECK(check_ftu_individual(eng, q).holds);

  // Knowledge of the positive attribute does break it.
  q.plan = plan(eng, "isMale(n); approve(n)");
  q.individual = "n";
  FairnessVerdict v = check_ftu_individual(eng, q);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_clause == "ignorance-prefix");

  q.individual = "stranger";
  CHECK_THROWS_AS(check_ftu_individual(eng, q), MalformedFormulaError);
  q.individual.reset();
  CHECK_THROWS_AS(check_ftu_individual(eng, q), MalformedFormulaError);
}

TEST_CASE("proxy sets") {
  const Engine& eng = loan();
  auto ps = proxy_set(eng, "Male");
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].name == "Eligible");  // only n is eligible, and n is male

  Engine eton(load("loan-eton"));
  auto ps2 = proxy_set(eton, "Male");
  REQUIRE(ps2.size() == 2);
  CHECK(ps2[0].name == "Eligible");
  CHECK(ps2[1].name == "EtonForBoys");

  auto one = parse_theory(
      "domain one\nobjects: n\nrigid P/1\ninit_true: P(n)\ninit_known: true\n");
  REQUIRE(one.ok());
  Engine single(*one.theory);
  CHECK(proxy_set(single, "P").empty());
}

TEST_CASE("dp: parity of the goal across the protected split") {
  const Engine& eng = loan();
  auto q = query(eng, "approve(n); approve(nprime)", "hasLoan(x)", "Male");
  CHECK(check_dp(eng, q).holds);

  q.plan = plan(eng, "approve(n)");
  FairnessVerdict v = check_dp(eng, q);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_clause == "parity");
  REQUIRE(v.diagnostics.has_value());
  REQUIRE(v.diagnostics->counterexample_world.has_value());
  // approve(n) guarantees n's loan, so the parity violator is nprime.
  CHECK_FALSE(v.diagnostics->counterexample_world->value(GroundAtom{"hasLoan", {"nprime"}}));

  q.plan = plan(eng, "promote(n); promote(nprime)");
  q.goal = goal(eng, "highSalary(x)");
  CHECK_FALSE(check_dp(eng, q).holds);

  q.goal = goal(eng, "hasLoan(n)");
  CHECK_THROWS_AS(check_dp(eng, q), MalformedFormulaError);  // needs free x
}

TEST_CASE("strong dp adds knowing-whether") {
  const Engine& eng = loan();
  auto q = query(eng, "isMale(n); isMale(nprime); approve(n); approve(nprime)",
                 "hasLoan(x)", "Male");
  FairnessVerdict v = check_strong_dp(eng, q);
  CHECK(v.holds);
  CHECK(v.notion == "strong-dp");
  CHECK(check_dp(eng, q).holds);  // clause subset

  q.plan = plan(eng, "approve(n); approve(nprime)");
  v = check_strong_dp(eng, q);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_clause == "knows-whether");
}

TEST_CASE("ftu-dp combines parity with prefix ignorance") {
  const Engine& eng = loan();
  auto q = query(eng, "approve(n); approve(nprime)", "hasLoan(x)", "Male");
  CHECK(check_ftu_dp(eng, q).holds);

  q.plan = plan(eng, "approve(nprime); approve(n)");
  CHECK(check_ftu_dp(eng, q).holds);  // reversal too

  q.plan = plan(eng, "isMale(n); approve(n); approve(nprime)");
  FairnessVerdict v = check_ftu_dp(eng, q);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_clause == "ignorance-prefix");
  REQUIRE(v.diagnostics.has_value());
  CHECK(trace_str(v.diagnostics->failing_prefix) == "[isMale(n)]");
}

TEST_CASE("eo: equal opportunity among the qualified") {
  const Engine& eng = loan();
  auto q = query(eng, "promote(n); promote(nprime)", "highSalary(x)", "Male");
  q.criterion = "Eligible";
  FairnessVerdict v = check_eo(eng, q);
  CHECK(v.holds);
  CHECK(v.reading == "conditioned");

  q.eo_reading = "literal";
  v = check_eo(eng, q);
  CHECK_FALSE(v.holds);
  CHECK(v.reading == "literal");
  CHECK(v.failed_clause == "parity");

  q.eo_reading = "conditioned";
  q.plan = {};
  CHECK_FALSE(check_eo(eng, q).holds);

  q.criterion.reset();
  CHECK_THROWS_AS(check_eo(eng, q), MalformedFormulaError);
}

TEST_CASE("cf: counterfactual goal stability under a flipped attribute") {
  const Engine& eng = loan();
  auto q = query(eng, "approve(n)", "hasLoan(n)", "Male");
  q.individual = "n";
  FairnessVerdict v = check_cf(eng, q);
  CHECK(v.holds);
  REQUIRE(v.derived_theory.has_value());
  CHECK(v.derived_theory->find("forget") != std::string::npos);

  q = query(eng, "promote(nprime)", "highSalary(nprime)", "Male");
  q.individual = "nprime";
  v = check_cf(eng, q);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_clause == "knowledge-of-goal");

  q = query(eng, "promote(n)", "highSalary(n)", "Male");
  q.individual = "n";
  CHECK(check_cf(eng, q).holds);  // eligibility, not gender, drives the raise

  // With Male(n) forgotten the attribute value is undetermined.
  Engine undet(forget_theory(eng.theory(), {{"Male", {"n"}}}));
  q = query(undet, "approve(n)", "hasLoan(n)", "Male");
  q.individual = "n";
  v = check_cf(undet, q);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_clause == "attribute-undetermined");
}

TEST_CASE("equity notions") {
  const Engine& eng = loan();
  FairnessQuery q;
  q.protected_pred = "Male";
  q.positive_property = "Eligible";

  FairnessVerdict v = check_weak_equity(eng, q);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_clause == "equity");
  CHECK_FALSE(check_strong_equity(eng, q).holds);

  // Make everyone eligible: weak and strong equity both hold.
  auto all = parse_theory(
      "domain d\nobjects: n, nprime\nrigid Male/1\nrigid Eligible/1\n"
      "init_true: Male(n) & !Male(nprime) & Eligible(n) & Eligible(nprime)\n"
      "init_known: Eligible(n) & Eligible(nprime)\n");
  REQUIRE(all.ok());
  Engine everyone(*all.theory);
  CHECK(check_strong_equity(everyone, q).holds);
  CHECK(check_weak_equity(everyone, q).holds);

  // One individual: the integrity constraint cannot hold.
  auto single = parse_theory(
      "domain d\nobjects: n\nrigid Male/1\nrigid Eligible/1\n"
      "init_true: Male(n) & Eligible(n)\ninit_known: true\n");
  REQUIRE(single.ok());
  Engine alone(*single.theory);
  v = check_weak_equity(alone, q);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_clause == "integrity-violation");
}

TEST_CASE("equitable ftu evaluates over the forgotten theory when equity fails") {
  const Engine& eng = loan();
  auto q = query(eng, "promote(n); promote(nprime)", "forall x. highSalary(x)", "Male");
  q.positive_property = "Eligible";
  FairnessVerdict v = check_equitable_ftu(eng, q);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_clause == "knowledge-of-goal");  // promotions stop working once eligibility is open
  REQUIRE(v.derived_theory.has_value());
  CHECK(v.derived_theory->find("Eligible(n)") != std::string::npos);

  Engine make(load("loan-make"));
  auto q2 = query(make, "make(n); make(nprime); promote(n); promote(nprime)",
                  "forall x. highSalary(x)", "Male");
  q2.positive_property = "Eligible";
  v = check_equitable_ftu(make, q2);
  CHECK(v.holds);
  CHECK(v.notion == "equitable-ftu");

  // When weak equity already holds the verdict is plain FTU, no rewriting.
  auto all = parse_theory(
      "domain d\nobjects: n, nprime\nrigid Male/1\nrigid Eligible/1\nfluent hasLoan/1\n"
      "action approve(x)\nssa hasLoan(x): a == approve(x) | hasLoan(x)\n"
      "init_true: Male(n) & !Male(nprime) & Eligible(n) & Eligible(nprime)\n"
      "init_known: Eligible(n) & Eligible(nprime)\n");
  REQUIRE(all.ok());
  Engine everyone(*all.theory);
  auto q3 = query(everyone, "approve(n); approve(nprime)", "forall x. hasLoan(x)", "Male");
  q3.positive_property = "Eligible";
  v = check_equitable_ftu(everyone, q3);
  FairnessQuery plain = q3;
  FairnessVerdict ftu = check_ftu(everyone, plain);
  CHECK(v.holds == ftu.holds);
  CHECK_FALSE(v.derived_theory.has_value());
}

TEST_CASE("run_check dispatch and notion list") {
  const Engine& eng = loan();
  CHECK(fairness_notions().size() == 10);
  auto q = query(eng, "approve(n); approve(nprime)", "hasLoan(x)", "Male");
  FairnessVerdict v = run_check(eng, "dp", q);
  CHECK(v.holds);
  CHECK_THROWS_AS(run_check(eng, "parity", q), MalformedFormulaError);
}

TEST_CASE("checkers mirror their defining entailments") {
  const Engine& eng = loan();

  auto entails = [&](const std::string& text) {
    auto r = parse_formula(text, eng.theory());
    REQUIRE_MESSAGE(r.ok(), format_diagnostics(r.diagnostics, text));
    return eng.entails(*r.formula).holds;
  };

  for (const std::string plan_text :
       {"", "approve(n)", "approve(n); approve(nprime)", "isMale(n); approve(n); approve(nprime)",
        "promote(n); promote(nprime)", "isMale(n); isMale(nprime); approve(n); approve(nprime)"}) {
    CAPTURE(plan_text);
    const Engine& e = eng;
    auto q = query(e, plan_text, "hasLoan(x)", "Male");

    // DP == the single defining entailment.
    std::string after = plan_text.empty() ? "" : "[" + plan_text + "] ";
    bool dp_formula = entails(
        after + "K((forall x. Male(x) -> hasLoan(x)) & (forall x. !Male(x) -> hasLoan(x)))");
    CHECK(check_dp(e, q).holds == dp_formula);

    // FTU == goal knowledge plus prefix-wise ignorance.
    auto qf = query(e, plan_text, "forall x. hasLoan(x)", "Male");
    bool ftu_formula = entails(after + "K(forall x. hasLoan(x))");
    auto steps = plan(e, plan_text);
    for (size_t k = 0; k <= steps.size() && ftu_formula; ++k) {
      std::string prefix;
      for (size_t i = 0; i < k; ++i) prefix += (i ? "; " : "") + steps[i].str();
      std::string mod = k == 0 ? "" : "[" + prefix + "] ";
      ftu_formula = ftu_formula && entails(mod + "!(exists x. K(Male(x)))");
    }
    CHECK(check_ftu(e, qf).holds == ftu_formula);
  }
}
