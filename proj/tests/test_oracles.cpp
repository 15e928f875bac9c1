#include "doctest.h"
#include "lmplan/oracles.hpp"
#include "support.hpp"

using namespace lmplan;
using namespace lmplan::testing;

TEST_CASE("enumerate: seven-fact task") {
  const Task t = seven_fact();
  const StateSpace sp = enumerate(t);
  // {p1}, {l p2}, {lp p2p}, {lp p3p}, {l p3}, {l lp}
  CHECK(sp.size() == 6);
  CHECK(sp.states[0] == t.init());
  int goals = 0;
  for (auto g : sp.is_goal) goals += g;
  CHECK(goals == 1);
}

TEST_CASE("enumerate: no applicable action gives one state") {
  const Task t = ground_text(R"((define (domain d) (:predicates (p) (q))
      (:action a :parameters () :precondition (q) :effect (p))))",
                             "(define (problem x) (:domain d) (:init (p)) (:goal (p)))");
  CHECK(enumerate(t).size() == 1);
}

TEST_CASE("enumerate: cap overflow is reported") {
  const Task t = blocks(10, BlocksVariant::Arm, 7);
  CHECK_THROWS_AS(enumerate(t, 10'000), CapExceeded);
  CHECK_THROWS_AS(enumerate(t, 0), std::invalid_argument);
}

TEST_CASE("oracle_landmark") {
  const Task road = roadmap();
  CHECK_FALSE(oracle_landmark(road, road.fact_id("(at e)")));
  CHECK(oracle_landmark(road, road.fact_id("(at d)")));
  CHECK(oracle_landmark(road, road.fact_id("(at a)")));

  const Task f = four_blocks();
  CHECK(oracle_landmark(f, f.fact_id("(clear c)")));
  CHECK(oracle_landmark(f, f.fact_id("(on b d)")));
  CHECK_FALSE(oracle_landmark(f, f.fact_id("(holding a)")));
}

TEST_CASE("oracle_landmark: unsolvable task warns") {
  const Task t = ground_text(R"((define (domain d) (:predicates (p) (q) (r))
      (:action a :parameters () :precondition (p) :effect (and (q) (not (p))))
      (:action b :parameters () :precondition (p) :effect (and (r) (not (p))))))",
                             "(define (problem x) (:domain d) (:init (p)) (:goal (and (q) (r))))");
  Oracle o(t);
  CHECK_FALSE(o.solvable());
  CHECK(o.landmark(t.fact_id("(q)")));
  CHECK(o.warnings().empty());
  CHECK(o.landmark(t.fact_id("(r)")));
}

TEST_CASE("oracle_n and oracle_gn") {
  const Task f = four_blocks();
  const FactId cd = f.fact_id("(clear d)"), cc = f.fact_id("(clear c)");
  CHECK(oracle_gn(f, cd, cc));
  CHECK_FALSE(oracle_n(f, cd, cc));

  // L' initially true
  const FactId ae = f.fact_id("(arm-empty)");
  CHECK_FALSE(oracle_gn(f, cd, ae));
  CHECK_FALSE(oracle_n(f, cd, ae));

  const Task road = roadmap();
  CHECK_FALSE(oracle_gn(road, road.fact_id("(at e)"), road.fact_id("(at d)")));
  // at(e) can first be entered from d, reached via b and c
  CHECK_FALSE(oracle_gn(road, road.fact_id("(at a)"), road.fact_id("(at e)")));
}

TEST_CASE("necessary implies greedy necessary") {
  for (std::uint64_t k = 0; k < 6; ++k) {
    const Task t = micro_instance(k);
    Oracle o(t);
    for (FactId lp = 0; lp < t.num_facts(); ++lp) {
      const FactSet n = o.necessary_predecessors(lp);
      CHECK(n.subset_of(o.greedy_necessary_predecessors(lp)));
    }
  }
}

TEST_CASE("oracle_reasonable") {
  const Task t = seven_fact();
  const FactId l = t.fact_id("(l)"), lp = t.fact_id("(lp)");
  CHECK(oracle_reasonable(t, l, lp));
  CHECK(oracle_reasonable(t, lp, l));

  const Task f = four_blocks();
  Oracle o(f);
  const auto v = o.reasonable(f.fact_id("(clear c)"), f.fact_id("(on b d)"));
  CHECK(v.holds());
  CHECK_FALSE(v.vacuous);
  // With C already on A, B can still go onto D without disturbing C.
  CHECK_FALSE(o.reasonable(f.fact_id("(on b d)"), f.fact_id("(on c a)")).holds());
}

TEST_CASE("oracle_reasonable: empty S is vacuous") {
  const Task t = seven_fact();
  Oracle o(t);
  // P1 holds initially, so no state has L' achieved while P1 was never true.
  const auto v = o.reasonable(t.fact_id("(p1)"), t.fact_id("(lp)"));
  CHECK(v.vacuous);
  CHECK(v.holds());
}

TEST_CASE("oracle_inconsistent") {
  const Task f = four_blocks();
  CHECK(oracle_inconsistent(f, f.fact_id("(clear d)"), f.fact_id("(on b d)")));
  CHECK_FALSE(oracle_inconsistent(f, f.fact_id("(clear a)"), f.fact_id("(clear b)")));

  const Task s = six_fact();
  CHECK_FALSE(oracle_inconsistent(s, s.fact_id("(l)"), s.fact_id("(lp)")));
  CHECK(oracle_inconsistent(s, s.fact_id("(x)"), s.fact_id("(lp)")));
}

TEST_CASE("solution_plans: seven-fact task has two plans of length 3") {
  const Task t = seven_fact();
  CHECK(solution_plans(t, 1).empty());
  CHECK(solution_plans(t, 2).empty());
  const auto plans = solution_plans(t, 3);
  REQUIRE(plans.size() == 2);
  for (const Plan& p : plans) CHECK(validate_plan(t, p));
}
