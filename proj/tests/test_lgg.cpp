#include <set>

#include "doctest.h"
#include "lmplan/lgg.hpp"
#include "support.hpp"

using namespace lmplan;
using namespace lmplan::testing;

namespace {

std::set<std::string> node_names(const Task& t, const Lgg& g) {
  std::set<std::string> out;
  for (FactId f : g.nodes()) out.insert(t.fact_name(f));
  return out;
}

bool has(const Task& t, const Lgg& g, const char* from, const char* to, EdgeKind k) {
  return g.has_edge(t.fact_id(from), t.fact_id(to), k);
}

}  // namespace

TEST_CASE("Lgg container") {
  Lgg g;
  CHECK(g.add_node(1));
  CHECK_FALSE(g.add_node(1));
  g.add_node(2);
  g.add_node(3, true);
  CHECK(g.verified(3));
  CHECK_FALSE(g.verified(1));
  CHECK_THROWS_AS(g.add_edge(1, 1, EdgeKind::GreedyNecessary), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(1, 9, EdgeKind::GreedyNecessary), std::invalid_argument);
  CHECK(g.add_edge(1, 2, EdgeKind::GreedyNecessary));
  CHECK_FALSE(g.add_edge(1, 2, EdgeKind::GreedyNecessary));
  g.add_edge(1, 2, EdgeKind::Reasonable);
  g.add_edge(3, 2, EdgeKind::LookaheadNecessary);
  CHECK(g.has_any_edge(1, 2));
  CHECK_FALSE(g.has_any_edge(2, 1));
  CHECK(g.in_degree(2) == 3);
  CHECK(g.out_edges(1).size() == 2);
  CHECK(g.count_edges(EdgeKind::Reasonable) == 1);
  g.remove_node(1);
  CHECK(g.num_edges() == 1);
  CHECK(g.in_edges(2).front().from == 3);
  CHECK(parse_edge_kind(to_string(EdgeKind::ObedientReasonable)) == EdgeKind::ObedientReasonable);
  CHECK_THROWS_AS(parse_edge_kind("x"), std::invalid_argument);
}

TEST_CASE("four-block candidate generation") {
  const Task t = four_blocks();
  const auto rpg = build_rpg(t, RpgMode::GoalsFirstReached);
  REQUIRE(rpg);
  const Lgg g = generate_candidates(t, *rpg);
  CHECK(node_names(t, g) == std::set<std::string>{"(on c a)", "(on b d)", "(holding c)", "(clear a)",
                                                  "(holding b)", "(clear d)", "(clear c)", "(on-table c)",
                                                  "(arm-empty)", "(on-table b)", "(clear b)", "(on d c)"});
  const auto gn = EdgeKind::GreedyNecessary;
  CHECK(has(t, g, "(holding c)", "(on c a)", gn));
  CHECK(has(t, g, "(clear a)", "(on c a)", gn));
  CHECK(has(t, g, "(holding b)", "(on b d)", gn));
  CHECK(has(t, g, "(clear d)", "(on b d)", gn));
  CHECK(has(t, g, "(clear c)", "(holding c)", gn));
  CHECK(has(t, g, "(on-table c)", "(holding c)", gn));
  CHECK(has(t, g, "(arm-empty)", "(holding c)", gn));
  CHECK(has(t, g, "(on-table b)", "(holding b)", gn));
  CHECK(has(t, g, "(clear b)", "(holding b)", gn));
  CHECK(has(t, g, "(on d c)", "(clear c)", gn));
  CHECK(has(t, g, "(clear d)", "(clear c)", gn));
  CHECK(g.num_edges() == g.count_edges(gn));
}

TEST_CASE("four-block verification removes nothing") {
  const Task t = four_blocks();
  const Lgg lgg = extract_landmarks(t);
  CHECK(lgg.num_nodes() == 12);
  for (FactId f : lgg.nodes()) CHECK(lgg.verified(f));
}

TEST_CASE("road map candidates and verification") {
  const Task t = roadmap();
  const auto rpg = build_rpg(t, RpgMode::GoalsFirstReached);
  REQUIRE(rpg);
  const Lgg cand = lookahead_extend(t, *rpg, generate_candidates(t, *rpg));
  CHECK(node_names(t, cand) == std::set<std::string>{"(at a)", "(at e)", "(at d)"});
  CHECK(cand.num_edges() == 2);
  CHECK(has(t, cand, "(at a)", "(at e)", EdgeKind::GreedyNecessary));
  CHECK(has(t, cand, "(at e)", "(at d)", EdgeKind::GreedyNecessary));

  const Lgg lgg = verify_landmarks(t, cand);
  CHECK(node_names(t, lgg) == std::set<std::string>{"(at a)", "(at d)"});
  CHECK(lgg.num_edges() == 0);
  CHECK(lgg == extract_landmarks(t));
}

TEST_CASE("without the level test only provable structure remains") {
  const Task t = roadmap();
  const Lgg lgg = extract_landmarks(t, {.use_level_test = false, .use_lookahead = true});
  CHECK(node_names(t, lgg) == std::set<std::string>{"(at d)"});

  const Task f = four_blocks();
  const Lgg safe = extract_landmarks(f, {.use_level_test = false, .use_lookahead = false});
  // holding(c) still requires clear(c) via every achiever
  CHECK(safe.has_node(f.fact_id("(holding c)")));
  CHECK(safe.has_node(f.fact_id("(clear a)")));
}

TEST_CASE("lookahead on two-plane Logistics") {
  const Task t = logistics_2planes();
  const FactId origin = t.fact_id("(at pack1 la-airport)");
  const FactId dest = t.fact_id("(at pack1 bos-airport)");
  const Lgg with = extract_landmarks(t);
  CHECK(with.has_edge(origin, dest, EdgeKind::LookaheadNecessary));
  CHECK(with.verified(origin));

  const Lgg without = extract_landmarks(t, {.use_level_test = true, .use_lookahead = false});
  CHECK_FALSE(without.has_node(origin));
  CHECK(without.count_edges(EdgeKind::LookaheadNecessary) == 0);
}

TEST_CASE("relaxed-unsolvable task yields only the goals") {
  const Task t = ground_text(R"((define (domain d) (:predicates (p) (q) (s))
      (:action a :parameters () :precondition (p) :effect (q))))",
                             "(define (problem x) (:domain d) (:init (p)) (:goal (and (q) (s))))");
  const Lgg lgg = extract_landmarks(t);
  CHECK(lgg.num_nodes() == 2);
  CHECK(lgg.num_edges() == 0);
}
