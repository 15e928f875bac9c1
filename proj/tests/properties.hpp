#pragma once

#include <string>
#include <vector>

#include "lmplan/bench.hpp"
#include "lmplan/oracles.hpp"
#include "support.hpp"

namespace lmplan::testing {

struct SoundnessReport {
  std::size_t landmarks_checked = 0, mutexes_checked = 0, plans_checked = 0, graphs_checked = 0;
  std::vector<std::string> violations;
};

/// Every verified landmark, every mutex pair, every planner's plan against
/// the oracle's gn pairs, and cycle removal on the full LGG.
inline void check_soundness(const Task& t, const std::string& tag, SoundnessReport& rep) {
  auto fail = [&](const std::string& what) { rep.violations.push_back(tag + ": " + what); };
  Oracle oracle(t);

  const Lgg base = extract_landmarks(t);
  for (FactId f : base.nodes()) {
    if (!base.verified(f)) continue;
    ++rep.landmarks_checked;
    if (!oracle.landmark(f)) fail("not a landmark " + t.fact_name(f));
  }

  const auto mutexes = compute_mutexes(t);
  for (FactId x = 0; x < t.num_facts(); ++x)
    for (FactId y = x + 1; y < t.num_facts(); ++y)
      if (mutexes.query(x, y)) {
        ++rep.mutexes_checked;
        if (!oracle.inconsistent(x, y)) fail("not inconsistent " + t.fact_name(x) + " " + t.fact_name(y));
      }

  const Lgg full = add_orders(t, base, mutexes);
  ++rep.graphs_checked;
  if (!is_acyclic(full)) fail("cyclic LGG");
  for (const Edge& e : base.edges())
    if ((e.kind == EdgeKind::GreedyNecessary || e.kind == EdgeKind::LookaheadNecessary) && !full.edges().count(e))
      fail("lost edge " + t.fact_name(e.from) + " -> " + t.fact_name(e.to));

  std::vector<Plan> plans;
  for (PlannerKind k : {PlannerKind::Bfs, PlannerKind::Gbfs}) {
    if (auto r = run_planner(k, t); r.solved()) plans.push_back(r.plan);
    auto trace = run_control(t, full, make_base_planner(k));
    if (trace.outcome == ControlOutcome::Solved) plans.push_back(trace.plan);
  }
  std::vector<FactSet> gn_preds;
  gn_preds.reserve(t.num_facts());
  for (FactId lp = 0; lp < t.num_facts(); ++lp) gn_preds.push_back(oracle.greedy_necessary_predecessors(lp));
  for (const Plan& p : plans) {
    ++rep.plans_checked;
    if (!validate_plan(t, p)) fail("invalid plan");
    for (FactId lp = 0; lp < t.num_facts(); ++lp)
      gn_preds[lp].for_each([&](FactId l) {
        if (!plan_obeys_order(t, p, l, lp)) fail("plan breaks " + t.fact_name(l) + " ->gn " + t.fact_name(lp));
      });
  }
}

}  // namespace lmplan::testing
