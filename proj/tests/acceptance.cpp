// Acceptance run: one PASS/FAIL line per criterion, then a summary.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "properties.hpp"

using namespace lmplan;
using namespace lmplan::testing;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::set<std::string> names(const Task& t, const Lgg& g) {
  std::set<std::string> out;
  for (FactId f : g.nodes()) out.insert(t.fact_name(f));
  return out;
}

Verdict four_block_lgg() {
  const auto t0 = Clock::now();
  const Task f = four_blocks();
  const Lgg verified = extract_landmarks(f);
  const auto rpg = build_rpg(f, RpgMode::GoalsFirstReached);
  const Lgg candidates = generate_candidates(f, *rpg);
  const std::set<std::string> expected{"(on c a)",    "(on b d)",     "(holding c)", "(clear a)",
                                       "(holding b)", "(clear d)",    "(clear c)",   "(on-table c)",
                                       "(arm-empty)", "(on-table b)", "(clear b)",   "(on d c)"};
  const bool nodes = names(f, verified) == expected;
  const bool nothing_removed = names(f, candidates) == names(f, verified);
  const bool gn = verified.has_edge(f.fact_id("(clear d)"), f.fact_id("(clear c)"), EdgeKind::GreedyNecessary);
  const Lgg ordered = add_reasonable_orders(f, verified, compute_mutexes(f));
  const bool r = ordered.has_edge(f.fact_id("(clear c)"), f.fact_id("(on b d)"), EdgeKind::Reasonable);
  const double secs = since(t0);
  std::ostringstream d;
  d << "nodes=" << verified.num_nodes() << " exact=" << nodes << " nothing_removed=" << nothing_removed
    << " clear(d)->gn clear(c)=" << gn << " clear(c)->r on(b d)=" << r << " " << secs << "s";
  return {nodes && nothing_removed && gn && r && secs < 1.0, d.str()};
}

Verdict roadmap_case() {
  const auto t0 = Clock::now();
  const Task t = roadmap();
  const auto rpg = build_rpg(t, RpgMode::GoalsFirstReached);
  const Lgg cand = lookahead_extend(t, *rpg, generate_candidates(t, *rpg));
  const bool cand_ok = cand.num_nodes() == 3 && cand.num_edges() == 2 &&
                       cand.has_edge(t.fact_id("(at a)"), t.fact_id("(at e)"), EdgeKind::GreedyNecessary) &&
                       cand.has_edge(t.fact_id("(at e)"), t.fact_id("(at d)"), EdgeKind::GreedyNecessary);
  const Lgg lgg = verify_landmarks(t, cand);
  const bool ver_ok = names(t, lgg) == std::set<std::string>{"(at a)", "(at d)"} && lgg.num_edges() == 0;
  const double secs = since(t0);
  std::ostringstream d;
  d << "candidates_exact=" << cand_ok << " verified_exact=" << ver_ok << " " << secs << "s";
  return {cand_ok && ver_ok && secs < 1.0, d.str()};
}

Verdict oracle_fixtures() {
  const auto t0 = Clock::now();
  const Task s7 = seven_fact();
  const FactId l = s7.fact_id("(l)"), lp = s7.fact_id("(lp)");
  const bool both = oracle_reasonable(s7, l, lp) && oracle_reasonable(s7, lp, l);
  const auto plans = solution_plans(s7, 3);
  const double secs7 = since(t0);

  const auto t1 = Clock::now();
  const Task s6 = six_fact();
  const FactId l6 = s6.fact_id("(l)"), lp6 = s6.fact_id("(lp)");
  const auto cond = interference_conditions(s6, compute_mutexes(s6), extract_landmarks(s6), l6, lp6);
  const bool only2 = cond == InterferenceConditions("0010");
  const bool consistent = !oracle_inconsistent(s6, l6, lp6);
  const double secs6 = since(t1);
  std::ostringstream d;
  d << "reasonable_both=" << both << " plans_len3=" << plans.size() << " conditions=" << cond.to_string()
    << " (bit 0 = condition 1) inconsistent=" << !consistent << " " << secs7 << "s/" << secs6 << "s";
  return {both && plans.size() == 2 && only2 && consistent && secs7 < 1.0 && secs6 < 1.0, d.str()};
}

Verdict soundness() {
  const auto t0 = Clock::now();
  SoundnessReport rep;
  std::size_t instances = 0, max_states = 0;
  for (std::uint64_t k = 0; k < 210; ++k) {
    const Task t = micro_instance(k + 100);
    max_states = std::max(max_states, enumerate(t).size());
    check_soundness(t, "micro " + std::to_string(k + 100), rep);
    ++instances;
  }
  const double secs = since(t0);
  std::ostringstream d;
  d << instances << " instances, max_states=" << max_states << " landmarks=" << rep.landmarks_checked
    << " mutexes=" << rep.mutexes_checked << " plans=" << rep.plans_checked << " graphs=" << rep.graphs_checked
    << " violations=" << rep.violations.size() << " " << secs << "s";
  for (std::size_t i = 0; i < rep.violations.size() && i < 5; ++i) d << "\n    " << rep.violations[i];
  return {rep.violations.empty() && max_states <= 200'000 && secs < 600, d.str()};
}

Verdict control_without_subtask_failure() {
  const auto t0 = Clock::now();
  std::size_t runs = 0, subtask_failed = 0, solved = 0, invalid = 0, other = 0;
  auto run = [&](const Task& t) {
    ++runs;
    const auto trace = run_control(t, build_lgg(t), make_base_planner(PlannerKind::Bfs));
    if (trace.outcome == ControlOutcome::SubtaskFailed) ++subtask_failed;
    else if (trace.outcome == ControlOutcome::Solved) {
      ++solved;
      if (!validate_plan(t, trace.plan)) ++invalid;
    } else ++other;
  };
  for (int i = 0; i < 50; ++i) run(blocks(5 + i % 3, BlocksVariant::Arm, 500 + static_cast<std::uint64_t>(i)));
  for (int i = 0; i < 20; ++i) run(logistics(2, 2, 1, 2 + i % 3, 700 + static_cast<std::uint64_t>(i)));
  const double secs = since(t0);
  std::ostringstream d;
  d << runs << " runs, solved=" << solved << " subtask_failed=" << subtask_failed << " invalid=" << invalid
    << " base_failed=" << other << " " << secs << "s";
  return {subtask_failed == 0 && invalid == 0 && secs < 600, d.str()};
}

Verdict speedup() {
  const double cutoff = default_time_limit();
  ControlConfig cfg;
  cfg.overall_time_limit_s = cutoff;
  cfg.limits.time_limit_s = cutoff;
  cfg.limits.node_limit = 50'000'000;

  int plain_solved = 0, lm_solved = 0, both = 0;
  double log_ratio = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Task t = blocks(8, BlocksVariant::Arm, 8000 + seed);
    const auto plain = solve(t, PlannerKind::Bfs, false, cfg);
    const auto lm = solve(t, PlannerKind::Bfs, true, cfg);
    plain_solved += plain.solved;
    lm_solved += lm.solved;
    if (plain.solved && lm.solved) {
      ++both;
      log_ratio += std::log(std::max(plain.seconds, 1e-4) / std::max(lm.seconds, 1e-4));
    }
  }
  const double gm_speedup = both ? std::exp(log_ratio / both) : 0.0;
  const bool bw_ok = lm_solved >= 2 * plain_solved && gm_speedup >= 5.0;

  double t_plain = 0, t_lm = 0;
  int log_both = 0;
  bool lengths_ok = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Task t = logistics(2, 2, 1, 4, 9000 + seed);
    const auto plain = solve(t, PlannerKind::Gbfs, false, cfg);
    const auto lm = solve(t, PlannerKind::Gbfs, true, cfg);
    if (!plain.solved || !lm.solved) continue;
    ++log_both;
    t_plain += plain.seconds;
    t_lm += lm.seconds;
    if (lm.plan.size() > 2 * plain.plan.size() && !(plain.plan.empty() && lm.plan.empty())) lengths_ok = false;
  }
  const bool log_ok = log_both > 0 && t_lm <= t_plain && lengths_ok;

  std::ostringstream d;
  d << "blocksworld-arm n=8 cutoff=" << cutoff << "s: bfs solved " << plain_solved << "/10, bfs+L solved "
    << lm_solved << "/10, geo-mean speedup on " << both << " common = " << gm_speedup << "x; "
    << "logistics 2x2 4 pkgs: gbfs mean " << (log_both ? t_plain / log_both : 0) << "s, gbfs+L mean "
    << (log_both ? t_lm / log_both : 0) << "s, lengths within 2x=" << lengths_ok;
  return {bw_ok && log_ok, d.str()};
}

Verdict lookahead() {
  const auto t0 = Clock::now();
  const Task t = logistics_2planes();
  const FactId origin = t.fact_id("(at pack1 la-airport)");
  const FactId dest = t.fact_id("(at pack1 bos-airport)");
  const Lgg with = extract_landmarks(t);
  const Lgg without = extract_landmarks(t, {.use_level_test = true, .use_lookahead = false});
  const bool edge = with.has_edge(origin, dest, EdgeKind::LookaheadNecessary);
  const bool gone = !without.has_node(origin) && without.count_edges(EdgeKind::LookaheadNecessary) == 0;
  const double secs = since(t0);
  std::ostringstream d;
  d << "ln edge=" << edge << " removed without lookahead=" << gone << " " << secs << "s";
  return {edge && gone && secs < 1.0, d.str()};
}

Verdict compilation() {
  std::mt19937_64 rng(77);
  std::size_t checks = 0, violations = 0, solvable = 0;
  std::string first;
  for (std::uint64_t k = 0; checks < 100; ++k) {
    const Task t = micro_instance(k);
    const StateSpace sp = enumerate(t);
    for (int rep = 0; rep < 5 && checks < 100; ++rep, ++checks) {
      const State& s = sp.states[rng() % sp.size()];
      const bool dnf = rng() % 2;
      std::vector<std::vector<FactId>> terms;
      const std::size_t n_terms = 1 + rng() % 3;
      for (std::size_t i = 0; i < n_terms; ++i) {
        std::vector<FactId> term{static_cast<FactId>(rng() % t.num_facts())};
        if (dnf) {
          const auto second = static_cast<FactId>(rng() % t.num_facts());
          if (second != term[0]) term.push_back(second);
        }
        terms.push_back(term);
      }
      std::vector<FactId> singles;
      for (const auto& term : terms) singles.push_back(term[0]);
      const CompiledGoal c = dnf ? compile_dnf_goal(t, s, terms) : compile_disjunctive_goal(t, s, singles);

      // Reachability of some disjunct from s in the source task.
      const StateSpace from_s = enumerate(with_init(t, s));
      bool reachable = false;
      for (const State& x : from_s.states)
        for (const auto& term : c.disjuncts) {
          bool all = true;
          for (FactId f : term) all = all && x.test(f);
          reachable = reachable || all;
        }
      const StateSpace compiled = enumerate(c.task);
      bool compiled_solvable = false;
      for (bool g : compiled.is_goal) compiled_solvable = compiled_solvable || g;
      const auto r = bfs_plan(c.task);

      bool ok = reachable == compiled_solvable && r.solved() == compiled_solvable;
      if (r.solved()) {
        ++solvable;
        const Plan real = c.unmap(r.plan);
        const auto end = result(t, s, real);
        bool hit = false;
        if (end)
          for (const auto& term : c.disjuncts) {
            bool all = true;
            for (FactId f : term) all = all && end->test(f);
            hit = hit || all;
          }
        ok = ok && hit;
      }
      if (!ok) {
        ++violations;
        if (first.empty()) first = "micro " + std::to_string(k);
      }
    }
  }
  std::ostringstream d;
  d << checks << " checks, " << solvable << " solvable, " << (checks - solvable) << " unsolvable, violations="
    << violations;
  if (!first.empty()) d << " (first in " << first << ")";
  return {violations == 0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"four-block LGG reproduction", four_block_lgg},       {"road-map reproduction", roadmap_case},
      {"oracle fixtures", oracle_fixtures},     {"soundness suites", soundness},
      {"control never fails a sub-task", control_without_subtask_failure}, {"speedup at desk scale", speedup},
      {"lookahead orders", lookahead},          {"compilation correctness", compilation},
  };
  int passed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& ex) {
      v = {false, std::string("exception: ") + ex.what()};
    }
    passed += v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << index << " " << name << ": " << v.detail << std::endl;
  }
  std::cout << passed << "/" << criteria.size() << " criteria passed" << std::endl;
  return 0;
}
