#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "lmplan/strips.hpp"

namespace lmplan {

enum class RpgMode {
  GoalsFirstReached,  ///< stop at the first layer containing the goal
  Fixpoint,           ///< stop when no new fact appears
};

/// Relaxed planning graph stored as per-fact / per-action first levels.
///
/// Layer membership follows from the levels: P_i = {f | level(f) <= i},
/// A_i = {a | level(a) <= i}. Levels beyond the top layer are kInfinity.
struct Rpg {
  static constexpr int kInfinity = std::numeric_limits<int>::max();

  RpgMode mode = RpgMode::GoalsFirstReached;
  int top = 0;  ///< index m of the topmost proposition layer
  std::vector<int> fact_level;
  std::vector<int> action_level;

  bool contains(FactId f) const { return fact_level[f] != kInfinity; }
  bool contains_action(ActionId a) const { return action_level[a] != kInfinity; }
  FactSet prop_layer(int i) const;
  std::vector<ActionId> action_layer(int i) const;
  bool reaches(const FactSet& goal) const;
};

/// Optional restriction of the usable actions (nonzero = usable).
using ActionFilter = std::span<const std::uint8_t>;

/// Builds the RPG from `from` towards `goal`. Returns nullopt when the
/// relaxed fixpoint is reached without the goal (relaxed unsolvable).
std::optional<Rpg> build_rpg(const Task& task, const State& from, const FactSet& goal, RpgMode mode,
                             ActionFilter usable = {});

/// RPG of the task's own initial state and goal.
std::optional<Rpg> build_rpg(const Task& task, RpgMode mode);

/// Delete-relaxed reachability of `goal` from `from` using only usable actions.
bool relaxed_solvable(const Task& task, ActionFilter usable, const State& from, const FactSet& goal);

/// FF-style relaxed plan length: backchains from the goal picking, for each
/// open fact, the lowest-id achiever one level below it. Returns
/// Rpg::kInfinity when some goal fact is not in the graph.
int extract_relaxed_plan(const Task& task, const Rpg& rpg, const FactSet& goal);

/// Relaxed-plan heuristic value of a state (kInfinity on relaxed dead ends).
int relaxed_plan_heuristic(const Task& task, const State& s);

}  // namespace lmplan
