#include "lmplan/rpg.hpp"

#include <stdexcept>

namespace lmplan {

FactSet Rpg::prop_layer(int i) const {
  FactSet layer(fact_level.size());
  for (FactId f = 0; f < fact_level.size(); ++f)
    if (fact_level[f] <= i) layer.set(f);
  return layer;
}

std::vector<ActionId> Rpg::action_layer(int i) const {
  std::vector<ActionId> out;
  for (ActionId a = 0; a < action_level.size(); ++a)
    if (action_level[a] <= i) out.push_back(a);
  return out;
}

bool Rpg::reaches(const FactSet& goal) const {
  bool ok = true;
  goal.for_each([&](FactId f) {
    if (fact_level[f] == kInfinity) ok = false;
  });
  return ok;
}

namespace {

bool usable_action(ActionFilter usable, ActionId a) { return usable.empty() || usable[a]; }

}  // namespace

std::optional<Rpg> build_rpg(const Task& task, const State& from, const FactSet& goal, RpgMode mode,
                             ActionFilter usable) {
  if (!usable.empty() && usable.size() != task.num_actions())
    throw std::invalid_argument("action filter size does not match task");
  Rpg rpg;
  rpg.mode = mode;
  rpg.fact_level.assign(task.num_facts(), Rpg::kInfinity);
  rpg.action_level.assign(task.num_actions(), Rpg::kInfinity);

  std::vector<std::size_t> unsatisfied(task.num_actions());
  for (ActionId a = 0; a < task.num_actions(); ++a) unsatisfied[a] = task.action(a).pre.size();

  std::vector<FactId> new_facts = from.to_vector();
  for (FactId f : new_facts) rpg.fact_level[f] = 0;
  std::size_t goals_missing = 0;
  goal.for_each([&](FactId f) {
    if (!from.test(f)) ++goals_missing;
  });

  std::vector<ActionId> new_actions;
  for (int level = 0;; ++level) {
    if (mode == RpgMode::GoalsFirstReached && goals_missing == 0) {
      rpg.top = level;
      return rpg;
    }
    new_actions.clear();
    if (level == 0) {
      for (ActionId a = 0; a < task.num_actions(); ++a)
        if (unsatisfied[a] == 0 && usable_action(usable, a)) new_actions.push_back(a);
    }
    for (FactId f : new_facts) {
      for (ActionId a : task.consumers(f)) {
        if (--unsatisfied[a] == 0 && usable_action(usable, a)) new_actions.push_back(a);
      }
    }
    for (ActionId a : new_actions) rpg.action_level[a] = level;

    new_facts.clear();
    for (ActionId a : new_actions) {
      for (FactId f : task.action(a).add) {
        if (rpg.fact_level[f] == Rpg::kInfinity) {
          rpg.fact_level[f] = level + 1;
          new_facts.push_back(f);
          if (goal.test(f)) --goals_missing;
        }
      }
    }
    if (new_facts.empty()) {
      rpg.top = level;
      if (goals_missing != 0) return std::nullopt;
      return rpg;
    }
  }
}

std::optional<Rpg> build_rpg(const Task& task, RpgMode mode) {
  return build_rpg(task, task.init(), task.goal(), mode);
}

bool relaxed_solvable(const Task& task, ActionFilter usable, const State& from, const FactSet& goal) {
  return build_rpg(task, from, goal, RpgMode::GoalsFirstReached, usable).has_value();
}

int extract_relaxed_plan(const Task& task, const Rpg& rpg, const FactSet& goal) {
  if (!rpg.reaches(goal)) return Rpg::kInfinity;
  int top = 0;
  goal.for_each([&](FactId f) { top = std::max(top, rpg.fact_level[f]); });

  std::vector<std::vector<FactId>> open(static_cast<std::size_t>(top) + 1);
  std::vector<bool> handled(task.num_facts(), false);
  goal.for_each([&](FactId f) {
    if (rpg.fact_level[f] > 0) {
      open[static_cast<std::size_t>(rpg.fact_level[f])].push_back(f);
      handled[f] = true;
    }
  });
  std::vector<bool> selected(task.num_actions(), false);
  int count = 0;
  for (int level = top; level > 0; --level) {
    // open[level] may grow only at lower indices while we iterate here.
    for (FactId f : open[static_cast<std::size_t>(level)]) {
      ActionId chosen = 0;
      bool found = false;
      for (ActionId a : task.achievers(f)) {
        if (rpg.action_level[a] == level - 1) {
          chosen = a;
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("relaxed plan extraction: no achiever one level below fact");
      if (selected[chosen]) continue;
      selected[chosen] = true;
      ++count;
      for (FactId p : task.action(chosen).pre) {
        const int pl = rpg.fact_level[p];
        if (pl > 0 && !handled[p]) {
          handled[p] = true;
          open[static_cast<std::size_t>(pl)].push_back(p);
        }
      }
    }
  }
  return count;
}

int relaxed_plan_heuristic(const Task& task, const State& s) {
  // Levels up to the first goal layer coincide with the fixpoint graph, so
  // stopping early gives the same relaxed plan.
  auto rpg = build_rpg(task, s, task.goal(), RpgMode::GoalsFirstReached);
  if (!rpg) return Rpg::kInfinity;
  return extract_relaxed_plan(task, *rpg, task.goal());
}

}  // namespace lmplan
