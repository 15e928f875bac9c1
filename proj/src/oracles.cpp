#include "lmplan/oracles.hpp"

#include <deque>

namespace lmplan {

CapExceeded::CapExceeded(std::size_t cap)
    : std::runtime_error("state space exceeds cap of " + std::to_string(cap) + " states"), cap_(cap) {}

std::size_t StateSpace::num_transitions() const {
  std::size_t n = 0;
  for (const auto& s : successors) n += s.size();
  return n;
}

StateSpace enumerate(const Task& task, std::size_t cap) {
  if (cap == 0) throw std::invalid_argument("state cap must be positive");
  StateSpace sp;
  auto intern = [&](State s) -> StateSpace::StateId {
    auto [it, fresh] = sp.index.emplace(s, static_cast<StateSpace::StateId>(sp.states.size()));
    if (fresh) {
      if (sp.states.size() >= cap) throw CapExceeded(cap);
      sp.is_goal.push_back(task.goal().subset_of(s));
      sp.states.push_back(std::move(s));
      sp.successors.emplace_back();
    }
    return it->second;
  };
  intern(task.init());
  for (std::size_t i = 0; i < sp.states.size(); ++i) {
    for (ActionId a = 0; a < task.num_actions(); ++a) {
      if (!task.pre_set(a).subset_of(sp.states[i])) continue;
      State next = sp.states[i];
      apply_in_place(task, next, a);
      const auto target = intern(std::move(next));
      sp.successors[i].push_back({a, target});
    }
  }
  return sp;
}

Oracle::Oracle(const Task& task, std::size_t cap) : task_(task), space_(enumerate(task, cap)) {
  for (auto g : space_.is_goal) solvable_ = solvable_ || g;
}

std::vector<std::uint8_t> Oracle::region_without(FactId f) const {
  std::vector<std::uint8_t> seen(space_.size(), 0);
  if (space_.states[0].test(f)) return seen;
  std::deque<StateSpace::StateId> open{0};
  seen[0] = 1;
  while (!open.empty()) {
    const auto s = open.front();
    open.pop_front();
    for (const auto& t : space_.successors[s]) {
      if (seen[t.target] || space_.states[t.target].test(f)) continue;
      seen[t.target] = 1;
      open.push_back(t.target);
    }
  }
  return seen;
}

bool Oracle::landmark(FactId l) {
  if (task_.init().test(l) || task_.goal().test(l)) return true;
  if (!solvable_) {
    warnings_.push_back("task is unsolvable; every fact is a landmark: " + task_.fact_name(l));
    return true;
  }
  // A plan avoiding L exists iff a goal state lies in the L-free region.
  const auto region = region_without(l);
  for (std::size_t s = 0; s < space_.size(); ++s)
    if (region[s] && space_.is_goal[s]) return false;
  return true;
}

FactSet Oracle::predecessors(FactId lp, const std::vector<std::uint8_t>* region) const {
  FactSet out = task_.empty_set();
  if (task_.init().test(lp)) return out;
  bool any = false;
  // Intersect the source states of every transition that makes lp true.
  for (std::size_t s = 0; s < space_.size(); ++s) {
    if (region && !(*region)[s]) continue;
    const State& from = space_.states[s];
    if (from.test(lp)) continue;
    for (const auto& t : space_.successors[s]) {
      if (!space_.states[t.target].test(lp)) continue;
      if (!any) {
        out = from;
        any = true;
      } else {
        out &= from;
      }
      break;
    }
  }
  // Never achieved: every L qualifies vacuously.
  if (!any) {
    out = task_.empty_set();
    for (FactId f = 0; f < task_.num_facts(); ++f) out.set(f);
  }
  out.reset(lp);
  return out;
}

FactSet Oracle::necessary_predecessors(FactId lp) const { return predecessors(lp, nullptr); }

FactSet Oracle::greedy_necessary_predecessors(FactId lp) const {
  const auto region = region_without(lp);
  return predecessors(lp, &region);
}

bool Oracle::necessary(FactId l, FactId lp) const { return l != lp && necessary_predecessors(lp).test(l); }

bool Oracle::greedy_necessary(FactId l, FactId lp) const {
  return l != lp && greedy_necessary_predecessors(lp).test(l);
}

std::vector<StateSpace::StateId> Oracle::achieved_before(FactId lp, FactId l) const {
  std::vector<StateSpace::StateId> out;
  const auto region = region_without(l);
  std::vector<std::uint8_t> in_s(space_.size(), 0);
  for (std::size_t s = 0; s < space_.size(); ++s) {
    if (!region[s]) continue;
    for (const auto& t : space_.successors[s]) {
      if (!region[t.target] || !task_.add_set(t.action).test(lp) || in_s[t.target]) continue;
      in_s[t.target] = 1;
      out.push_back(t.target);
    }
  }
  return out;
}

ReasonableVerdict Oracle::reasonable(FactId l, FactId lp) const {
  ReasonableVerdict v;
  const auto starts = achieved_before(lp, l);
  if (starts.empty()) {
    v.vacuous = true;
    return v;
  }

  // Aftermath. A solution from s violates it unless some step i >= 1 has L
  // and some step j >= i has L'. Phases: 0 = no L yet, 1 = L seen but no L'
  // since, 2 = satisfied (absorbing, never a violation). Reaching a goal
  // state in phase 0 or 1 is a counterexample; the empty plan counts.
  {
    const std::size_t n = space_.size();
    std::vector<std::uint8_t> seen(2 * n, 0);
    std::deque<std::pair<StateSpace::StateId, int>> open;
    for (auto s : starts) {
      seen[s] = 1;
      open.push_back({s, 0});
    }
    while (!open.empty() && v.aftermath) {
      const auto [s, phase] = open.front();
      open.pop_front();
      if (space_.is_goal[s]) {
        v.aftermath = false;
        break;
      }
      for (const auto& t : space_.successors[s]) {
        const State& next = space_.states[t.target];
        int np = phase;
        if (phase == 0 && next.test(l)) np = 1;
        if (np == 1 && next.test(lp)) np = 2;
        if (np == 2) continue;
        auto& mark = seen[static_cast<std::size_t>(np) * n + t.target];
        if (mark) continue;
        mark = 1;
        open.push_back({t.target, np});
      }
    }
  }

  // Deletion: no sequence from S reaches L while avoiding every L'-deleter.
  {
    std::vector<std::uint8_t> seen(space_.size(), 0);
    std::deque<StateSpace::StateId> open(starts.begin(), starts.end());
    for (auto s : starts) seen[s] = 1;
    while (!open.empty() && v.deletes) {
      const auto s = open.front();
      open.pop_front();
      for (const auto& t : space_.successors[s]) {
        if (task_.del_set(t.action).test(lp) || seen[t.target]) continue;
        if (space_.states[t.target].test(l)) {
          v.deletes = false;
          break;
        }
        seen[t.target] = 1;
        open.push_back(t.target);
      }
    }
  }
  return v;
}

bool Oracle::inconsistent(FactId x, FactId y) const {
  for (const State& s : space_.states)
    if (s.test(x) && s.test(y)) return false;
  return true;
}

bool oracle_landmark(const Task& task, FactId l, std::size_t cap) { return Oracle(task, cap).landmark(l); }
bool oracle_n(const Task& task, FactId l, FactId lp, std::size_t cap) { return Oracle(task, cap).necessary(l, lp); }
bool oracle_gn(const Task& task, FactId l, FactId lp, std::size_t cap) {
  return Oracle(task, cap).greedy_necessary(l, lp);
}
bool oracle_reasonable(const Task& task, FactId l, FactId lp, std::size_t cap) {
  return Oracle(task, cap).reasonable(l, lp).holds();
}
bool oracle_inconsistent(const Task& task, FactId x, FactId y, std::size_t cap) {
  return Oracle(task, cap).inconsistent(x, y);
}

std::vector<Plan> solution_plans(const Task& task, std::size_t length) {
  std::vector<Plan> out;
  Plan prefix;
  auto dfs = [&](auto&& self, const State& s) -> void {
    if (prefix.steps.size() == length) {
      if (task.goal().subset_of(s)) out.push_back(prefix);
      return;
    }
    for (ActionId a = 0; a < task.num_actions(); ++a) {
      if (!task.pre_set(a).subset_of(s)) continue;
      State next = s;
      apply_in_place(task, next, a);
      prefix.steps.push_back(a);
      self(self, next);
      prefix.steps.pop_back();
    }
  };
  dfs(dfs, task.init());
  return out;
}

}  // namespace lmplan
