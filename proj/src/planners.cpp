#include "lmplan/planners.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "lmplan/rpg.hpp"

namespace lmplan {

std::string_view to_string(PlannerOutcome outcome) {
  switch (outcome) {
    case PlannerOutcome::Plan: return "plan";
    case PlannerOutcome::ProvedUnsolvable: return "unsolvable";
    case PlannerOutcome::ResourceExhausted: return "exhausted";
  }
  return "?";
}

PlannerKind parse_planner_kind(std::string_view text) {
  if (text == "bfs") return PlannerKind::Bfs;
  if (text == "gbfs") return PlannerKind::Gbfs;
  throw std::invalid_argument("unknown planner " + std::string(text));
}

PlannerResult run_planner(PlannerKind kind, const Task& task, const Limits& limits) {
  return kind == PlannerKind::Bfs ? bfs_plan(task, limits) : gbfs_plan(task, limits);
}

namespace {

using Word = FactSet::Word;
using Clock = std::chrono::steady_clock;
constexpr std::uint32_t kNoParent = UINT32_MAX;

/// Search states packed back to back in one word array, with parent links.
class StateRegistry {
 public:
  explicit StateRegistry(const Task& task)
      : words_(FactSet::words_for(task.num_facts())), table_(1024, Hasher{this}, Equal{this}) {}

  std::size_t size() const { return parent_.size(); }
  const Word* state(std::uint32_t id) const { return data_.data() + static_cast<std::size_t>(id) * words_; }

  /// Scratch slot past the last state; fill it, then call commit().
  Word* scratch() {
    data_.resize((parent_.size() + 1) * words_);
    return data_.data() + parent_.size() * words_;
  }

  /// Registers the scratch state. Returns its id, or nullopt for a duplicate.
  std::optional<std::uint32_t> commit(std::uint32_t parent, ActionId via) {
    const auto id = static_cast<std::uint32_t>(parent_.size());
    parent_.push_back(parent);
    via_.push_back(via);
    if (!table_.insert(id).second) {
      parent_.pop_back();
      via_.pop_back();
      data_.resize(parent_.size() * words_);
      return std::nullopt;
    }
    return id;
  }

  Plan trace(std::uint32_t id) const {
    Plan p;
    for (; parent_[id] != kNoParent; id = parent_[id]) p.steps.push_back(via_[id]);
    std::reverse(p.steps.begin(), p.steps.end());
    return p;
  }

  FactSet to_set(std::uint32_t id, std::size_t universe) const {
    FactSet s(universe);
    std::copy_n(state(id), words_, s.words().begin());
    return s;
  }

  std::size_t words() const { return words_; }

 private:
  struct Hasher {
    const StateRegistry* r;
    std::size_t operator()(std::uint32_t id) const {
      std::size_t h = 0xcbf29ce484222325ull;
      const Word* w = r->state(id);
      for (std::size_t i = 0; i < r->words_; ++i) h = (h ^ w[i]) * 0x100000001b3ull + (h >> 29);
      return h;
    }
  };
  struct Equal {
    const StateRegistry* r;
    bool operator()(std::uint32_t a, std::uint32_t b) const {
      return std::equal(r->state(a), r->state(a) + r->words_, r->state(b));
    }
  };

  std::size_t words_;
  std::vector<Word> data_;
  std::vector<std::uint32_t> parent_;
  std::vector<ActionId> via_;
  std::unordered_set<std::uint32_t, Hasher, Equal> table_;
};

bool subset(const FactSet& sub, const Word* s) {
  const auto w = sub.words();
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] & ~s[i]) return false;
  return true;
}

void successor(const Task& task, ActionId a, const Word* s, Word* out) {
  const auto add = task.add_set(a).words();
  const auto del = task.del_set(a).words();
  for (std::size_t i = 0; i < add.size(); ++i) out[i] = (s[i] | add[i]) & ~del[i];
}

/// Wall-clock and node budget, polled every 128 expansions.
class Budget {
 public:
  explicit Budget(const Limits& l) : limits_(l), start_(Clock::now()) {}
  bool exhausted(std::uint64_t expanded) {
    if (expanded >= limits_.node_limit) return true;
    if ((expanded & 127u) != 0) return false;
    return elapsed() >= limits_.time_limit_s;
  }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  Limits limits_;
  Clock::time_point start_;
};

/// Copies the initial state into the registry; always succeeds.
std::uint32_t register_init(const Task& task, StateRegistry& reg) {
  Word* slot = reg.scratch();
  std::copy_n(task.init().words().begin(), reg.words(), slot);
  return *reg.commit(kNoParent, 0);
}

}  // namespace

PlannerResult bfs_plan(const Task& task, const Limits& limits) {
  PlannerResult res;
  Budget budget(limits);
  StateRegistry reg(task);
  std::deque<std::uint32_t> open{register_init(task, reg)};
  if (subset(task.goal(), reg.state(0))) {
    res.outcome = PlannerOutcome::Plan;
    res.seconds = budget.elapsed();
    return res;
  }
  while (!open.empty()) {
    if (budget.exhausted(res.expanded)) {
      res.outcome = PlannerOutcome::ResourceExhausted;
      res.seconds = budget.elapsed();
      return res;
    }
    const auto id = open.front();
    open.pop_front();
    ++res.expanded;
    for (ActionId a = 0; a < task.num_actions(); ++a) {
      if (!subset(task.pre_set(a), reg.state(id))) continue;
      Word* slot = reg.scratch();
      successor(task, a, reg.state(id), slot);
      auto child = reg.commit(id, a);
      if (!child) continue;
      ++res.generated;
      // Goal test on generation keeps the plan shortest with unit costs.
      if (subset(task.goal(), reg.state(*child))) {
        res.outcome = PlannerOutcome::Plan;
        res.plan = reg.trace(*child);
        res.seconds = budget.elapsed();
        return res;
      }
      open.push_back(*child);
    }
  }
  res.outcome = PlannerOutcome::ProvedUnsolvable;
  res.seconds = budget.elapsed();
  return res;
}

PlannerResult gbfs_plan(const Task& task, const Limits& limits) {
  PlannerResult res;
  Budget budget(limits);
  StateRegistry reg(task);
  // (h, generation order, state id); smallest first.
  using Entry = std::tuple<int, std::uint64_t, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t order = 0;

  const auto root = register_init(task, reg);
  const int h0 = relaxed_plan_heuristic(task, task.init());
  if (h0 == Rpg::kInfinity) {
    res.outcome = PlannerOutcome::ProvedUnsolvable;
    res.seconds = budget.elapsed();
    return res;
  }
  open.emplace(h0, order++, root);

  while (!open.empty()) {
    if (budget.exhausted(res.expanded)) break;
    const auto [h, ord, id] = open.top();
    open.pop();
    if (subset(task.goal(), reg.state(id))) {
      res.outcome = PlannerOutcome::Plan;
      res.plan = reg.trace(id);
      res.seconds = budget.elapsed();
      return res;
    }
    ++res.expanded;
    for (ActionId a = 0; a < task.num_actions(); ++a) {
      if (!subset(task.pre_set(a), reg.state(id))) continue;
      Word* slot = reg.scratch();
      successor(task, a, reg.state(id), slot);
      auto child = reg.commit(id, a);
      if (!child) continue;
      ++res.generated;
      const int hc = relaxed_plan_heuristic(task, reg.to_set(*child, task.num_facts()));
      if (hc == Rpg::kInfinity) continue;
      open.emplace(hc, order++, *child);
    }
  }
  // Relaxed dead ends are true dead ends, so an exhausted open list is a proof.
  res.outcome = open.empty() ? PlannerOutcome::ProvedUnsolvable : PlannerOutcome::ResourceExhausted;
  res.seconds = budget.elapsed();
  return res;
}

}  // namespace lmplan
