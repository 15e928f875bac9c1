#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lmplan/strips.hpp"

namespace lmplan {

/// Thrown when the reachable state space exceeds the configured cap.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(std::size_t cap);
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

inline constexpr std::size_t kDefaultStateCap = 200'000;

/// Explicit reachable state space of a task. State 0 is the initial state.
struct StateSpace {
  using StateId = std::uint32_t;
  struct Transition {
    ActionId action;
    StateId target;
  };

  std::vector<State> states;
  std::vector<std::vector<Transition>> successors;
  std::vector<std::uint8_t> is_goal;
  std::unordered_map<State, StateId> index;

  std::size_t size() const { return states.size(); }
  std::size_t num_transitions() const;
  bool contains(const State& s) const { return index.count(s) > 0; }
};

/// BFS closure of the initial state. Throws CapExceeded past `cap` states.
StateSpace enumerate(const Task& task, std::size_t cap = kDefaultStateCap);

struct ReasonableVerdict {
  bool aftermath = true;
  bool deletes = true;
  /// S(L', not L) was empty; both parts then hold by empty quantification.
  bool vacuous = false;

  bool holds() const { return aftermath && deletes; }
};

/// Exact deciders for landmark and ordering properties on one task.
///
/// Every universally quantified property over action sequences is reduced to
/// reachability in the enumerated space, possibly in a product with a few
/// flags. The space is built once in the constructor.
class Oracle {
 public:
  explicit Oracle(const Task& task, std::size_t cap = kDefaultStateCap);

  const Task& task() const { return task_; }
  const StateSpace& space() const { return space_; }
  bool solvable() const { return solvable_; }
  /// Notes about degenerate queries (e.g. landmark questions on an unsolvable task).
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// L is true at some point of every plan iff L ∈ I ∪ G, or no goal state
  /// is reachable through states that lack L.
  bool landmark(FactId l);

  /// Every transition that makes L' true (L' ∉ s, L' ∈ s') leaves a state
  /// containing L, and L' ∉ I.
  bool necessary(FactId l, FactId lp) const;

  /// As necessary(), but only transitions that make L' true for the first
  /// time count: their sources are the states reachable without L' ever
  /// holding.
  bool greedy_necessary(FactId l, FactId lp) const;

  /// All L with necessary(L, lp) / greedy_necessary(L, lp), in one pass.
  FactSet necessary_predecessors(FactId lp) const;
  FactSet greedy_necessary_predecessors(FactId lp) const;

  ReasonableVerdict reasonable(FactId l, FactId lp) const;

  /// No reachable state contains both x and y.
  bool inconsistent(FactId x, FactId y) const;

  /// States of S(L', not L): reached along L-free states by a last action adding L'.
  std::vector<StateSpace::StateId> achieved_before(FactId lp, FactId l) const;

 private:
  /// States reachable from I while never passing through a state with f.
  std::vector<std::uint8_t> region_without(FactId f) const;
  FactSet predecessors(FactId lp, const std::vector<std::uint8_t>* region) const;

  const Task& task_;
  StateSpace space_;
  bool solvable_ = false;
  std::vector<std::string> warnings_;
};

bool oracle_landmark(const Task& task, FactId l, std::size_t cap = kDefaultStateCap);
bool oracle_n(const Task& task, FactId l, FactId lp, std::size_t cap = kDefaultStateCap);
bool oracle_gn(const Task& task, FactId l, FactId lp, std::size_t cap = kDefaultStateCap);
bool oracle_reasonable(const Task& task, FactId l, FactId lp, std::size_t cap = kDefaultStateCap);
bool oracle_inconsistent(const Task& task, FactId x, FactId y, std::size_t cap = kDefaultStateCap);

/// All solution plans of exactly `length` steps (depth-first, action id order).
std::vector<Plan> solution_plans(const Task& task, std::size_t length);

}  // namespace lmplan
