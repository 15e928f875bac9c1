#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lmplan/fact_set.hpp"

namespace lmplan {

/// A ground atom such as (on c a). Symbols are stored lowercase.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// "(predicate arg1 arg2)"; nullary atoms print as "(predicate)".
std::string to_string(const Atom& atom);

/// Parses the display form back into an atom. Throws std::invalid_argument.
Atom parse_atom(std::string_view text);

struct Action {
  Atom name;
  std::vector<FactId> pre;
  std::vector<FactId> add;
  std::vector<FactId> del;
  /// Set for goal-compilation helpers that are not part of the source task.
  bool artificial = false;
};

using State = FactSet;

struct Plan {
  std::vector<ActionId> steps;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  friend bool operator==(const Plan&, const Plan&) = default;
};

/// Grounded STRIPS task (A, I, G) over an interned fact universe.
///
/// Immutable after construction. Facts and actions are addressed by dense ids;
/// the constructor builds achiever and consumer indices.
class Task {
 public:
  Task() = default;
  Task(std::vector<Atom> facts, std::vector<Action> actions, State init, FactSet goal);

  std::size_t num_facts() const { return facts_.size(); }
  std::size_t num_actions() const { return actions_.size(); }

  const std::vector<Atom>& facts() const { return facts_; }
  const std::vector<Action>& actions() const { return actions_; }
  const Atom& fact(FactId f) const { return facts_.at(f); }
  const Action& action(ActionId a) const { return actions_.at(a); }
  const State& init() const { return init_; }
  const FactSet& goal() const { return goal_; }

  const FactSet& pre_set(ActionId a) const { return pre_sets_[a]; }
  const FactSet& add_set(ActionId a) const { return add_sets_[a]; }
  const FactSet& del_set(ActionId a) const { return del_sets_[a]; }

  /// Actions with f in their add list, ascending id.
  const std::vector<ActionId>& achievers(FactId f) const { return achievers_[f]; }
  /// Actions with f in their precondition, ascending id.
  const std::vector<ActionId>& consumers(FactId f) const { return consumers_[f]; }

  std::string fact_name(FactId f) const { return to_string(fact(f)); }
  std::string action_name(ActionId a) const { return to_string(action(a).name); }

  std::optional<FactId> find_fact(std::string_view display) const;
  std::optional<ActionId> find_action(std::string_view display) const;
  /// Like find_fact but throws std::out_of_range on unknown names.
  FactId fact_id(std::string_view display) const;
  ActionId action_id(std::string_view display) const;

  FactSet empty_set() const { return FactSet(facts_.size()); }
  FactSet make_set(std::initializer_list<FactId> ids) const;

  /// Set by the grounder when a goal fact is relaxed-unreachable.
  bool provably_unsolvable() const { return provably_unsolvable_; }
  void mark_provably_unsolvable() { provably_unsolvable_ = true; }

 private:
  std::vector<Atom> facts_;
  std::vector<Action> actions_;
  State init_;
  FactSet goal_;
  std::vector<FactSet> pre_sets_, add_sets_, del_sets_;
  std::vector<std::vector<ActionId>> achievers_, consumers_;
  std::unordered_map<std::string, FactId> fact_index_;
  std::unordered_map<std::string, ActionId> action_index_;
  bool provably_unsolvable_ = false;
};

/// Result(s, <a>): (s ∪ add) \ del when pre ⊆ s, nullopt otherwise.
/// Throws std::out_of_range for an action id outside the task.
std::optional<State> apply(const Task& task, const State& s, ActionId a);

/// Left fold of apply; an undefined step makes the whole result undefined.
std::optional<State> result(const Task& task, const State& s, const Plan& plan);

bool is_applicable(const Task& task, const State& s, ActionId a);

/// Applies an applicable action in place. No precondition check.
void apply_in_place(const Task& task, State& s, ActionId a);

bool validate_plan(const Task& task, const Plan& plan);

/// A plan obeys L -> L' if L is initially true, or L is first added strictly
/// before L' is first added (never added counts as infinity).
bool plan_obeys_order(const Task& task, const Plan& plan, FactId l, FactId lp);

std::string to_string(const Task& task, const FactSet& set);
std::string plan_to_text(const Task& task, const Plan& plan);

}  // namespace lmplan
