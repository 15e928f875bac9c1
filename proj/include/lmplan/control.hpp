#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lmplan/lgg.hpp"
#include "lmplan/ordering.hpp"
#include "lmplan/pddl.hpp"
#include "lmplan/planners.hpp"
#include "lmplan/strips.hpp"

namespace lmplan {

/// Name of the fact that the compiled goal actions add.
inline constexpr std::string_view kGoalReachedPredicate = "lm-goal-reached";

/// A task whose goal is a disjunction, compiled to STRIPS: one artificial
/// action per disjunct adds a fresh fact g*, and the goal is {g*} ∪ conj.
struct CompiledGoal {
  Task task;
  FactId goal_fact = 0;
  /// Ids at or above this are artificial.
  ActionId first_artificial = 0;
  /// Precondition set of each artificial action, in action order.
  std::vector<std::vector<FactId>> disjuncts;

  /// Drops the artificial steps; the rest is a plan of the source task.
  Plan unmap(const Plan& plan) const;
};

/// Disjunction of single facts: one action ({L}, {g*}, {}) per L ∈ disj.
CompiledGoal compile_disjunctive_goal(const Task& task, const State& s, const std::vector<FactId>& disj,
                                      const std::vector<FactId>& conj = {});

/// Disjunction of conjunctions: one action (T, {g*}, {}) per term T.
CompiledGoal compile_dnf_goal(const Task& task, const State& s, const std::vector<std::vector<FactId>>& terms);

/// Same facts and actions with a different initial state.
Task with_init(const Task& task, const State& s);

/// Nodes without incoming edges. Throws std::logic_error when a nonempty
/// graph has none (a cycle leaked through).
std::vector<FactId> leaves(const Lgg& lgg);

/// Greedy partition of `facts` into maximal pairwise-consistent subsets.
std::vector<std::vector<FactId>> consistent_partition(const std::vector<FactId>& facts,
                                                      const InconsistencyTable& mutexes);

enum class ControlMode { Disjunctive, ConjPlusDisj, DnfMaxConsistent };

ControlMode parse_control_mode(std::string_view text);
std::string_view to_string(ControlMode mode);

struct ControlConfig {
  ControlMode mode = ControlMode::Disjunctive;
  bool safety_net = false;
  /// Per base-planner call.
  Limits limits;
  /// Whole run; each call gets at most what is left.
  double overall_time_limit_s = 1e18;
};

enum class ControlOutcome { Solved, SubtaskFailed, BasePlannerFailed };

std::string_view to_string(ControlOutcome outcome);

struct ControlIteration {
  /// Disjunction posed to the base planner (singletons unless in DNF mode).
  std::vector<std::vector<FactId>> disj;
  std::vector<FactId> conj;
  /// Leaves dropped before the call because they already held.
  std::vector<FactId> already_true;
  Plan fragment;
  State post;
  std::vector<FactId> removed;
  PlannerOutcome base_outcome = PlannerOutcome::ResourceExhausted;
  bool safety_net_used = false;
};

struct ControlTrace {
  std::vector<ControlIteration> iterations;
  Plan plan;
  ControlOutcome outcome = ControlOutcome::BasePlannerFailed;
  /// Index of the failed iteration for SubtaskFailed.
  std::optional<std::size_t> failed_iteration;
  bool final_call_skipped = false;
  std::uint64_t expanded = 0;
  double seconds = 0.0;
};

using BasePlanner = std::function<PlannerResult(const Task&, const Limits&)>;

BasePlanner make_base_planner(PlannerKind kind);

/// Disjunctive search control: repeatedly plans for the disjunction of the
/// current LGG leaves, removes the leaves achieved by the fragment, and
/// finishes with a call for the original goal. Leaves that already hold in
/// the current state are removed without a call.
ControlTrace run_control(const Task& task, Lgg lgg, const BasePlanner& base, const ControlConfig& config = {});

/// Base planner backed by an external program. Each call writes
/// domain.pddl / problem.pddl into `workdir`, runs `command` with {domain},
/// {problem} and {plan} substituted, and reads the plan file back (one
/// "(op arg ...)" per line). Exit status 0 means a plan was written.
class ExternalPlanner {
 public:
  ExternalPlanner(pddl::DomainAst domain, pddl::ProblemAst problem, std::string command, std::string workdir);

  PlannerResult operator()(const Task& task, const Limits& limits) const;

  /// PDDL of a compiled sub-task: the source domain with all objects as
  /// constants plus one 0-ary action per artificial action.
  std::string domain_text(const Task& task) const;
  std::string problem_text(const Task& task) const;

 private:
  pddl::DomainAst domain_;
  pddl::ProblemAst problem_;
  std::vector<Atom> static_init_;
  std::string command_;
  std::string workdir_;
};

/// Parses plan text ("(op a b)" per line, ';' comments) against a task.
/// Throws std::invalid_argument on unknown actions.
Plan parse_plan(const Task& task, std::string_view text);

}  // namespace lmplan
