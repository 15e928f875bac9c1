#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>

#include "lmplan/strips.hpp"

namespace lmplan {

struct Limits {
  double time_limit_s = 60.0;
  std::uint64_t node_limit = 1'000'000;
};

enum class PlannerOutcome { Plan, ProvedUnsolvable, ResourceExhausted };

std::string_view to_string(PlannerOutcome outcome);

struct PlannerResult {
  PlannerOutcome outcome = PlannerOutcome::ResourceExhausted;
  Plan plan;
  std::uint64_t expanded = 0;
  std::uint64_t generated = 0;
  double seconds = 0.0;

  bool solved() const { return outcome == PlannerOutcome::Plan; }
};

/// Breadth-first search with duplicate detection; returns a shortest plan.
PlannerResult bfs_plan(const Task& task, const Limits& limits = {});

/// Greedy best-first search on the relaxed-plan heuristic. States with an
/// infinite estimate are pruned; ties go to the earlier generated state.
PlannerResult gbfs_plan(const Task& task, const Limits& limits = {});

enum class PlannerKind { Bfs, Gbfs };

PlannerKind parse_planner_kind(std::string_view text);
PlannerResult run_planner(PlannerKind kind, const Task& task, const Limits& limits = {});

}  // namespace lmplan
