#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lmplan/control.hpp"
#include "lmplan/lgg.hpp"
#include "lmplan/ordering.hpp"
#include "lmplan/planners.hpp"
#include "lmplan/strips.hpp"

namespace lmplan {

enum class BlocksVariant { Arm, NoArm };

std::string_view blocksworld_domain(BlocksVariant variant);
std::string_view logistics_domain();

/// Domain text for "blocksworld-arm", "blocksworld-no-arm" or "logistics".
std::string_view domain_text(std::string_view domain_name);

/// Random initial and goal towers over blocks b1..bn. Each configuration is
/// a shuffled block order cut into towers, a cut after each block with
/// probability 1/2. The goal lists the on atoms of the goal towers (on-table
/// atoms when there are none). Deterministic per seed.
std::string gen_blocksworld(int n, BlocksVariant variant, std::uint64_t seed);

/// Random Logistics problem: one truck per city starting at a random
/// location of its city, location 1 of each city is the airport, planes start
/// at random airports, packages get random origins and destinations.
std::string gen_logistics(int cities, int locs_per_city, int planes, int packages, std::uint64_t seed);

enum class LggFormat { Dot, Json };

LggFormat parse_lgg_format(std::string_view text);

/// DOT: gn solid, ln dashed, r dotted, rO dotted gray. JSON:
/// {"nodes":[{"id","name","verified"}],"edges":[{"from","to","kind"}]}.
std::string export_lgg(const Task& task, const Lgg& lgg, LggFormat format);

/// Inverse of the JSON export. Throws std::invalid_argument on bad input.
Lgg import_lgg_json(std::string_view text);

struct LandmarkOptions {
  ExtractionOptions extraction;
  OrderingOptions ordering;
};

/// Landmark extraction followed by order insertion and cycle removal.
Lgg build_lgg(const Task& task, const LandmarkOptions& options = {});

struct SolveResult {
  bool solved = false;
  Plan plan;
  /// "solved", or the planner/control failure label.
  std::string outcome;
  std::uint64_t expanded = 0;
  double seconds = 0.0;
  std::optional<ControlTrace> trace;
};

/// Plain base planner, or base planner inside the landmark control loop.
/// `control.overall_time_limit_s` bounds the whole run, landmark
/// computation included.
SolveResult solve(const Task& task, PlannerKind planner, bool use_landmarks, const ControlConfig& control = {},
                  const LandmarkOptions& landmarks = {});

struct BenchConfig {
  std::string label;
  PlannerKind planner = PlannerKind::Bfs;
  bool landmarks = false;
  ControlMode mode = ControlMode::Disjunctive;
};

/// Parses "bfs", "bfs+L", "gbfs", "gbfs+L" (optionally ":disj|conjdisj|dnf").
BenchConfig parse_bench_config(std::string_view text);

struct SuiteEntry {
  std::string domain;  ///< blocksworld-arm | blocksworld-no-arm | logistics
  /// Block count, or package count for Logistics.
  std::vector<int> sizes;
  int instances = 1;
  std::uint64_t seed_base = 1;
  int cities = 2;
  int locs_per_city = 2;
  int planes = 1;
};

struct Suite {
  std::vector<SuiteEntry> entries;
  double time_limit_s = 60.0;
  std::uint64_t node_limit = 1'000'000;
};

/// JSON form: {"time_limit": s, "node_limit": n, "entries": [{"domain",
/// "sizes", "instances", "seed_base", "cities", "locs_per_city", "planes"}]}.
Suite parse_suite(std::string_view json_text);

/// Default cutoff, overridden by the LMPLAN_TIME_LIMIT environment variable.
double default_time_limit();

struct BenchRecord {
  std::string domain;
  int size = 0;
  std::uint64_t seed = 0;
  std::string config;
  std::string outcome;
  double time_s = 0.0;
  std::size_t plan_length = 0;
};

/// Problem text of one suite instance.
std::string instance_problem(const SuiteEntry& entry, int size, std::uint64_t seed);

/// Grounds and solves one instance. Failures are recorded, never thrown.
BenchRecord run_instance(const SuiteEntry& entry, int size, std::uint64_t seed, const BenchConfig& config,
                         double time_limit_s, std::uint64_t node_limit);

/// One row per (instance, config); rows are also streamed to `csv` if given.
std::vector<BenchRecord> run_benchmark(const Suite& suite, const std::vector<BenchConfig>& configs,
                                       std::ostream* csv = nullptr);

std::string csv_header();
std::string to_csv_row(const BenchRecord& r);

/// Cumulative solved count over time per config: "config,time_s,solved".
std::string solved_series_csv(const std::vector<BenchRecord>& records);

}  // namespace lmplan
