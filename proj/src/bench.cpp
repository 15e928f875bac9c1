#include "lmplan/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lmplan/pddl.hpp"

namespace lmplan {

namespace {

constexpr std::string_view kBlocksArm = R"((define (domain blocksworld-arm)
  (:requirements :strips :equality)
  (:predicates (on ?x ?y) (on-table ?x) (clear ?x) (arm-empty) (holding ?x))
  (:action pick-up
    :parameters (?x)
    :precondition (and (clear ?x) (on-table ?x) (arm-empty))
    :effect (and (holding ?x) (not (clear ?x)) (not (on-table ?x)) (not (arm-empty))))
  (:action put-down
    :parameters (?x)
    :precondition (holding ?x)
    :effect (and (clear ?x) (on-table ?x) (arm-empty) (not (holding ?x))))
  (:action stack
    :parameters (?x ?y)
    :precondition (and (holding ?x) (clear ?y) (not (= ?x ?y)))
    :effect (and (on ?x ?y) (clear ?x) (arm-empty) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x ?y)
    :precondition (and (on ?x ?y) (clear ?x) (arm-empty) (not (= ?x ?y)))
    :effect (and (holding ?x) (clear ?y) (not (on ?x ?y)) (not (clear ?x)) (not (arm-empty)))))
)";

constexpr std::string_view kBlocksNoArm = R"((define (domain blocksworld-no-arm)
  (:requirements :strips :equality)
  (:predicates (on ?x ?y) (on-table ?x) (clear ?x))
  (:action move-b-to-b
    :parameters (?b ?from ?to)
    :precondition (and (clear ?b) (clear ?to) (on ?b ?from)
                       (not (= ?b ?from)) (not (= ?b ?to)) (not (= ?from ?to)))
    :effect (and (on ?b ?to) (clear ?from) (not (on ?b ?from)) (not (clear ?to))))
  (:action move-b-to-t
    :parameters (?b ?from)
    :precondition (and (clear ?b) (on ?b ?from) (not (= ?b ?from)))
    :effect (and (on-table ?b) (clear ?from) (not (on ?b ?from))))
  (:action move-t-to-b
    :parameters (?b ?to)
    :precondition (and (clear ?b) (clear ?to) (on-table ?b) (not (= ?b ?to)))
    :effect (and (on ?b ?to) (not (on-table ?b)) (not (clear ?to)))))
)";

constexpr std::string_view kLogistics = R"((define (domain logistics)
  (:requirements :strips :equality)
  (:predicates (package ?p) (truck ?t) (airplane ?a) (location ?l) (airport ?l) (city ?c)
               (in-city ?l ?c) (at ?x ?l) (in ?p ?v))
  (:action load-truck
    :parameters (?p ?t ?l)
    :precondition (and (package ?p) (truck ?t) (location ?l) (at ?t ?l) (at ?p ?l))
    :effect (and (in ?p ?t) (not (at ?p ?l))))
  (:action load-airplane
    :parameters (?p ?a ?l)
    :precondition (and (package ?p) (airplane ?a) (airport ?l) (at ?a ?l) (at ?p ?l))
    :effect (and (in ?p ?a) (not (at ?p ?l))))
  (:action unload-truck
    :parameters (?p ?t ?l)
    :precondition (and (package ?p) (truck ?t) (location ?l) (at ?t ?l) (in ?p ?t))
    :effect (and (at ?p ?l) (not (in ?p ?t))))
  (:action unload-airplane
    :parameters (?p ?a ?l)
    :precondition (and (package ?p) (airplane ?a) (airport ?l) (at ?a ?l) (in ?p ?a))
    :effect (and (at ?p ?l) (not (in ?p ?a))))
  (:action drive-truck
    :parameters (?t ?from ?to ?c)
    :precondition (and (truck ?t) (city ?c) (at ?t ?from) (in-city ?from ?c) (in-city ?to ?c)
                       (not (= ?from ?to)))
    :effect (and (at ?t ?to) (not (at ?t ?from))))
  (:action fly-airplane
    :parameters (?a ?from ?to)
    :precondition (and (airplane ?a) (airport ?from) (airport ?to) (at ?a ?from) (not (= ?from ?to)))
    :effect (and (at ?a ?to) (not (at ?a ?from)))))
)";

/// Uniform draw in [0, n); modulo bias is irrelevant at these sizes and keeps
/// the output independent of the standard library's distributions.
std::size_t draw(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

using Towers = std::vector<std::vector<std::string>>;  // bottom to top

Towers random_towers(const std::vector<std::string>& blocks, std::mt19937_64& rng) {
  std::vector<std::string> order = blocks;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[draw(rng, i)]);
  Towers towers;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || (rng() & 1u)) towers.emplace_back();
    towers.back().push_back(order[i]);
  }
  return towers;
}

}  // namespace

std::string_view blocksworld_domain(BlocksVariant variant) {
  return variant == BlocksVariant::Arm ? kBlocksArm : kBlocksNoArm;
}

std::string_view logistics_domain() { return kLogistics; }

std::string_view domain_text(std::string_view name) {
  if (name == "blocksworld-arm") return kBlocksArm;
  if (name == "blocksworld-no-arm") return kBlocksNoArm;
  if (name == "logistics") return kLogistics;
  throw std::invalid_argument("unknown domain " + std::string(name));
}

std::string gen_blocksworld(int n, BlocksVariant variant, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("block count must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<std::string> blocks;
  for (int i = 1; i <= n; ++i) blocks.push_back("b" + std::to_string(i));
  const Towers init = random_towers(blocks, rng);
  const Towers goal = random_towers(blocks, rng);
  const bool arm = variant == BlocksVariant::Arm;

  std::ostringstream os;
  os << "(define (problem bw-" << (arm ? "arm" : "no-arm") << "-" << n << "-" << seed << ")\n"
     << "  (:domain " << (arm ? "blocksworld-arm" : "blocksworld-no-arm") << ")\n  (:objects";
  for (const auto& b : blocks) os << ' ' << b;
  os << ")\n  (:init";
  if (arm) os << " (arm-empty)";
  for (const auto& t : init) {
    os << " (on-table " << t.front() << ")";
    for (std::size_t i = 1; i < t.size(); ++i) os << " (on " << t[i] << ' ' << t[i - 1] << ")";
    os << " (clear " << t.back() << ")";
  }
  os << ")\n  (:goal (and";
  bool any_on = false;
  for (const auto& t : goal)
    for (std::size_t i = 1; i < t.size(); ++i) {
      os << " (on " << t[i] << ' ' << t[i - 1] << ")";
      any_on = true;
    }
  if (!any_on)
    for (const auto& t : goal) os << " (on-table " << t.front() << ")";
  os << ")))\n";
  return os.str();
}

std::string gen_logistics(int cities, int locs_per_city, int planes, int packages, std::uint64_t seed) {
  if (cities < 1 || locs_per_city < 1 || planes < 1 || packages < 1)
    throw std::invalid_argument("logistics parameters must be at least 1");
  std::mt19937_64 rng(seed);
  auto loc = [](int c, int l) { return "l" + std::to_string(c) + "-" + std::to_string(l); };
  const std::size_t all_locs = static_cast<std::size_t>(cities) * static_cast<std::size_t>(locs_per_city);
  auto random_loc = [&] {
    const std::size_t k = draw(rng, all_locs);
    return loc(static_cast<int>(k / static_cast<std::size_t>(locs_per_city)) + 1,
               static_cast<int>(k % static_cast<std::size_t>(locs_per_city)) + 1);
  };

  std::ostringstream objects, init, goal;
  for (int c = 1; c <= cities; ++c) {
    objects << " c" << c << " t" << c;
    init << " (city c" << c << ") (truck t" << c << ")";
    for (int l = 1; l <= locs_per_city; ++l) {
      objects << ' ' << loc(c, l);
      init << " (location " << loc(c, l) << ") (in-city " << loc(c, l) << " c" << c << ")";
      if (l == 1) init << " (airport " << loc(c, l) << ")";
    }
    init << " (at t" << c << ' ' << loc(c, static_cast<int>(draw(rng, static_cast<std::size_t>(locs_per_city))) + 1)
         << ")";
  }
  for (int a = 1; a <= planes; ++a) {
    objects << " a" << a;
    init << " (airplane a" << a << ") (at a" << a << ' '
         << loc(static_cast<int>(draw(rng, static_cast<std::size_t>(cities))) + 1, 1) << ")";
  }
  for (int p = 1; p <= packages; ++p) {
    objects << " p" << p;
    init << " (package p" << p << ") (at p" << p << ' ' << random_loc() << ")";
    goal << " (at p" << p << ' ' << random_loc() << ")";
  }

  std::ostringstream os;
  os << "(define (problem logistics-" << cities << "-" << locs_per_city << "-" << planes << "-" << packages << "-"
     << seed << ")\n  (:domain logistics)\n  (:objects" << objects.str() << ")\n  (:init" << init.str()
     << ")\n  (:goal (and" << goal.str() << ")))\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// LGG export

LggFormat parse_lgg_format(std::string_view text) {
  if (text == "dot") return LggFormat::Dot;
  if (text == "json") return LggFormat::Json;
  throw std::invalid_argument("unknown LGG format " + std::string(text));
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string_view dot_style(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::GreedyNecessary: return "style=solid";
    case EdgeKind::LookaheadNecessary: return "style=dashed";
    case EdgeKind::Reasonable: return "style=dotted";
    case EdgeKind::ObedientReasonable: return "style=dotted, color=gray";
  }
  return "";
}

}  // namespace

std::string export_lgg(const Task& task, const Lgg& lgg, LggFormat format) {
  if (format == LggFormat::Json) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    j["edges"] = nlohmann::json::array();
    for (FactId f : lgg.nodes())
      j["nodes"].push_back({{"id", f}, {"name", task.fact_name(f)}, {"verified", lgg.verified(f)}});
    for (const Edge& e : lgg.edges())
      j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"kind", std::string(to_string(e.kind))}});
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "digraph lgg {\n  rankdir=BT;\n";
  for (FactId f : lgg.nodes()) {
    os << "  n" << f << " [label=\"" << dot_escape(task.fact_name(f)) << "\"";
    if (!lgg.verified(f)) os << ", style=dashed";
    os << "];\n";
  }
  for (const Edge& e : lgg.edges())
    os << "  n" << e.from << " -> n" << e.to << " [" << dot_style(e.kind) << ", label=\"" << to_string(e.kind)
       << "\"];\n";
  os << "}\n";
  return os.str();
}

Lgg import_lgg_json(std::string_view text) {
  Lgg lgg;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& n : j.at("nodes")) lgg.add_node(n.at("id").get<FactId>(), n.value("verified", false));
    for (const auto& e : j.at("edges"))
      lgg.add_edge(e.at("from").get<FactId>(), e.at("to").get<FactId>(),
                   parse_edge_kind(e.at("kind").get<std::string>()));
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("bad LGG JSON: ") + ex.what());
  }
  return lgg;
}

// ---------------------------------------------------------------------------
// Pipeline

Lgg build_lgg(const Task& task, const LandmarkOptions& options) {
  Lgg lgg = extract_landmarks(task, options.extraction);
  if (!options.ordering.reasonable) return remove_cycles(std::move(lgg));
  return add_orders(task, std::move(lgg), compute_mutexes(task), options.ordering);
}

SolveResult solve(const Task& task, PlannerKind planner, bool use_landmarks, const ControlConfig& control,
                  const LandmarkOptions& landmarks) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  SolveResult out;

  if (!use_landmarks) {
    Limits l = control.limits;
    l.time_limit_s = std::min(l.time_limit_s, control.overall_time_limit_s);
    PlannerResult r = run_planner(planner, task, l);
    out.solved = r.solved();
    out.plan = std::move(r.plan);
    out.outcome = out.solved ? "solved" : std::string(to_string(r.outcome));
    out.expanded = r.expanded;
    out.seconds = elapsed();
    return out;
  }

  Lgg lgg = build_lgg(task, landmarks);
  ControlConfig cfg = control;
  cfg.overall_time_limit_s = std::max(0.0, control.overall_time_limit_s - elapsed());
  ControlTrace trace = run_control(task, std::move(lgg), make_base_planner(planner), cfg);
  out.solved = trace.outcome == ControlOutcome::Solved;
  out.plan = trace.plan;
  out.outcome = std::string(to_string(trace.outcome));
  out.expanded = trace.expanded;
  out.trace = std::move(trace);
  out.seconds = elapsed();
  return out;
}

// ---------------------------------------------------------------------------
// Benchmark

BenchConfig parse_bench_config(std::string_view text) {
  BenchConfig c;
  c.label = std::string(text);
  std::string_view body = text;
  if (auto colon = body.find(':'); colon != std::string_view::npos) {
    c.mode = parse_control_mode(body.substr(colon + 1));
    body = body.substr(0, colon);
  }
  if (body.ends_with("+L")) {
    c.landmarks = true;
    body.remove_suffix(2);
  }
  c.planner = parse_planner_kind(body);
  return c;
}

double default_time_limit() {
  if (const char* env = std::getenv("LMPLAN_TIME_LIMIT")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return 60.0;
}

Suite parse_suite(std::string_view json_text) {
  Suite s;
  s.time_limit_s = default_time_limit();
  try {
    const auto j = nlohmann::json::parse(json_text);
    if (j.contains("time_limit")) s.time_limit_s = j["time_limit"].get<double>();
    if (j.contains("node_limit")) s.node_limit = j["node_limit"].get<std::uint64_t>();
    for (const auto& e : j.at("entries")) {
      SuiteEntry entry;
      entry.domain = e.at("domain").get<std::string>();
      domain_text(entry.domain);  // validates the name
      entry.sizes = e.at("sizes").get<std::vector<int>>();
      entry.instances = e.value("instances", 1);
      entry.seed_base = e.value("seed_base", std::uint64_t{1});
      entry.cities = e.value("cities", 2);
      entry.locs_per_city = e.value("locs_per_city", 2);
      entry.planes = e.value("planes", 1);
      s.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("bad suite JSON: ") + ex.what());
  }
  return s;
}

std::string instance_problem(const SuiteEntry& entry, int size, std::uint64_t seed) {
  if (entry.domain == "blocksworld-arm") return gen_blocksworld(size, BlocksVariant::Arm, seed);
  if (entry.domain == "blocksworld-no-arm") return gen_blocksworld(size, BlocksVariant::NoArm, seed);
  if (entry.domain == "logistics") return gen_logistics(entry.cities, entry.locs_per_city, entry.planes, size, seed);
  throw std::invalid_argument("unknown domain " + entry.domain);
}

BenchRecord run_instance(const SuiteEntry& entry, int size, std::uint64_t seed, const BenchConfig& config,
                         double time_limit_s, std::uint64_t node_limit) {
  BenchRecord rec{entry.domain, size, seed, config.label, "error", 0.0, 0};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto domain = pddl::parse_domain(domain_text(entry.domain));
    const auto problem = pddl::parse_problem(instance_problem(entry, size, seed), domain);
    const Task task = pddl::ground(domain, problem);
    ControlConfig control;
    control.mode = config.mode;
    control.limits = {time_limit_s, node_limit};
    control.overall_time_limit_s =
        time_limit_s - std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const SolveResult r = solve(task, config.planner, config.landmarks, control);
    rec.outcome = r.outcome;
    if (r.solved) {
      rec.plan_length = r.plan.size();
      if (!validate_plan(task, r.plan)) rec.outcome = "invalid";
    }
  } catch (const std::exception&) {
    rec.outcome = "error";
  }
  rec.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<BenchRecord> run_benchmark(const Suite& suite, const std::vector<BenchConfig>& configs, std::ostream* csv) {
  std::vector<BenchRecord> out;
  if (csv) *csv << csv_header() << '\n' << std::flush;
  for (const auto& entry : suite.entries)
    for (int size : entry.sizes)
      for (int i = 0; i < entry.instances; ++i) {
        const std::uint64_t seed = entry.seed_base + static_cast<std::uint64_t>(i);
        for (const auto& config : configs) {
          out.push_back(run_instance(entry, size, seed, config, suite.time_limit_s, suite.node_limit));
          if (csv) *csv << to_csv_row(out.back()) << '\n' << std::flush;
        }
      }
  return out;
}

std::string csv_header() { return "domain,size,seed,config,outcome,time_s,plan_length"; }

std::string to_csv_row(const BenchRecord& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << r.domain << ',' << r.size << ',' << r.seed << ',' << r.config << ',' << r.outcome << ',' << r.time_s << ','
     << r.plan_length;
  return os.str();
}

std::string solved_series_csv(const std::vector<BenchRecord>& records) {
  std::map<std::string, std::vector<double>> times;
  for (const auto& r : records) {
    auto& v = times[r.config];
    if (r.outcome == "solved") v.push_back(r.time_s);
  }
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << "config,time_s,solved\n";
  for (auto& [config, v] : times) {
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i) os << config << ',' << v[i] << ',' << i + 1 << '\n';
  }
  return os.str();
}

}  // namespace lmplan
