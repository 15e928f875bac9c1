#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lmplan/bench.hpp"
#include "lmplan/control.hpp"
#include "lmplan/lgg.hpp"
#include "lmplan/oracles.hpp"
#include "lmplan/ordering.hpp"
#include "lmplan/pddl.hpp"
#include "lmplan/planners.hpp"

using namespace lmplan;

namespace {

constexpr int kSolved = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Input {
  pddl::DomainAst domain;
  pddl::ProblemAst problem;
  Task task;
};

Input load(const std::string& domain_path, const std::string& problem_path) {
  Input in;
  in.domain = pddl::parse_domain(pddl::read_file(domain_path));
  in.problem = pddl::parse_problem(pddl::read_file(problem_path), in.domain);
  in.task = pddl::ground(in.domain, in.problem);
  return in;
}

FactId fact_arg(const Task& task, const std::string& name) {
  if (auto f = task.find_fact(name)) return *f;
  throw UsageError("unknown fact " + name);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void print_lgg(const Task& task, const Lgg& lgg) {
  std::cout << "nodes " << lgg.num_nodes() << "\n";
  for (FactId f : lgg.nodes()) std::cout << "  " << task.fact_name(f) << (lgg.verified(f) ? "" : " ?") << "\n";
  std::cout << "edges " << lgg.num_edges() << "\n";
  for (const Edge& e : lgg.edges())
    std::cout << "  " << task.fact_name(e.from) << " -" << to_string(e.kind) << "-> " << task.fact_name(e.to) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landmark extraction, ordering and landmark-controlled planning for STRIPS tasks"};
  app.require_subcommand(1);

  std::string domain_path, problem_path;
  auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("domain", domain_path, "PDDL domain file")->required()->check(CLI::ExistingFile);
    cmd->add_option("problem", problem_path, "PDDL problem file")->required()->check(CLI::ExistingFile);
  };

  // ground
  auto* ground_cmd = app.add_subcommand("ground", "Ground a task and print its size");
  add_io(ground_cmd);
  bool list_all = false;
  ground_cmd->add_flag("--list", list_all, "Print every fact and action");

  // landmarks
  auto* lm_cmd = app.add_subcommand("landmarks", "Compute the landmark generation graph");
  add_io(lm_cmd);
  bool no_level_test = false, no_lookahead = false, no_reasonable = false, no_obedient = false;
  std::string emit;
  lm_cmd->add_flag("--no-level-test", no_level_test, "Use all achievers instead of the earliest ones");
  lm_cmd->add_flag("--no-lookahead", no_lookahead, "Skip lookahead orders");
  lm_cmd->add_flag("--no-reasonable", no_reasonable, "Skip reasonable and obedient orders");
  lm_cmd->add_flag("--no-obedient", no_obedient, "Skip obedient reasonable orders");
  lm_cmd->add_option("--emit", emit, "Output format")->check(CLI::IsMember({"dot", "json"}));
  std::string lm_out;
  lm_cmd->add_option("-o,--output", lm_out, "Write output here instead of stdout");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Solve a task");
  add_io(plan_cmd);
  std::string planner = "bfs", landmarks = "off", mode = "disj", plan_out, external, workdir = "lmplan-work";
  bool safety_net = false, verbose = false;
  double time_limit = default_time_limit();
  std::uint64_t node_limit = 1'000'000;
  plan_cmd->add_option("--planner", planner, "Base planner")->check(CLI::IsMember({"bfs", "gbfs"}));
  plan_cmd->add_option("--landmarks", landmarks, "Wrap the planner in the landmark control loop")
      ->check(CLI::IsMember({"on", "off"}));
  plan_cmd->add_option("--mode", mode, "Goal posed per iteration")->check(CLI::IsMember({"disj", "conjdisj", "dnf"}));
  plan_cmd->add_flag("--safety-net", safety_net, "On a failed sub-task, retry with the original goal");
  plan_cmd->add_option("--time-limit", time_limit, "Seconds")->check(CLI::PositiveNumber);
  plan_cmd->add_option("--node-limit", node_limit, "Expansions per planner call")->check(CLI::PositiveNumber);
  plan_cmd->add_option("--plan-out", plan_out, "Write the plan here");
  plan_cmd->add_option("--external", external,
                       "External base planner command with {domain} {problem} {plan} placeholders");
  plan_cmd->add_option("--workdir", workdir, "Scratch directory for --external");
  plan_cmd->add_flag("-v,--verbose", verbose, "Print the control trace");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact checks by state-space enumeration");
  oracle_cmd->require_subcommand(1);
  std::size_t cap = kDefaultStateCap;
  std::string fact_a, fact_b;
  oracle_cmd->add_option("--cap", cap, "State cap")->check(CLI::PositiveNumber);
  auto add_oracle = [&](const char* name, const char* help, bool pair) {
    auto* c = oracle_cmd->add_subcommand(name, help);
    add_io(c);
    c->add_option("fact", fact_a, "Fact, e.g. \"(clear c)\"")->required();
    if (pair) c->add_option("second", fact_b, "Second fact")->required();
    return c;
  };
  auto* o_landmark = add_oracle("landmark", "Is the fact a landmark?", false);
  auto* o_gn = add_oracle("gn", "Greedy necessary order?", true);
  auto* o_n = add_oracle("n", "Necessary order?", true);
  auto* o_r = add_oracle("r", "Reasonable order?", true);
  auto* o_mutex = add_oracle("mutex", "Are the facts never true together?", true);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate benchmark problems");
  gen_cmd->require_subcommand(1);
  int blocks = 4, cities = 2, locs = 2, planes = 1, packages = 1;
  std::uint64_t seed = 1;
  std::string variant = "arm", domain_name;
  auto* gen_bw = gen_cmd->add_subcommand("blocksworld", "Random Blocksworld problem");
  gen_bw->add_option("-n,--blocks", blocks, "Block count")->check(CLI::PositiveNumber);
  gen_bw->add_option("--variant", variant, "Domain variant")->check(CLI::IsMember({"arm", "no-arm"}));
  gen_bw->add_option("--seed", seed, "Random seed");
  auto* gen_log = gen_cmd->add_subcommand("logistics", "Random Logistics problem");
  gen_log->add_option("--cities", cities)->check(CLI::PositiveNumber);
  gen_log->add_option("--locs", locs, "Locations per city")->check(CLI::PositiveNumber);
  gen_log->add_option("--planes", planes)->check(CLI::PositiveNumber);
  gen_log->add_option("--packages", packages)->check(CLI::PositiveNumber);
  gen_log->add_option("--seed", seed, "Random seed");
  auto* gen_dom = gen_cmd->add_subcommand("domain", "Print a built-in domain");
  gen_dom->add_option("name", domain_name, "blocksworld-arm | blocksworld-no-arm | logistics")->required();
  std::string gen_out;
  gen_cmd->add_option("-o,--output", gen_out, "Write output here instead of stdout");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
  std::string suite_path, series_out, csv_out;
  std::vector<std::string> configs{"bfs", "bfs+L"};
  bench_cmd->add_option("suite", suite_path, "Suite JSON file")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--configs", configs, "e.g. bfs bfs+L gbfs gbfs+L:dnf")->delimiter(',');
  bench_cmd->add_option("--csv", csv_out, "Write rows here instead of stdout");
  bench_cmd->add_option("--series", series_out, "Write the solved-vs-time series here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*ground_cmd) {
      const Input in = load(domain_path, problem_path);
      std::cout << "facts " << in.task.num_facts() << "\nactions " << in.task.num_actions() << "\ninit "
                << to_string(in.task, in.task.init()) << "\ngoal " << to_string(in.task, in.task.goal()) << "\n";
      if (list_all) {
        for (FactId f = 0; f < in.task.num_facts(); ++f) std::cout << "fact " << in.task.fact_name(f) << "\n";
        for (ActionId a = 0; a < in.task.num_actions(); ++a)
          std::cout << "action " << in.task.action_name(a) << "\n";
      }
      return kSolved;
    }

    if (*lm_cmd) {
      const Input in = load(domain_path, problem_path);
      LandmarkOptions opts;
      opts.extraction.use_level_test = !no_level_test;
      opts.extraction.use_lookahead = !no_lookahead;
      opts.ordering.reasonable = !no_reasonable;
      opts.ordering.obedient = !no_obedient;
      const Lgg lgg = build_lgg(in.task, opts);
      if (emit.empty()) {
        print_lgg(in.task, lgg);
      } else {
        write_text(lm_out, export_lgg(in.task, lgg, parse_lgg_format(emit)));
      }
      return kSolved;
    }

    if (*plan_cmd) {
      const Input in = load(domain_path, problem_path);
      ControlConfig control;
      control.mode = parse_control_mode(mode);
      control.safety_net = safety_net;
      control.limits = {time_limit, node_limit};
      control.overall_time_limit_s = time_limit;

      SolveResult r;
      if (!external.empty()) {
        ExternalPlanner ext(in.domain, in.problem, external, workdir);
        if (landmarks == "on") {
          ControlTrace t = run_control(in.task, build_lgg(in.task), ext, control);
          r.solved = t.outcome == ControlOutcome::Solved;
          r.plan = t.plan;
          r.outcome = std::string(to_string(t.outcome));
          r.trace = std::move(t);
        } else {
          PlannerResult p = ext(in.task, control.limits);
          r.solved = p.solved();
          r.plan = p.plan;
          r.outcome = r.solved ? "solved" : std::string(to_string(p.outcome));
        }
      } else {
        r = solve(in.task, parse_planner_kind(planner), landmarks == "on", control);
      }

      if (verbose && r.trace) {
        for (std::size_t i = 0; i < r.trace->iterations.size(); ++i) {
          const auto& it = r.trace->iterations[i];
          std::cerr << "iteration " << i << ": " << it.disj.size() << " disjuncts, fragment " << it.fragment.size()
                    << ", removed " << it.removed.size() << "\n";
        }
      }
      std::cerr << "outcome " << r.outcome << ", length " << r.plan.size() << "\n";
      if (!r.solved) return kFailed;
      if (!validate_plan(in.task, r.plan)) {
        std::cerr << "internal error: plan does not validate\n";
        return kFailed;
      }
      write_text(plan_out, plan_to_text(in.task, r.plan));
      return kSolved;
    }

    if (*oracle_cmd) {
      CLI::App* sub = oracle_cmd->get_subcommands().front();
      const Input in = load(domain_path, problem_path);
      Oracle oracle(in.task, cap);
      const FactId a = fact_arg(in.task, fact_a);
      bool answer = false;
      if (sub == o_landmark) {
        answer = oracle.landmark(a);
      } else {
        const FactId b = fact_arg(in.task, fact_b);
        if (sub == o_gn) answer = oracle.greedy_necessary(a, b);
        if (sub == o_n) answer = oracle.necessary(a, b);
        if (sub == o_mutex) answer = oracle.inconsistent(a, b);
        if (sub == o_r) {
          const auto v = oracle.reasonable(a, b);
          answer = v.holds();
          std::cerr << "aftermath " << v.aftermath << ", deletes " << v.deletes << (v.vacuous ? ", vacuous" : "")
                    << "\n";
        }
      }
      for (const auto& w : oracle.warnings()) std::cerr << "warning: " << w << "\n";
      std::cout << (answer ? "true" : "false") << "\n";
      return kSolved;
    }

    if (*gen_cmd) {
      std::string text;
      if (*gen_bw) text = gen_blocksworld(blocks, variant == "arm" ? BlocksVariant::Arm : BlocksVariant::NoArm, seed);
      if (*gen_log) text = gen_logistics(cities, locs, planes, packages, seed);
      if (*gen_dom) text = std::string(domain_text(domain_name));
      write_text(gen_out, text);
      return kSolved;
    }

    if (*bench_cmd) {
      const Suite suite = parse_suite(pddl::read_file(suite_path));
      std::vector<BenchConfig> parsed;
      for (const auto& c : configs) parsed.push_back(parse_bench_config(c));
      std::optional<std::ofstream> file;
      if (!csv_out.empty()) file.emplace(csv_out);
      const auto records = run_benchmark(suite, parsed, file ? &*file : &std::cout);
      if (!series_out.empty()) write_text(series_out, solved_series_csv(records));
      return kSolved;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const pddl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
