#include "lmplan/control.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lmplan {

Plan CompiledGoal::unmap(const Plan& plan) const {
  Plan out;
  for (ActionId a : plan.steps)
    if (a < first_artificial) out.steps.push_back(a);
  return out;
}

Task with_init(const Task& task, const State& s) {
  return Task(task.facts(), task.actions(), s, task.goal());
}

namespace {

FactSet widen(const FactSet& s, std::size_t universe) {
  FactSet out(universe);
  s.for_each([&](FactId f) { out.set(f); });
  return out;
}

CompiledGoal compile(const Task& task, const State& s, const std::vector<std::vector<FactId>>& terms,
                     const std::vector<FactId>& conj) {
  if (terms.empty()) throw std::invalid_argument("empty disjunction");
  std::vector<Atom> facts = task.facts();
  const auto g = static_cast<FactId>(facts.size());
  facts.push_back({std::string(kGoalReachedPredicate), {}});

  std::vector<Action> actions = task.actions();
  CompiledGoal out;
  out.goal_fact = g;
  out.first_artificial = static_cast<ActionId>(actions.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    Action a;
    a.name = {"lm-reach-" + std::to_string(k), {}};
    a.pre = terms[k];
    a.add = {g};
    a.artificial = true;
    actions.push_back(std::move(a));
    out.disjuncts.push_back(terms[k]);
  }
  FactSet goal(facts.size());
  goal.set(g);
  for (FactId f : conj) goal.set(f);
  out.task = Task(std::move(facts), std::move(actions), widen(s, task.num_facts() + 1), std::move(goal));
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

CompiledGoal compile_disjunctive_goal(const Task& task, const State& s, const std::vector<FactId>& disj,
                                      const std::vector<FactId>& conj) {
  std::vector<std::vector<FactId>> terms;
  for (FactId f : disj) terms.push_back({f});
  return compile(task, s, terms, conj);
}

CompiledGoal compile_dnf_goal(const Task& task, const State& s, const std::vector<std::vector<FactId>>& terms) {
  return compile(task, s, terms, {});
}

std::vector<FactId> leaves(const Lgg& lgg) {
  std::set<FactId> has_in;
  for (const Edge& e : lgg.edges()) has_in.insert(e.to);
  std::vector<FactId> out;
  for (FactId f : lgg.nodes())
    if (!has_in.count(f)) out.push_back(f);
  if (out.empty() && !lgg.empty()) throw std::logic_error("LGG has no leaf; it contains a cycle");
  return out;
}

std::vector<std::vector<FactId>> consistent_partition(const std::vector<FactId>& facts,
                                                      const InconsistencyTable& mutexes) {
  std::vector<std::vector<FactId>> parts;
  std::vector<FactId> rest = facts;
  while (!rest.empty()) {
    std::vector<FactId> part, left;
    for (FactId f : rest) {
      const bool fits =
          std::none_of(part.begin(), part.end(), [&](FactId p) { return mutexes.query(p, f); });
      (fits ? part : left).push_back(f);
    }
    parts.push_back(std::move(part));
    rest = std::move(left);
  }
  return parts;
}

ControlMode parse_control_mode(std::string_view text) {
  if (text == "disj") return ControlMode::Disjunctive;
  if (text == "conjdisj") return ControlMode::ConjPlusDisj;
  if (text == "dnf") return ControlMode::DnfMaxConsistent;
  throw std::invalid_argument("unknown control mode " + std::string(text));
}

std::string_view to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::Disjunctive: return "disj";
    case ControlMode::ConjPlusDisj: return "conjdisj";
    case ControlMode::DnfMaxConsistent: return "dnf";
  }
  return "?";
}

std::string_view to_string(ControlOutcome outcome) {
  switch (outcome) {
    case ControlOutcome::Solved: return "solved";
    case ControlOutcome::SubtaskFailed: return "subtask-failed";
    case ControlOutcome::BasePlannerFailed: return "base-planner-failed";
  }
  return "?";
}

BasePlanner make_base_planner(PlannerKind kind) {
  return [kind](const Task& t, const Limits& l) { return run_planner(kind, t, l); };
}

ControlTrace run_control(const Task& task, Lgg lgg, const BasePlanner& base, const ControlConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  ControlTrace trace;
  State s = task.init();

  auto call = [&](const Task& sub) {
    Limits l = config.limits;
    l.time_limit_s = std::max(0.0, std::min(l.time_limit_s, config.overall_time_limit_s - seconds_since(t0)));
    PlannerResult r = base(sub, l);
    trace.expanded += r.expanded;
    return r;
  };
  auto finish = [&](ControlOutcome o) {
    trace.outcome = o;
    trace.seconds = seconds_since(t0);
    return trace;
  };
  auto advance = [&](const Plan& fragment) {
    for (ActionId a : fragment.steps) {
      if (!is_applicable(task, s, a)) throw std::logic_error("base planner returned an inapplicable step");
      apply_in_place(task, s, a);
      trace.plan.steps.push_back(a);
    }
  };

  std::optional<InconsistencyTable> mutexes;
  if (config.mode == ControlMode::DnfMaxConsistent) mutexes = compute_mutexes(task);

  task.init().for_each([&](FactId f) {
    if (lgg.has_node(f)) lgg.remove_node(f);
  });
  std::vector<FactId> conj;  // achieved top-level goals, ConjPlusDisj only

  while (!lgg.empty()) {
    ControlIteration it;
    std::vector<FactId> disj;
    // Leaves that hold already count as achieved; planning for them would
    // return the empty plan and make no progress.
    while (!lgg.empty()) {
      disj.clear();
      std::vector<FactId> holding;
      for (FactId f : leaves(lgg)) (s.test(f) ? holding : disj).push_back(f);
      if (holding.empty()) break;
      for (FactId f : holding) {
        lgg.remove_node(f);
        it.already_true.push_back(f);
        if (config.mode == ControlMode::ConjPlusDisj && task.goal().test(f)) conj.push_back(f);
      }
    }
    if (lgg.empty()) break;

    CompiledGoal compiled;
    if (config.mode == ControlMode::DnfMaxConsistent) {
      compiled = compile_dnf_goal(task, s, consistent_partition(disj, *mutexes));
    } else {
      if (config.mode == ControlMode::ConjPlusDisj) it.conj = conj;
      compiled = compile_disjunctive_goal(task, s, disj, it.conj);
    }
    it.disj = compiled.disjuncts;

    const PlannerResult r = call(compiled.task);
    it.base_outcome = r.outcome;
    if (!r.solved()) {
      const std::size_t index = trace.iterations.size();
      if (config.safety_net) {
        const PlannerResult rescue = call(with_init(task, s));
        if (rescue.solved()) {
          it.safety_net_used = true;
          it.fragment = rescue.plan;
          advance(rescue.plan);
          it.post = s;
          trace.iterations.push_back(std::move(it));
          return finish(ControlOutcome::Solved);
        }
      }
      it.post = s;
      trace.iterations.push_back(std::move(it));
      trace.failed_iteration = index;
      return finish(ControlOutcome::SubtaskFailed);
    }

    it.fragment = compiled.unmap(r.plan);
    FactSet added = task.empty_set();
    for (ActionId a : it.fragment.steps) added |= task.add_set(a);
    advance(it.fragment);
    it.post = s;
    for (FactId f : disj) {
      if (!added.test(f)) continue;
      lgg.remove_node(f);
      it.removed.push_back(f);
      if (config.mode == ControlMode::ConjPlusDisj && task.goal().test(f)) conj.push_back(f);
    }
    const bool progress = !it.removed.empty();
    trace.iterations.push_back(std::move(it));
    if (!progress) {
      trace.failed_iteration = trace.iterations.size() - 1;
      return finish(ControlOutcome::SubtaskFailed);
    }
  }

  if (task.goal().subset_of(s)) {
    trace.final_call_skipped = true;
    return finish(ControlOutcome::Solved);
  }
  const PlannerResult r = call(with_init(task, s));
  if (!r.solved()) return finish(ControlOutcome::BasePlannerFailed);
  advance(r.plan);
  return finish(ControlOutcome::Solved);
}

// ---------------------------------------------------------------------------
// External planner

ExternalPlanner::ExternalPlanner(pddl::DomainAst domain, pddl::ProblemAst problem, std::string command,
                                 std::string workdir)
    : domain_(std::move(domain)), problem_(std::move(problem)), command_(std::move(command)),
      workdir_(std::move(workdir)) {
  std::set<std::string> dynamic;
  for (const auto& a : domain_.actions) {
    for (const auto& e : a.add) dynamic.insert(e.predicate);
    for (const auto& e : a.del) dynamic.insert(e.predicate);
  }
  for (const Atom& atom : problem_.init)
    if (!dynamic.count(atom.predicate)) static_init_.push_back(atom);
}

std::string ExternalPlanner::domain_text(const Task& task) const {
  pddl::DomainAst d = domain_;
  for (const auto& o : problem_.objects)
    if (std::none_of(d.constants.begin(), d.constants.end(), [&](const auto& c) { return c.name == o.name; }))
      d.constants.push_back(o);
  d.predicates.push_back({std::string(kGoalReachedPredicate), {}});
  for (ActionId a = 0; a < task.num_actions(); ++a) {
    const Action& act = task.action(a);
    if (!act.artificial) continue;
    pddl::ActionSchema schema;
    schema.name = act.name.predicate;
    for (FactId f : act.pre) schema.pre.push_back({task.fact(f).predicate, task.fact(f).args});
    for (FactId f : act.add) schema.add.push_back({task.fact(f).predicate, task.fact(f).args});
    d.actions.push_back(std::move(schema));
  }
  return pddl::to_pddl(d);
}

std::string ExternalPlanner::problem_text(const Task& task) const {
  pddl::ProblemAst p;
  p.name = problem_.name;
  p.domain = domain_.name;
  p.init = static_init_;
  task.init().for_each([&](FactId f) { p.init.push_back(task.fact(f)); });
  task.goal().for_each([&](FactId f) { p.goal.push_back(task.fact(f)); });
  return pddl::to_pddl(p);
}

namespace {

std::string substitute(std::string text, const std::string& key, const std::string& value) {
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size()))
    text.replace(pos, key.size(), value);
  return text;
}

}  // namespace

PlannerResult ExternalPlanner::operator()(const Task& task, const Limits& limits) const {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(workdir_);
  const std::string domain_path = (fs::path(workdir_) / "domain.pddl").string();
  const std::string problem_path = (fs::path(workdir_) / "problem.pddl").string();
  const std::string plan_path = (fs::path(workdir_) / "plan.txt").string();
  std::ofstream(domain_path) << domain_text(task);
  std::ofstream(problem_path) << problem_text(task);
  fs::remove(plan_path);

  std::string cmd = substitute(command_, "{domain}", domain_path);
  cmd = substitute(cmd, "{problem}", problem_path);
  cmd = substitute(cmd, "{plan}", plan_path);
  const long secs = std::max(1L, static_cast<long>(std::ceil(limits.time_limit_s)));
  cmd = "timeout " + std::to_string(secs) + " " + cmd + " >/dev/null 2>&1";

  PlannerResult res;
  const int status = std::system(cmd.c_str());
  res.seconds = seconds_since(t0);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0 || !fs::exists(plan_path)) return res;
  res.plan = parse_plan(task, pddl::read_file(plan_path));
  res.outcome = PlannerOutcome::Plan;
  return res;
}

Plan parse_plan(const Task& task, std::string_view text) {
  Plan plan;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto c = line.find(';'); c != std::string::npos) line.erase(c);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto a = task.find_action(line);
    if (!a) throw std::invalid_argument("unknown action in plan: " + line);
    plan.steps.push_back(*a);
  }
  return plan;
}

}  // namespace lmplan
