#include "lmplan/strips.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lmplan {

std::string to_string(const Atom& atom) {
  std::string out = "(" + atom.predicate;
  for (const auto& arg : atom.args) {
    out += ' ';
    out += arg;
  }
  out += ')';
  return out;
}

Atom parse_atom(std::string_view text) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i >= text.size() || text[i] != '(') throw std::invalid_argument("atom must start with '('");
  ++i;
  std::vector<std::string> tokens;
  while (true) {
    skip_ws();
    if (i >= text.size()) throw std::invalid_argument("unterminated atom");
    if (text[i] == ')') {
      ++i;
      break;
    }
    std::string tok;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '(' && text[i] != ')') {
      tok += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
      ++i;
    }
    if (tok.empty()) throw std::invalid_argument("unexpected '(' inside atom");
    tokens.push_back(std::move(tok));
  }
  skip_ws();
  if (i != text.size()) throw std::invalid_argument("trailing characters after atom");
  if (tokens.empty()) throw std::invalid_argument("empty atom");
  Atom atom;
  atom.predicate = tokens.front();
  atom.args.assign(tokens.begin() + 1, tokens.end());
  return atom;
}

namespace {

void normalise(std::vector<FactId>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

}  // namespace

Task::Task(std::vector<Atom> facts, std::vector<Action> actions, State init, FactSet goal)
    : facts_(std::move(facts)),
      actions_(std::move(actions)),
      init_(std::move(init)),
      goal_(std::move(goal)) {
  const std::size_t n = facts_.size();
  if (init_.universe() != n || goal_.universe() != n)
    throw std::invalid_argument("init/goal universe does not match fact count");
  if (n > std::numeric_limits<FactId>::max() || actions_.size() > std::numeric_limits<ActionId>::max())
    throw std::invalid_argument("task too large");

  achievers_.resize(n);
  consumers_.resize(n);
  for (FactId f = 0; f < n; ++f) {
    auto [it, fresh] = fact_index_.emplace(to_string(facts_[f]), f);
    if (!fresh) throw std::invalid_argument("duplicate fact " + it->first);
  }
  pre_sets_.reserve(actions_.size());
  add_sets_.reserve(actions_.size());
  del_sets_.reserve(actions_.size());
  for (ActionId a = 0; a < actions_.size(); ++a) {
    Action& act = actions_[a];
    normalise(act.pre);
    normalise(act.add);
    normalise(act.del);
    FactSet pre(n), add(n), del(n);
    for (FactId f : act.pre) {
      if (f >= n) throw std::invalid_argument("action references unknown fact");
      pre.set(f);
      consumers_[f].push_back(a);
    }
    for (FactId f : act.add) {
      if (f >= n) throw std::invalid_argument("action references unknown fact");
      add.set(f);
      achievers_[f].push_back(a);
    }
    for (FactId f : act.del) {
      if (f >= n) throw std::invalid_argument("action references unknown fact");
      del.set(f);
    }
    pre_sets_.push_back(std::move(pre));
    add_sets_.push_back(std::move(add));
    del_sets_.push_back(std::move(del));
    // Later duplicates keep the first id; grounding never produces them.
    action_index_.emplace(to_string(act.name), a);
  }
}

std::optional<FactId> Task::find_fact(std::string_view display) const {
  auto it = fact_index_.find(std::string(display));
  if (it == fact_index_.end()) {
    // Accept non-canonical spacing/case.
    try {
      it = fact_index_.find(to_string(parse_atom(display)));
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
    if (it == fact_index_.end()) return std::nullopt;
  }
  return it->second;
}

std::optional<ActionId> Task::find_action(std::string_view display) const {
  auto it = action_index_.find(std::string(display));
  if (it == action_index_.end()) {
    try {
      it = action_index_.find(to_string(parse_atom(display)));
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
    if (it == action_index_.end()) return std::nullopt;
  }
  return it->second;
}

FactId Task::fact_id(std::string_view display) const {
  auto f = find_fact(display);
  if (!f) throw std::out_of_range("unknown fact " + std::string(display));
  return *f;
}

ActionId Task::action_id(std::string_view display) const {
  auto a = find_action(display);
  if (!a) throw std::out_of_range("unknown action " + std::string(display));
  return *a;
}

FactSet Task::make_set(std::initializer_list<FactId> ids) const {
  FactSet s(facts_.size());
  for (FactId f : ids) s.set(f);
  return s;
}

bool is_applicable(const Task& task, const State& s, ActionId a) {
  for (FactId f : task.action(a).pre)
    if (!s.test(f)) return false;
  return true;
}

void apply_in_place(const Task& task, State& s, ActionId a) {
  const Action& act = task.action(a);
  for (FactId f : act.add) s.set(f);
  for (FactId f : act.del) s.reset(f);
}

std::optional<State> apply(const Task& task, const State& s, ActionId a) {
  if (a >= task.num_actions()) throw std::out_of_range("action id outside task");
  if (!is_applicable(task, s, a)) return std::nullopt;
  State next = s;
  apply_in_place(task, next, a);
  return next;
}

std::optional<State> result(const Task& task, const State& s, const Plan& plan) {
  State cur = s;
  for (ActionId a : plan.steps) {
    if (a >= task.num_actions()) throw std::out_of_range("action id outside task");
    if (!is_applicable(task, cur, a)) return std::nullopt;
    apply_in_place(task, cur, a);
  }
  return cur;
}

bool validate_plan(const Task& task, const Plan& plan) {
  auto end = result(task, task.init(), plan);
  return end && task.goal().subset_of(*end);
}

bool plan_obeys_order(const Task& task, const Plan& plan, FactId l, FactId lp) {
  if (task.init().test(l)) return true;
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
  std::size_t first_l = kNever, first_lp = kNever;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const FactSet& add = task.add_set(plan.steps[i]);
    if (first_l == kNever && add.test(l)) first_l = i;
    if (first_lp == kNever && add.test(lp)) first_lp = i;
  }
  if (first_lp == kNever) return true;
  return first_l < first_lp;
}

std::string to_string(const Task& task, const FactSet& set) {
  std::string out = "{";
  bool first = true;
  set.for_each([&](FactId f) {
    if (!first) out += ", ";
    first = false;
    out += task.fact_name(f);
  });
  out += '}';
  return out;
}

std::string plan_to_text(const Task& task, const Plan& plan) {
  std::ostringstream os;
  for (ActionId a : plan.steps) os << task.action_name(a) << '\n';
  return os.str();
}

}  // namespace lmplan
