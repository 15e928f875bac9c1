#include "lmplan/lgg.hpp"

#include <algorithm>
#include <stdexcept>

namespace lmplan {

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::GreedyNecessary: return "gn";
    case EdgeKind::LookaheadNecessary: return "ln";
    case EdgeKind::Reasonable: return "r";
    case EdgeKind::ObedientReasonable: return "rO";
  }
  return "?";
}

EdgeKind parse_edge_kind(std::string_view text) {
  if (text == "gn") return EdgeKind::GreedyNecessary;
  if (text == "ln") return EdgeKind::LookaheadNecessary;
  if (text == "r") return EdgeKind::Reasonable;
  if (text == "rO") return EdgeKind::ObedientReasonable;
  throw std::invalid_argument("unknown edge kind " + std::string(text));
}

// ---------------------------------------------------------------------------
// Lgg

bool Lgg::add_node(FactId f, bool verified) { return nodes_.emplace(f, verified).second; }

void Lgg::remove_node(FactId f) {
  nodes_.erase(f);
  std::erase_if(edges_, [f](const Edge& e) { return e.from == f || e.to == f; });
}

bool Lgg::verified(FactId f) const {
  auto it = nodes_.find(f);
  return it != nodes_.end() && it->second;
}

void Lgg::set_verified(FactId f, bool v) { nodes_.at(f) = v; }

bool Lgg::add_edge(FactId from, FactId to, EdgeKind kind) {
  if (from == to) throw std::invalid_argument("self-edge in LGG");
  if (!has_node(from) || !has_node(to)) throw std::invalid_argument("LGG edge endpoint is not a node");
  return edges_.insert({from, to, kind}).second;
}

bool Lgg::remove_edge(const Edge& e) { return edges_.erase(e) > 0; }

bool Lgg::has_edge(FactId from, FactId to, EdgeKind kind) const { return edges_.count({from, to, kind}) > 0; }

bool Lgg::has_any_edge(FactId from, FactId to) const {
  auto it = edges_.lower_bound({from, to, EdgeKind::GreedyNecessary});
  return it != edges_.end() && it->from == from && it->to == to;
}

std::vector<FactId> Lgg::nodes() const {
  std::vector<FactId> out;
  out.reserve(nodes_.size());
  for (const auto& [f, v] : nodes_) out.push_back(f);
  return out;
}

std::vector<Edge> Lgg::out_edges(FactId f) const {
  std::vector<Edge> out;
  for (auto it = edges_.lower_bound({f, 0, EdgeKind::GreedyNecessary}); it != edges_.end() && it->from == f; ++it)
    out.push_back(*it);
  return out;
}

std::vector<Edge> Lgg::in_edges(FactId f) const {
  std::vector<Edge> out;
  for (const auto& e : edges_)
    if (e.to == f) out.push_back(e);
  return out;
}

std::size_t Lgg::in_degree(FactId f) const {
  return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [f](const Edge& e) { return e.to == f; }));
}

std::size_t Lgg::count_edges(EdgeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [kind](const Edge& e) { return e.kind == kind; }));
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

std::vector<ActionId> earliest_achievers(const Task& task, const Rpg& rpg, FactId f, bool use_level_test) {
  if (!use_level_test) return task.achievers(f);
  std::vector<ActionId> out;
  const int level = rpg.fact_level[f];
  if (level == Rpg::kInfinity || level == 0) return out;
  for (ActionId a : task.achievers(f))
    if (rpg.action_level[a] == level - 1) out.push_back(a);
  return out;
}

// Intersection of the preconditions; empty for an empty action set.
FactSet shared_preconditions(const Task& task, const std::vector<ActionId>& actions) {
  if (actions.empty()) return task.empty_set();
  FactSet shared = task.pre_set(actions.front());
  for (std::size_t i = 1; i < actions.size(); ++i) shared &= task.pre_set(actions[i]);
  return shared;
}

class CandidateLoop {
 public:
  CandidateLoop(const Task& task, const Rpg& rpg, Lgg& lgg, bool level_test, bool lookahead)
      : task_(task), rpg_(rpg), lgg_(lgg), level_test_(level_test), lookahead_(lookahead) {}

  /// Runs the loop from the given open candidates until no new node appears.
  void run(std::vector<FactId> open) {
    while (!open.empty()) {
      std::sort(open.begin(), open.end());
      std::vector<FactId> next;
      for (FactId lp : open) expand(lp, next);
      open = std::move(next);
    }
  }

  /// Only the lookahead step for one node; new nodes are appended to `next`.
  void lookahead_only(FactId lp, std::vector<FactId>& next) {
    if (rpg_.fact_level[lp] == 0) return;
    lookahead(lp, earliest_achievers(task_, rpg_, lp, level_test_), next);
  }

 private:
  void expand(FactId lp, std::vector<FactId>& next) {
    if (rpg_.fact_level[lp] == 0) return;
    const auto achievers = earliest_achievers(task_, rpg_, lp, level_test_);
    shared_preconditions(task_, achievers).for_each([&](FactId l) {
      if (l == lp) return;
      if (lgg_.add_node(l)) next.push_back(l);
      lgg_.add_edge(l, lp, EdgeKind::GreedyNecessary);
    });
    if (lookahead_) lookahead(lp, achievers, next);
  }

  void lookahead(FactId lp, const std::vector<ActionId>& achievers, std::vector<FactId>& next) {
    if (achievers.empty()) return;
    // Predicates that occur in the precondition of every achiever.
    std::set<std::string> predicates;
    for (FactId f : task_.action(achievers.front()).pre) predicates.insert(task_.fact(f).predicate);
    for (const std::string& pred : predicates) {
      FactSet intermediate = task_.empty_set();
      bool every = true;
      for (ActionId a : achievers) {
        bool has = false;
        for (FactId f : task_.action(a).pre) {
          if (task_.fact(f).predicate == pred) {
            intermediate.set(f);
            has = true;
          }
        }
        if (!has) {
          every = false;
          break;
        }
      }
      // A single intermediate fact is a shared precondition, already a gn candidate.
      if (!every || intermediate.count() < 2) continue;

      std::vector<ActionId> second_step;
      bool usable = true;
      intermediate.for_each([&](FactId lj) {
        if (!usable) return;
        const auto ach = earliest_achievers(task_, rpg_, lj, level_test_);
        // An initially true or unachievable intermediate fact gives nothing.
        if (rpg_.fact_level[lj] == 0 || ach.empty()) {
          usable = false;
          return;
        }
        second_step.insert(second_step.end(), ach.begin(), ach.end());
      });
      if (!usable) continue;
      std::sort(second_step.begin(), second_step.end());
      second_step.erase(std::unique(second_step.begin(), second_step.end()), second_step.end());

      FactSet shared = shared_preconditions(task_, second_step) - intermediate;
      shared.for_each([&](FactId l) {
        if (l == lp) return;
        if (lgg_.has_edge(l, lp, EdgeKind::GreedyNecessary)) return;
        if (lgg_.add_node(l)) next.push_back(l);
        lgg_.add_edge(l, lp, EdgeKind::LookaheadNecessary);
      });
    }
  }

  const Task& task_;
  const Rpg& rpg_;
  Lgg& lgg_;
  bool level_test_;
  bool lookahead_;
};

}  // namespace

Lgg generate_candidates(const Task& task, const Rpg& rpg, bool use_level_test) {
  Lgg lgg;
  std::vector<FactId> open = task.goal().to_vector();
  for (FactId g : open) lgg.add_node(g);
  CandidateLoop(task, rpg, lgg, use_level_test, false).run(std::move(open));
  return lgg;
}

Lgg lookahead_extend(const Task& task, const Rpg& rpg, Lgg lgg, bool use_level_test) {
  CandidateLoop loop(task, rpg, lgg, use_level_test, true);
  std::vector<FactId> fresh;
  for (FactId lp : lgg.nodes()) loop.lookahead_only(lp, fresh);
  loop.run(std::move(fresh));
  return lgg;
}

Lgg verify_landmarks(const Task& task, Lgg lgg) {
  std::vector<std::uint8_t> usable(task.num_actions());
  for (FactId l : lgg.nodes()) {
    if (task.init().test(l) || task.goal().test(l)) {
      lgg.set_verified(l, true);
      continue;
    }
    for (ActionId a = 0; a < task.num_actions(); ++a) usable[a] = !task.add_set(a).test(l);
    if (relaxed_solvable(task, usable, task.init(), task.goal()))
      lgg.remove_node(l);
    else
      lgg.set_verified(l, true);
  }
  return lgg;
}

Lgg extract_landmarks(const Task& task, const ExtractionOptions& options) {
  auto rpg = build_rpg(task, RpgMode::GoalsFirstReached);
  if (!rpg) {
    Lgg lgg;
    task.goal().for_each([&](FactId g) { lgg.add_node(g, true); });
    return lgg;
  }
  Lgg lgg = generate_candidates(task, *rpg, options.use_level_test);
  if (options.use_lookahead) lgg = lookahead_extend(task, *rpg, std::move(lgg), options.use_level_test);
  return verify_landmarks(task, std::move(lgg));
}

}  // namespace lmplan
