#include "lmplan/ordering.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace lmplan {

InconsistencyTable::InconsistencyTable(std::size_t num_facts) : rows_(num_facts, FactSet(num_facts)) {}

void InconsistencyTable::set(FactId x, FactId y) {
  if (x == y) return;
  rows_[x].set(y);
  rows_[y].set(x);
}

std::size_t InconsistencyTable::num_pairs() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.count();
  return n / 2;
}

InconsistencyTable compute_mutexes(const Task& task) {
  const std::size_t n = task.num_facts();
  // co_reachable[p] holds every q such that {p, q} may be true together.
  std::vector<FactSet> co_reachable(n, FactSet(n));
  FactSet reached = task.init();
  task.init().for_each([&](FactId p) { co_reachable[p] |= task.init(); });

  std::vector<FactSet> effective_add;
  effective_add.reserve(task.num_actions());
  for (ActionId a = 0; a < task.num_actions(); ++a) effective_add.push_back(task.add_set(a) - task.del_set(a));

  auto mark = [&](FactId p, FactId q) {
    if (co_reachable[p].test(q)) return false;
    co_reachable[p].set(q);
    co_reachable[q].set(p);
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (ActionId a = 0; a < task.num_actions(); ++a) {
      const FactSet& pre = task.pre_set(a);
      if (!pre.subset_of(reached)) continue;
      bool admissible = true;
      for (FactId p : task.action(a).pre) {
        if (!pre.subset_of(co_reachable[p])) {
          admissible = false;
          break;
        }
      }
      if (!admissible) continue;

      const FactSet& add = effective_add[a];
      const FactSet& del = task.del_set(a);
      add.for_each([&](FactId p) {
        if (!reached.test(p)) {
          reached.set(p);
          changed = true;
        }
        add.for_each([&](FactId q) { changed |= mark(p, q); });
      });
      // A fact q persisting through a stays with every added p, provided q
      // can hold together with all of a's preconditions.
      reached.for_each([&](FactId q) {
        if (add.test(q) || del.test(q)) return;
        if (!pre.subset_of(co_reachable[q])) return;
        add.for_each([&](FactId p) { changed |= mark(p, q); });
      });
    }
  }

  InconsistencyTable table(n);
  reached.for_each([&](FactId x) {
    FactSet apart = reached - co_reachable[x];
    apart.for_each([&](FactId y) { table.set(x, y); });
  });
  return table;
}

InterferenceConditions interference_conditions(const Task& task, const InconsistencyTable& mutexes, const Lgg& lgg,
                                               FactId l, FactId lp) {
  InterferenceConditions c;
  c[0] = mutexes.query(l, lp);

  const auto& adders = task.achievers(l);
  if (!adders.empty()) {
    FactSet common_add = task.add_set(adders.front());
    FactSet common_del = task.del_set(adders.front());
    for (std::size_t i = 1; i < adders.size(); ++i) {
      common_add &= task.add_set(adders[i]);
      common_del &= task.del_set(adders[i]);
    }
    bool cond2 = false;
    common_add.for_each([&](FactId x) {
      if (x != l && mutexes.query(x, lp)) cond2 = true;
    });
    c[1] = cond2;
    c[2] = common_del.test(lp);
  }

  for (const Edge& e : lgg.in_edges(l)) {
    if (e.kind == EdgeKind::GreedyNecessary && mutexes.query(e.from, lp)) {
      c[3] = true;
      break;
    }
  }
  return c;
}

bool interferes(const Task& task, const InconsistencyTable& mutexes, const Lgg& lgg, FactId l, FactId lp) {
  return interference_conditions(task, mutexes, lgg, l, lp).any();
}

namespace {

using KindMask = unsigned;
constexpr KindMask bit(EdgeKind k) { return 1u << static_cast<unsigned>(k); }

/// Nodes with a (possibly empty) path along `path_kinds` edges into `targets`.
std::set<FactId> reaching(const Lgg& lgg, const std::set<FactId>& targets, KindMask path_kinds) {
  std::map<FactId, std::vector<FactId>> preds;
  for (const Edge& e : lgg.edges())
    if (bit(e.kind) & path_kinds) preds[e.to].push_back(e.from);
  std::set<FactId> seen(targets.begin(), targets.end());
  std::vector<FactId> stack(targets.begin(), targets.end());
  while (!stack.empty()) {
    const FactId f = stack.back();
    stack.pop_back();
    auto it = preds.find(f);
    if (it == preds.end()) continue;
    for (FactId p : it->second)
      if (seen.insert(p).second) stack.push_back(p);
  }
  return seen;
}

/// Ln candidates for L': nodes Ln != L' with L' ->gn Ln+1 and Ln -> Ln+1 of
/// one of `successor_kinds`.
std::set<FactId> shared_successor_partners(const Lgg& lgg, FactId lp, KindMask successor_kinds) {
  std::set<FactId> out;
  for (const Edge& e : lgg.out_edges(lp)) {
    if (e.kind != EdgeKind::GreedyNecessary) continue;
    for (const Edge& in : lgg.in_edges(e.to))
      if ((bit(in.kind) & successor_kinds) && in.from != lp) out.insert(in.from);
  }
  return out;
}

bool gn_path_of_length_one_or_two(const Lgg& lgg, FactId l, FactId lp) {
  if (lgg.has_edge(l, lp, EdgeKind::GreedyNecessary)) return true;
  for (const Edge& e : lgg.out_edges(l))
    if (e.kind == EdgeKind::GreedyNecessary && lgg.has_edge(e.to, lp, EdgeKind::GreedyNecessary)) return true;
  return false;
}

}  // namespace

Lgg add_reasonable_orders(const Task& task, Lgg lgg, const InconsistencyTable& mutexes) {
  const Lgg input = lgg;  // aftermath and interference read the unmodified graph
  const auto nodes = input.nodes();
  constexpr KindMask kPath = bit(EdgeKind::GreedyNecessary) | bit(EdgeKind::LookaheadNecessary);

  auto consider = [&](FactId l, FactId lp) {
    if (l == lp || gn_path_of_length_one_or_two(input, l, lp)) return;
    if (interferes(task, mutexes, input, l, lp)) lgg.add_edge(l, lp, EdgeKind::Reasonable);
  };

  for (FactId lp : nodes) {
    if (task.goal().test(lp)) {
      for (FactId l : nodes) consider(l, lp);
    } else {
      const auto partners = shared_successor_partners(input, lp, kPath);
      if (partners.empty()) continue;
      for (FactId l : reaching(input, partners, kPath)) consider(l, lp);
    }
  }
  return lgg;
}

Lgg add_obedient_orders(const Task& task, Lgg lgg, const InconsistencyTable& mutexes) {
  const Lgg input = lgg;
  constexpr KindMask kPath =
      bit(EdgeKind::GreedyNecessary) | bit(EdgeKind::LookaheadNecessary) | bit(EdgeKind::Reasonable);

  for (FactId lp : input.nodes()) {
    if (task.goal().test(lp)) continue;
    const auto partners = shared_successor_partners(input, lp, kPath);
    if (partners.empty()) continue;
    for (FactId l : reaching(input, partners, kPath)) {
      if (l == lp || input.has_any_edge(l, lp) || gn_path_of_length_one_or_two(input, l, lp)) continue;
      if (interferes(task, mutexes, input, l, lp)) lgg.add_edge(l, lp, EdgeKind::ObedientReasonable);
    }
  }
  return lgg;
}

namespace {

/// Tarjan SCC ids per node.
std::map<FactId, int> strongly_connected_components(const Lgg& lgg) {
  std::map<FactId, std::vector<FactId>> succ;
  for (const Edge& e : lgg.edges()) succ[e.from].push_back(e.to);

  std::map<FactId, int> index, low, comp;
  std::vector<FactId> stack;
  std::set<FactId> on_stack;
  int counter = 0, components = 0;

  std::function<void(FactId)> visit = [&](FactId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (FactId w : succ[v]) {
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      while (true) {
        const FactId w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp[w] = components;
        if (w == v) break;
      }
      ++components;
    }
  };
  for (FactId v : lgg.nodes())
    if (!index.count(v)) visit(v);
  return comp;
}

std::size_t remove_cyclic_edges(Lgg& lgg, EdgeKind kind) {
  const auto comp = strongly_connected_components(lgg);
  std::vector<Edge> doomed;
  for (const Edge& e : lgg.edges())
    if (e.kind == kind && comp.at(e.from) == comp.at(e.to)) doomed.push_back(e);
  for (const Edge& e : doomed) lgg.remove_edge(e);
  return doomed.size();
}

}  // namespace

bool is_acyclic(const Lgg& lgg) {
  std::map<FactId, std::size_t> indegree;
  std::map<FactId, std::vector<FactId>> succ;
  for (FactId v : lgg.nodes()) indegree[v] = 0;
  for (const Edge& e : lgg.edges()) {
    ++indegree[e.to];
    succ[e.from].push_back(e.to);
  }
  std::vector<FactId> ready;
  for (const auto& [v, d] : indegree)
    if (d == 0) ready.push_back(v);
  std::size_t visited = 0;
  while (!ready.empty()) {
    const FactId v = ready.back();
    ready.pop_back();
    ++visited;
    for (FactId w : succ[v])
      if (--indegree[w] == 0) ready.push_back(w);
  }
  return visited == lgg.num_nodes();
}

Lgg remove_cycles(Lgg lgg) {
  if (is_acyclic(lgg)) return lgg;
  remove_cyclic_edges(lgg, EdgeKind::ObedientReasonable);
  if (is_acyclic(lgg)) return lgg;
  remove_cyclic_edges(lgg, EdgeKind::Reasonable);
  if (!is_acyclic(lgg)) throw std::logic_error("LGG cycle formed by gn/ln edges alone");
  return lgg;
}

Lgg add_orders(const Task& task, Lgg lgg, const InconsistencyTable& mutexes, const OrderingOptions& options) {
  if (options.reasonable) {
    lgg = add_reasonable_orders(task, std::move(lgg), mutexes);
    if (options.obedient) lgg = add_obedient_orders(task, std::move(lgg), mutexes);
  }
  return remove_cycles(std::move(lgg));
}

}  // namespace lmplan
