#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lmplan/rpg.hpp"
#include "lmplan/strips.hpp"

namespace lmplan {

enum class EdgeKind : std::uint8_t {
  GreedyNecessary,     ///< gn; also used for the provably necessary orders of the level-test-free mode
  LookaheadNecessary,  ///< ln
  Reasonable,          ///< r
  ObedientReasonable,  ///< rO
};

std::string_view to_string(EdgeKind kind);
EdgeKind parse_edge_kind(std::string_view text);

struct Edge {
  FactId from;
  FactId to;
  EdgeKind kind;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Landmark generation graph: landmark facts with typed order edges.
///
/// Nodes and edges are kept in ordered containers so that every traversal is
/// in ascending (from, to) id order. Self-edges are rejected.
class Lgg {
 public:
  bool add_node(FactId f, bool verified = false);
  bool has_node(FactId f) const { return nodes_.count(f) > 0; }
  /// Removes the node and every incident edge.
  void remove_node(FactId f);
  bool verified(FactId f) const;
  void set_verified(FactId f, bool v);

  /// Inserts the edge if absent; both endpoints must already be nodes.
  bool add_edge(FactId from, FactId to, EdgeKind kind);
  bool remove_edge(const Edge& e);
  bool has_edge(FactId from, FactId to, EdgeKind kind) const;
  /// Any edge kind.
  bool has_any_edge(FactId from, FactId to) const;

  std::vector<FactId> nodes() const;
  const std::set<Edge>& edges() const { return edges_; }
  std::vector<Edge> out_edges(FactId f) const;
  std::vector<Edge> in_edges(FactId f) const;
  std::size_t in_degree(FactId f) const;

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t count_edges(EdgeKind kind) const;
  bool empty() const { return nodes_.empty(); }

  friend bool operator==(const Lgg&, const Lgg&) = default;

 private:
  std::map<FactId, bool> nodes_;  // fact -> verified
  std::set<Edge> edges_;
};

/// Candidate generation loop: goals seed the graph, shared preconditions of
/// the achievers of each open candidate become new candidates with gn edges.
/// With the level test only achievers at level(L')-1 are intersected; without
/// it all achievers are, which yields provably necessary orders.
Lgg generate_candidates(const Task& task, const Rpg& rpg, bool use_level_test = true);

/// One-step lookahead: for every node whose achievers all share a
/// precondition predicate, intersects the preconditions of the earliest
/// achievers of those intermediate facts and inserts ln edges. New nodes are
/// expanded by the candidate loop (with lookahead) until closure.
Lgg lookahead_extend(const Task& task, const Rpg& rpg, Lgg lgg, bool use_level_test = true);

/// Drops every node outside I ∪ G whose removal of achievers keeps the
/// delete-relaxed task solvable; survivors are marked verified.
Lgg verify_landmarks(const Task& task, Lgg lgg);

struct ExtractionOptions {
  bool use_level_test = true;
  bool use_lookahead = true;
};

/// generate_candidates (+ lookahead_extend) + verify_landmarks on the task's
/// goals-first RPG. A relaxed-unsolvable task yields the goal nodes only.
Lgg extract_landmarks(const Task& task, const ExtractionOptions& options = {});

}  // namespace lmplan
