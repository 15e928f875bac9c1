#pragma once

#include <bitset>
#include <vector>

#include "lmplan/lgg.hpp"
#include "lmplan/strips.hpp"

namespace lmplan {

/// Symmetric fact-pair relation; query(x, y) == true means no reachable
/// state contains both x and y.
class InconsistencyTable {
 public:
  InconsistencyTable() = default;
  explicit InconsistencyTable(std::size_t num_facts);

  bool query(FactId x, FactId y) const { return x != y && rows_[x].test(y); }
  void set(FactId x, FactId y);
  std::size_t num_facts() const { return rows_.size(); }
  /// Number of unordered inconsistent pairs.
  std::size_t num_pairs() const;
  const FactSet& row(FactId x) const { return rows_[x]; }

 private:
  std::vector<FactSet> rows_;
};

/// Persistent-mutex fixpoint: starting from the initial state, admits actions
/// whose preconditions are reached and pairwise non-mutex; a fact pair stays
/// mutex until some admitted action adds both facts, or adds one of them
/// without deleting the other while the other is non-mutex with all of the
/// action's preconditions.
InconsistencyTable compute_mutexes(const Task& task);

/// Which of the four interference conditions hold for L interfering with L'.
/// Bit i-1 is condition i.
using InterferenceConditions = std::bitset<4>;

InterferenceConditions interference_conditions(const Task& task, const InconsistencyTable& mutexes, const Lgg& lgg,
                                               FactId l, FactId lp);

bool interferes(const Task& task, const InconsistencyTable& mutexes, const Lgg& lgg, FactId l, FactId lp);

/// Inserts L ->r L' for every aftermath pair (goal L', or the shared-successor
/// pattern over gn/ln paths) where L interferes with L'. Pairs joined by a gn
/// path of length 1 or 2 are skipped.
Lgg add_reasonable_orders(const Task& task, Lgg lgg, const InconsistencyTable& mutexes);

/// Same pattern for non-goal L' with r edges admitted on the L-to-Ln path and
/// the Ln -> Ln+1 edge; inserts rO edges. Single pass; new rO edges are not
/// used as input.
Lgg add_obedient_orders(const Task& task, Lgg lgg, const InconsistencyTable& mutexes);

/// Removes rO edges that lie on a cycle, then r edges that lie on a cycle.
/// Throws std::logic_error if gn/ln edges alone still form a cycle.
Lgg remove_cycles(Lgg lgg);

bool is_acyclic(const Lgg& lgg);

struct OrderingOptions {
  bool reasonable = true;
  bool obedient = true;
};

/// Reasonable + obedient orders followed by cycle removal.
Lgg add_orders(const Task& task, Lgg lgg, const InconsistencyTable& mutexes, const OrderingOptions& options = {});

}  // namespace lmplan
