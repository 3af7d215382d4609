#pragma once

#include <optional>
#include <vector>

#include "cpn/net.hpp"
#include "cpn/reachability.hpp"

namespace cpn {

enum class BoundStatus { Finite, Unbounded };

enum class YieldStatus { Ok, NoSolution, BudgetExhausted };

struct YieldResult {
  YieldStatus status = YieldStatus::Ok;
  BoundStatus bound_status = BoundStatus::Finite;
  // Total certified token mass on the goal place (its initial mass included).
  Rat yield;
  std::optional<Parikh> parikh;
  IndexSet support;
  // Binary search: at_least_reachable calls made.
  int queries = 0;
  // MILP: exclusion cuts added.
  int cuts = 0;
  // MILP: the excluded supports, in order.
  std::vector<IndexSet> exclusion_log;
  // True when the MILP linking bound fell back to the configured ceiling.
  bool linking_ceiling_used = false;
  // Total wall time spent inside at_least_reachable, for benchmarking.
  double alr_seconds = 0.0;
};

// LP over-approximation of the achievable mass on the goal place: maximizes
// (C v)[goal] subject to m0 + C v >= 0 and reports m0(goal) plus the optimum,
// or infinity when the program is unbounded. No firing-set check.
ExtRat yield_upper_bound(const Cpn& net, const Marking& m0, Index goal_place);

// Maximum yield via binary search over at_least_reachable. The bracket starts
// at [m0(goal), LP bound]; when the bound itself is confirmed reachable it is
// returned exactly, otherwise bisection runs until the bracket is narrower
// than epsilon. An infinite LP bound short-circuits to an unbounded result.
YieldResult max_yield_binsearch(const Cpn& net, const Marking& m0, Index goal_place,
                                const Rat& epsilon, ReachMode mode,
                                const ReachOptions& options = {});

}  // namespace cpn
