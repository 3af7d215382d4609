#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cpn/lp.hpp"
#include "cpn/net.hpp"
#include "cpn/yield.hpp"

namespace cpn {

/// A linear program plus a set of variables constrained to {0,1}.
struct MilpProblem {
  LinearProgram lp;
  std::vector<int> integral;
};

/// Forbids every boolean assignment whose support is exactly the excluded
/// set: sum over the set of b_t minus the sum over its complement stays
/// at most |set| - 1.
struct ExclusionCut {
  IndexSet excluded_support;
  void append_to(LinearProgram& lp, int b_offset, int num_booleans) const;
};

/// Exact branch and bound: solves the relaxation with the integral variables
/// bounded in [0,1], branches on a fractional boolean, prunes subtrees whose
/// relaxation bound cannot beat the incumbent. `warm` seeds the incumbent
/// with a known feasible integral point.
LpOutcome solve_milp(const MilpProblem& problem,
                     const std::optional<std::pair<Rat, std::vector<Rat>>>& warm = std::nullopt);

enum class MilpStrategy { Lexicographic, BigM };

struct MilpOptions {
  MilpStrategy strategy = MilpStrategy::Lexicographic;
  int exclusion_cap = 400;
  // Also require reverse-net fireability from the reached marking before
  // accepting a solution (finite-reachability strictness).
  bool strict_finite = false;
  // Objective constant for the BigM strategy; derived from the instance when
  // unset.
  std::optional<Rat> big_m;
  // Linking bound fallback when the total-flow LP is unbounded.
  Rat linking_ceiling = Rat(1048576);
};

/// Yield maximization with boolean transition indicators and firing-set
/// exclusion: solve the MILP, test the solution support with fireable, and
/// either accept it or exclude that support and repeat, up to the cap.
YieldResult milp_max(const Cpn& net, const Marking& m0, Index goal_place,
                     const MilpOptions& options = {});

/// First n optima over pairwise distinct transition sets, non-increasing in
/// yield; every returned support is excluded before the next round.
std::vector<YieldResult> enumerate_solutions(const Cpn& net, const Marking& m0, Index goal_place,
                                             int n, const MilpOptions& options = {});

}  // namespace cpn
