#include "cpn/reachability.hpp"

#include <algorithm>

#include "cpn/errors.hpp"
#include "cpn/firing_set.hpp"
#include "cpn/lp.hpp"

namespace cpn {

namespace {

// Incidence columns of the active transitions, all places as rows.
std::vector<std::vector<Rat>> incidence_columns(const Cpn& net, const IndexSet& active) {
  std::vector<std::vector<Rat>> m(net.num_places(), std::vector<Rat>(active.size(), Rat(0)));
  for (size_t k = 0; k < active.size(); ++k) {
    for (int p = 0; p < net.num_places(); ++p) {
      long c = net.incidence(p, active[k]);
      if (c != 0) m[p][k] = Rat(c);
    }
  }
  return m;
}

struct Discovery {
  std::vector<std::vector<Rat>> solutions;  // over positions of `active`
  int nbsol = 0;
};

// Finds, for every active transition that admits one, a solution of
// {v >= 0, C v rel rhs} with that component positive. The grouped strategy
// maximizes the sum over still-uncovered components and certifies the rest
// zero in one final solve; the per-transition strategy asks one LP per
// transition. Either way the union of solution supports is exactly the set
// of transitions that can carry positive flow.
Discovery discover_support(const std::vector<std::vector<Rat>>& matrix,
                           const std::vector<Rat>& rhs, Relation relation,
                           InnerLpStrategy strategy, size_t width) {
  Discovery d;
  if (strategy == InnerLpStrategy::PerTransition) {
    for (size_t k = 0; k < width; ++k) {
      auto v = solve_positive_component(matrix, rhs, static_cast<int>(k), relation);
      if (v) d.solutions.push_back(std::move(*v));
    }
    d.nbsol = static_cast<int>(d.solutions.size());
    return d;
  }

  std::vector<bool> covered(width, false);
  size_t num_covered = 0;
  while (num_covered < width) {
    LinearProgram lp(static_cast<int>(width));
    for (size_t r = 0; r < matrix.size(); ++r) lp.add_row(matrix[r], relation, rhs[r]);
    for (size_t k = 0; k < width; ++k) {
      if (!covered[k]) lp.objective[k] = 1;
    }
    lp.sense = Sense::Maximize;
    LpOutcome out = solve(lp);
    if (out.status == LpStatus::Infeasible) break;
    std::vector<Rat> v = out.point;
    if (out.status == LpStatus::Unbounded) {
      for (size_t k = 0; k < width; ++k) v[k] += out.ray[k];
    } else {
      if (out.value == 0) break;  // every uncovered component is identically zero
    }
    size_t fresh = 0;
    for (size_t k = 0; k < width; ++k) {
      if (v[k] > 0 && !covered[k]) {
        covered[k] = true;
        ++num_covered;
        ++fresh;
      }
    }
    if (fresh == 0) throw CpnError("support discovery made no progress");
    d.solutions.push_back(std::move(v));
  }
  d.nbsol = static_cast<int>(d.solutions.size());
  return d;
}

bool satisfies(const std::vector<std::vector<Rat>>& matrix, const std::vector<Rat>& sol,
               Relation relation, const std::vector<Rat>& rhs) {
  for (size_t r = 0; r < matrix.size(); ++r) {
    Rat acc(0);
    for (size_t k = 0; k < sol.size(); ++k) {
      if (matrix[r][k] != 0) acc += matrix[r][k] * sol[k];
    }
    if (relation == Relation::Equal ? acc != rhs[r] : acc < rhs[r]) return false;
  }
  return true;
}

ReachResult run_loop(const Cpn& net, const Marking& m0, const Marking& target, Relation relation,
                     ReachMode mode, const ReachOptions& options) {
  if (m0.size() != net.num_places() || target.size() != net.num_places()) {
    throw DimensionError("marking incompatible with net");
  }
  ReachResult result;
  const bool trivial =
      relation == Relation::Equal ? target == m0 : m0.dominates(target);
  if (trivial) {
    result.reachable = true;
    result.parikh = Parikh(net.num_transitions());
    return result;
  }

  std::vector<Rat> rhs(net.num_places());
  for (int p = 0; p < net.num_places(); ++p) rhs[p] = target[p] - m0[p];

  std::optional<Cpn> reversed;
  if (mode == ReachMode::Finite) reversed = reverse_net(net);

  IndexSet active = net.all_transitions();
  while (!active.empty()) {
    ++result.iterations;
    auto matrix = incidence_columns(net, active);
    Discovery d = discover_support(matrix, rhs, relation, options.strategy, active.size());
    if (d.nbsol == 0) {
      result.reachable = false;
      result.support = active;
      return result;
    }
    std::vector<Rat> sol(active.size(), Rat(0));
    for (const auto& v : d.solutions) {
      for (size_t k = 0; k < active.size(); ++k) sol[k] += v[k];
    }
    for (auto& x : sol) x /= d.nbsol;
    if (!satisfies(matrix, sol, relation, rhs)) {
      throw CpnError("aggregated solution violates the constraint system");
    }

    Parikh parikh(net.num_transitions());
    for (size_t k = 0; k < active.size(); ++k) parikh.set(active[k], sol[k]);
    IndexSet supp = parikh.support();

    IndexSet cur = fireable(net, m0, supp).max_subset;
    if (mode == ReachMode::Finite) {
      Marking from = target;
      if (options.reverse_from == ReverseCheckFrom::InitialMarking) {
        from = m0;
      } else if (relation == Relation::GreaterEq) {
        from = apply_parikh(net, m0, parikh);
      }
      cur = fireable(*reversed, from, cur).max_subset;
    }
    if (cur == supp) {
      result.reachable = true;
      result.parikh = std::move(parikh);
      result.support = std::move(supp);
      return result;
    }
    active = std::move(cur);
  }
  result.reachable = false;
  return result;
}

}  // namespace

ReachResult reachable(const Cpn& net, const Marking& m0, const Marking& target, ReachMode mode,
                      const ReachOptions& options) {
  return run_loop(net, m0, target, Relation::Equal, mode, options);
}

ReachResult at_least_reachable(const Cpn& net, const Marking& m0, const Marking& goal,
                               ReachMode mode, const ReachOptions& options) {
  return run_loop(net, m0, goal, Relation::GreaterEq, mode, options);
}

}  // namespace cpn
