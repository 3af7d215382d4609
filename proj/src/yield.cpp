#include "cpn/yield.hpp"

#include <chrono>

#include "cpn/errors.hpp"
#include "cpn/lp.hpp"

namespace cpn {

ExtRat yield_upper_bound(const Cpn& net, const Marking& m0, Index goal_place) {
  if (goal_place < 0 || goal_place >= net.num_places()) {
    throw IdentifierError("place index " + std::to_string(goal_place) + " out of range");
  }
  if (m0.size() != net.num_places()) throw DimensionError("marking incompatible with net");

  LinearProgram lp(net.num_transitions());
  for (int p = 0; p < net.num_places(); ++p) {
    std::vector<Rat> row(net.num_transitions(), Rat(0));
    for (int t = 0; t < net.num_transitions(); ++t) {
      long c = net.incidence(p, t);
      if (c != 0) row[t] = Rat(c);
    }
    lp.add_row(std::move(row), Relation::GreaterEq, -m0[p]);
  }
  for (int t = 0; t < net.num_transitions(); ++t) {
    lp.objective[t] = Rat(net.incidence(goal_place, t));
  }
  lp.sense = Sense::Maximize;
  LpOutcome out = solve(lp);
  if (out.status == LpStatus::Unbounded) return ExtRat::infinity();
  if (out.status != LpStatus::Optimal) {
    throw CpnError("yield bound program cannot be infeasible (v = 0 is feasible)");
  }
  return ExtRat(m0[goal_place] + out.value);
}

YieldResult max_yield_binsearch(const Cpn& net, const Marking& m0, Index goal_place,
                                const Rat& epsilon, ReachMode mode,
                                const ReachOptions& options) {
  if (!(epsilon > 0)) throw InputError("epsilon must be positive");
  YieldResult result;

  ExtRat bound = yield_upper_bound(net, m0, goal_place);
  if (!bound.is_finite()) {
    result.bound_status = BoundStatus::Unbounded;
    result.yield = m0[goal_place];
    return result;
  }

  Marking probe(net.num_places());
  auto ask = [&](const Rat& x) {
    probe.set(goal_place, x);
    auto t0 = std::chrono::steady_clock::now();
    ReachResult r = at_least_reachable(net, m0, probe, mode, options);
    result.alr_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ++result.queries;
    return r;
  };

  Rat lo = m0[goal_place];
  result.yield = lo;
  result.parikh = Parikh(net.num_transitions());
  if (bound.value() == lo) return result;  // nothing can raise the goal mass

  // Probe the LP bound itself first: an exact hit skips bisection entirely.
  ReachResult top = ask(bound.value());
  if (top.reachable) {
    result.yield = bound.value();
    result.parikh = std::move(top.parikh);
    result.support = std::move(top.support);
    return result;
  }

  Rat hi = bound.value();
  while (hi - lo > epsilon) {
    Rat mid = (lo + hi) / 2;
    ReachResult r = ask(mid);
    if (r.reachable) {
      lo = mid;
      result.parikh = std::move(r.parikh);
      result.support = std::move(r.support);
    } else {
      hi = mid;
    }
  }
  result.yield = lo;
  return result;
}

}  // namespace cpn
