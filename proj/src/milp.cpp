#include "cpn/milp.hpp"

#include <algorithm>
#include <functional>
#include <iostream>

#include "cpn/errors.hpp"
#include "cpn/firing_set.hpp"

namespace cpn {

void ExclusionCut::append_to(LinearProgram& lp, int b_offset, int num_booleans) const {
  std::vector<Rat> row(lp.num_vars, Rat(0));
  for (int t = 0; t < num_booleans; ++t) {
    row[b_offset + t] = contains(excluded_support, t) ? Rat(1) : Rat(-1);
  }
  lp.add_row(std::move(row), Relation::LessEq,
             Rat(static_cast<long>(excluded_support.size()) - 1));
}

namespace {

struct UnboundedRelaxation {
  LpOutcome out;
};

bool is_01(const Rat& x) { return x == 0 || x == 1; }

}  // namespace

LpOutcome solve_milp(const MilpProblem& problem,
                     const std::optional<std::pair<Rat, std::vector<Rat>>>& warm) {
  LinearProgram lp = problem.lp;
  for (int j : problem.integral) {
    if (j < 0 || j >= lp.num_vars) throw DimensionError("integral variable index out of range");
    if (!lp.lower[j] || *lp.lower[j] < 0) lp.lower[j] = Rat(0);
    if (!lp.upper[j] || *lp.upper[j] > 1) lp.upper[j] = Rat(1);
  }
  const bool maximize = lp.sense != Sense::Minimize;

  // When the objective touches only integral variables with integer
  // coefficients, every feasible integral point has an integer value and
  // relaxation bounds can be rounded before pruning.
  bool integer_objective = lp.sense != Sense::FeasibilityOnly;
  if (integer_objective) {
    std::vector<bool> integral_flag(lp.num_vars, false);
    for (int j : problem.integral) integral_flag[j] = true;
    for (int j = 0; j < lp.num_vars; ++j) {
      if (lp.objective[j] != 0 && (!integral_flag[j] || !rat_is_integer(lp.objective[j]))) {
        integer_objective = false;
        break;
      }
    }
  }

  struct Incumbent {
    bool set = false;
    Rat value;
    std::vector<Rat> point;
  } best;
  if (warm) {
    best.set = true;
    best.value = warm->first;
    best.point = warm->second;
  }

  std::function<void()> descend = [&]() {
    LpOutcome out = solve(lp);
    if (out.status == LpStatus::Infeasible) return;

    int branch_var = -1;
    Rat branch_dist(-1);
    for (int j : problem.integral) {
      const Rat& x = out.point[j];
      if (is_01(x)) continue;
      Rat dist = x < Rat(1, 2) ? x : Rat(1) - x;
      if (dist > branch_dist) {
        branch_dist = dist;
        branch_var = j;
      }
    }

    if (out.status == LpStatus::Unbounded) {
      if (branch_var < 0) throw UnboundedRelaxation{std::move(out)};
    } else {
      if (best.set) {
        Rat bound = out.value;
        if (integer_objective) {
          bound = maximize ? -rat_ceil(-bound) : rat_ceil(bound);
        }
        if (maximize ? bound <= best.value : bound >= best.value) return;
      }
      if (branch_var < 0) {
        best.set = true;
        best.value = out.value;
        best.point = std::move(out.point);
        return;
      }
    }

    const Rat x = out.point[branch_var];
    const int first = x <= Rat(1, 2) ? 0 : 1;
    auto saved_lower = lp.lower[branch_var];
    auto saved_upper = lp.upper[branch_var];
    for (int round = 0; round < 2; ++round) {
      const int fix = round == 0 ? first : 1 - first;
      lp.lower[branch_var] = Rat(fix);
      lp.upper[branch_var] = Rat(fix);
      descend();
      lp.lower[branch_var] = saved_lower;
      lp.upper[branch_var] = saved_upper;
    }
  };

  try {
    descend();
  } catch (UnboundedRelaxation& u) {
    return std::move(u.out);
  }
  if (!best.set) return LpOutcome{LpStatus::Infeasible, {}, Rat(0), {}};
  LpOutcome out;
  out.status = LpStatus::Optimal;
  out.point = std::move(best.point);
  out.value = std::move(best.value);
  return out;
}

namespace {

std::vector<Rat> goal_row(const Cpn& net, Index goal_place) {
  std::vector<Rat> row(net.num_transitions(), Rat(0));
  for (int t = 0; t < net.num_transitions(); ++t) {
    long c = net.incidence(goal_place, t);
    if (c != 0) row[t] = Rat(c);
  }
  return row;
}

// Rows Cv >= -m0 over the v block of an (optionally) wider variable space.
void append_nonneg_final_marking(LinearProgram& lp, const Cpn& net, const Marking& m0) {
  for (int p = 0; p < net.num_places(); ++p) {
    std::vector<Rat> row(lp.num_vars, Rat(0));
    for (int t = 0; t < net.num_transitions(); ++t) {
      long c = net.incidence(p, t);
      if (c != 0) row[t] = Rat(c);
    }
    lp.add_row(std::move(row), Relation::GreaterEq, -m0[p]);
  }
}

void append_linking(LinearProgram& lp, int num_transitions, const Rat& link_bound) {
  for (int t = 0; t < num_transitions; ++t) {
    std::vector<Rat> row(lp.num_vars, Rat(0));
    row[t] = 1;
    row[num_transitions + t] = -link_bound;
    lp.add_row(std::move(row), Relation::LessEq, Rat(0));
  }
}

struct MilpContext {
  const Cpn& net;
  const Marking& m0;
  Index goal;
  const MilpOptions& options;
  std::vector<Rat> yield_coeffs;
  std::vector<IndexSet> exclusions;
  // Lazily computed: max total flow, used for MILP linking and as the cap
  // fallback when that LP is unbounded.
  bool link_known = false;
  Rat link_bound;
  bool ceiling_used = false;
  bool* ceiling_flag = nullptr;
};

// Total-flow bound: LP max sum(v) subject to m0 + Cv >= 0; ceiling fallback
// with a warning when unbounded.
void ensure_link_bound(MilpContext& ctx) {
  if (ctx.link_known) return;
  ctx.link_known = true;
  const int T = ctx.net.num_transitions();
  LinearProgram lp(T);
  lp.sense = Sense::Maximize;
  for (int t = 0; t < T; ++t) lp.objective[t] = 1;
  append_nonneg_final_marking(lp, ctx.net, ctx.m0);
  LpOutcome out = solve(lp);
  if (out.status == LpStatus::Unbounded) {
    ctx.link_bound = ctx.options.linking_ceiling;
    ctx.ceiling_used = true;
    if (ctx.ceiling_flag) *ctx.ceiling_flag = true;
    std::cerr << "warning: total-flow bound is unbounded; linking falls back to ceiling "
              << format_rat(ctx.options.linking_ceiling) << "\n";
  } else {
    ctx.link_bound = out.value;
  }
}

MilpProblem base_problem(MilpContext& ctx, Sense sense) {
  ensure_link_bound(ctx);
  const int T = ctx.net.num_transitions();
  MilpProblem p;
  p.lp = LinearProgram(2 * T);
  p.lp.sense = sense;
  append_nonneg_final_marking(p.lp, ctx.net, ctx.m0);
  append_linking(p.lp, T, ctx.link_bound);
  for (const auto& s : ctx.exclusions) {
    ExclusionCut{s}.append_to(p.lp, T, T);
  }
  for (int t = 0; t < T; ++t) p.integral.push_back(T + t);
  return p;
}

IndexSet boolean_support(const std::vector<Rat>& point, int T) {
  IndexSet s;
  for (int t = 0; t < T; ++t) {
    if (point[T + t] == 1) s.push_back(t);
  }
  return s;
}

struct StageSolution {
  bool feasible = false;
  std::vector<Rat> v;
  IndexSet b_support;
};

// Exact minimum-cardinality support search for the cut-free case, with the
// booleans eliminated analytically. A tree node fixes transitions out
// (upper bound 0) or in (counted); its relaxation is the v-space LP
//   min sum_{t free} v_t / u_t   over Q = {v >= 0, Cv >= -m0, yield >= Y*}
// where u_t is the per-transition flow maximum over Q, so v_t/u_t <= 1 is
// implied and b_t >= v_t/u_t holds for every integral solution. Any node
// point's support is an incumbent; |fixed-in| + ceil(lp value) prunes.
// Same optimum as the boolean MILP formulation with cut-free constraints.
class SupportMinimizer {
 public:
  SupportMinimizer(MilpContext& ctx, const Rat& yield_floor, bool capped,
                   const std::vector<Rat>& known_point)
      : T_(ctx.net.num_transitions()) {
    // Full-width system defining Q, used to find the transitions that can
    // carry flow at all and their flow maxima.
    LinearProgram full(T_);
    append_nonneg_final_marking(full, ctx.net, ctx.m0);
    full.add_row(ctx.yield_coeffs, Relation::GreaterEq, yield_floor);
    if (capped) {
      for (int t = 0; t < T_; ++t) full.upper[t] = ctx.link_bound;
    }
    BatchLp probe(full);
    if (probe.infeasible()) throw CpnError("support minimization polytope cannot be empty");

    // Support discovery: batch rounds of "maximize the sum of the still
    // uncovered components" certify exactly which transitions admit
    // positive flow over Q. The known feasible point pre-covers its support.
    std::vector<bool> can_flow(T_, false);
    {
      std::vector<bool> covered(T_, false);
      int num_covered = 0;
      for (int t = 0; t < T_; ++t) {
        if (known_point[t] > 0) {
          can_flow[t] = true;
          covered[t] = true;
          ++num_covered;
        }
      }
      while (num_covered < T_) {
        std::vector<Rat> obj(T_, Rat(0));
        for (int t = 0; t < T_; ++t) {
          if (!covered[t]) obj[t] = 1;
        }
        LpOutcome out = probe.maximize(obj);
        std::vector<Rat> point = out.point;
        if (out.status == LpStatus::Unbounded) {
          for (int t = 0; t < T_; ++t) point[t] += out.ray[t];
        } else if (out.value == 0) {
          break;
        }
        int fresh = 0;
        for (int t = 0; t < T_; ++t) {
          if (point[t] > 0) {
            can_flow[t] = true;
            if (!covered[t]) {
              covered[t] = true;
              ++num_covered;
              ++fresh;
            }
          }
        }
        if (fresh == 0) throw CpnError("flow discovery made no progress");
      }
    }
    for (int t = 0; t < T_; ++t) {
      if (can_flow[t]) active_.push_back(t);
    }
    const int W = static_cast<int>(active_.size());

    // Column-reduced node system over the flow-capable transitions; place
    // rows that no active transition touches are trivially satisfied.
    lp_ = LinearProgram(W);
    lp_.sense = Sense::Minimize;
    for (int p = 0; p < ctx.net.num_places(); ++p) {
      std::vector<Rat> row(W, Rat(0));
      bool nonzero = false;
      for (int k = 0; k < W; ++k) {
        long c = ctx.net.incidence(p, active_[k]);
        if (c != 0) {
          row[k] = Rat(c);
          nonzero = true;
        }
      }
      if (nonzero) lp_.add_row(std::move(row), Relation::GreaterEq, -ctx.m0[p]);
    }
    {
      std::vector<Rat> row(W, Rat(0));
      for (int k = 0; k < W; ++k) row[k] = ctx.yield_coeffs[active_[k]];
      lp_.add_row(std::move(row), Relation::GreaterEq, yield_floor);
    }
    if (capped) {
      for (int k = 0; k < W; ++k) lp_.upper[k] = ctx.link_bound;
    }

    // Per-transition flow maxima by objective swaps on the reduced system.
    flow_max_.assign(W, Rat(0));
    BatchLp batch(lp_);
    if (batch.infeasible()) throw CpnError("reduced polytope lost feasibility");
    std::vector<Rat> obj(W, Rat(0));
    for (int k = 0; k < W; ++k) {
      obj[k] = 1;
      LpOutcome out = batch.maximize(obj);
      obj[k] = 0;
      if (out.status == LpStatus::Unbounded) {
        flow_unbounded_ = true;
        flow_max_[k] = Rat(-1);  // sentinel: no finite ratio bound for this column
      } else {
        flow_max_[k] = out.value;
        if (flow_max_[k] == 0) throw CpnError("flow-capable transition must have positive max");
      }
    }
    state_.assign(W, Free);
  }

  // warm: any feasible point of Q in full width (the stage-1 optimum).
  StageSolution run(const std::vector<Rat>& warm) {
    best_point_.assign(T_, Rat(0));
    best_support_.clear();
    for (int t = 0; t < T_; ++t) {
      best_point_[t] = warm[t];
      if (warm[t] > 0) best_support_.push_back(t);
    }
    descend(0);
    StageSolution sol;
    sol.feasible = true;
    sol.v = best_point_;
    sol.b_support = best_support_;
    return sol;
  }

 private:
  enum State : char { Free, FixedIn, FixedOut };

  void note_candidate(const std::vector<Rat>& reduced_point) {
    IndexSet supp;
    for (size_t k = 0; k < active_.size(); ++k) {
      if (reduced_point[k] > 0) supp.push_back(active_[k]);
    }
    if (supp.size() < best_support_.size()) {
      best_support_ = std::move(supp);
      best_point_.assign(T_, Rat(0));
      for (size_t k = 0; k < active_.size(); ++k) best_point_[active_[k]] = reduced_point[k];
    }
  }

  void descend(int fixed_in) {
    const int W = static_cast<int>(active_.size());
    for (int k = 0; k < W; ++k) {
      lp_.objective[k] =
          state_[k] == Free && flow_max_[k] > 0 ? 1 / flow_max_[k] : Rat(0);
    }
    LpOutcome out = solve(lp_);
    if (out.status == LpStatus::Infeasible) return;
    if (out.status == LpStatus::Unbounded) {
      // Only possible when some flow maximum is infinite; fall back to the
      // plain feasible point for candidate purposes.
      if (!flow_unbounded_) throw CpnError("support relaxation cannot be unbounded");
      LinearProgram feas = lp_;
      feas.sense = Sense::FeasibilityOnly;
      out = solve(feas);
      if (out.status == LpStatus::Infeasible) return;
      out.value = 0;
    }
    note_candidate(out.point);
    Rat bound = Rat(fixed_in) + rat_ceil(out.value);
    if (bound >= Rat(static_cast<long>(best_support_.size()))) return;

    // Branch on the lightest-loaded support member: that is where the
    // relaxation and the integral count disagree the most.
    int pick = -1;
    Rat pick_load(2);
    for (int k = 0; k < W; ++k) {
      if (state_[k] != Free || !(out.point[k] > 0)) continue;
      Rat load = flow_max_[k] > 0 ? out.point[k] / flow_max_[k] : Rat(1);
      if (load < pick_load) {
        pick_load = load;
        pick = k;
      }
    }
    if (pick < 0) return;  // optimum already lives on fixed-in transitions

    state_[pick] = FixedIn;
    descend(fixed_in + 1);
    state_[pick] = FixedOut;
    auto saved = lp_.upper[pick];
    lp_.upper[pick] = Rat(0);
    descend(fixed_in);
    lp_.upper[pick] = saved;
    state_[pick] = Free;
  }

  int T_;
  IndexSet active_;           // flow-capable transitions, original indices
  LinearProgram lp_;          // reduced node system, mutated along the search
  std::vector<Rat> flow_max_;  // per active column; -1 means unbounded
  bool flow_unbounded_ = false;
  std::vector<char> state_;
  IndexSet best_support_;
  std::vector<Rat> best_point_;  // full width
};

// One round of the exclusion loop: the best (v, b) under the current cuts.
StageSolution solve_stage(MilpContext& ctx) {
  const int T = ctx.net.num_transitions();
  StageSolution sol;

  if (ctx.options.strategy == MilpStrategy::BigM) {
    Rat c;
    if (ctx.options.big_m) {
      c = *ctx.options.big_m;
    } else {
      ensure_link_bound(ctx);
      ExtRat ub = yield_upper_bound(ctx.net, ctx.m0, ctx.goal);
      Rat top;
      if (ub.is_finite()) {
        top = ub.value();
      } else {
        Rat coef(0);
        for (const Rat& y : ctx.yield_coeffs) {
          if (y > coef) coef = y;
        }
        top = coef * ctx.link_bound;
      }
      c = Rat(T) * (top + 1);
    }
    MilpProblem p = base_problem(ctx, Sense::Maximize);
    for (int t = 0; t < T; ++t) {
      p.lp.objective[t] = c * ctx.yield_coeffs[t];
      p.lp.objective[T + t] = Rat(-1);
    }
    LpOutcome out = solve_milp(p);
    if (out.status == LpStatus::Infeasible) return sol;
    if (out.status == LpStatus::Unbounded) throw CpnError("linked MILP cannot be unbounded");
    sol.feasible = true;
    sol.v.assign(out.point.begin(), out.point.begin() + T);
    sol.b_support = boolean_support(out.point, T);
    return sol;
  }

  // Lexicographic stage 1: maximize yield. Without cuts the booleans are
  // unconstrained, the stage collapses to a plain LP over v, and stage 2
  // runs the specialized cut-free support search.
  if (ctx.exclusions.empty()) {
    LinearProgram lp(T);
    lp.sense = Sense::Maximize;
    lp.objective = ctx.yield_coeffs;
    append_nonneg_final_marking(lp, ctx.net, ctx.m0);
    LpOutcome out = solve(lp);
    bool capped = false;
    if (out.status == LpStatus::Unbounded) {
      // Unbounded yield forces the linking ceiling; cap and re-solve so the
      // two stages see the same polytope.
      ensure_link_bound(ctx);
      if (!ctx.ceiling_used) throw CpnError("unbounded yield implies unbounded total flow");
      capped = true;
      for (int t = 0; t < T; ++t) lp.upper[t] = ctx.link_bound;
      out = solve(lp);
    }
    if (out.status != LpStatus::Optimal) {
      throw CpnError("stage-1 yield LP must have an optimum");
    }
    if (out.value == 0) {
      // Nothing can raise the goal mass; the empty support is optimal.
      sol.feasible = true;
      sol.v.assign(T, Rat(0));
      return sol;
    }
    SupportMinimizer minimizer(ctx, out.value, capped, out.point);
    return minimizer.run(out.point);
  }

  // With cuts active the boolean block is load-bearing; run the generic
  // two-stage MILP.
  Rat best_yield;
  std::vector<Rat> stage1_point;  // 2T wide
  {
    MilpProblem p = base_problem(ctx, Sense::Maximize);
    for (int t = 0; t < T; ++t) p.lp.objective[t] = ctx.yield_coeffs[t];
    LpOutcome out = solve_milp(p);
    if (out.status == LpStatus::Infeasible) return sol;
    if (out.status == LpStatus::Unbounded) throw CpnError("linked MILP cannot be unbounded");
    best_yield = out.value;
    stage1_point = std::move(out.point);
  }

  // Stage 2: fix the yield, minimize the number of fired transitions.
  MilpProblem p = base_problem(ctx, Sense::Minimize);
  {
    std::vector<Rat> row(p.lp.num_vars, Rat(0));
    for (int t = 0; t < T; ++t) row[t] = ctx.yield_coeffs[t];
    p.lp.add_row(std::move(row), Relation::GreaterEq, best_yield);
  }
  for (int t = 0; t < T; ++t) p.lp.objective[T + t] = 1;
  Rat warm_value(0);
  for (int t = 0; t < T; ++t) warm_value += stage1_point[T + t];
  LpOutcome out = solve_milp(p, std::make_pair(warm_value, stage1_point));
  if (out.status != LpStatus::Optimal) {
    throw CpnError("stage-2 support minimization must stay feasible");
  }
  sol.feasible = true;
  sol.v.assign(out.point.begin(), out.point.begin() + T);
  sol.b_support = boolean_support(out.point, T);
  return sol;
}

struct MilpRun {
  YieldResult result;
  IndexSet b_support;  // boolean support of the accepted solution
};

MilpRun milp_max_impl(const Cpn& net, const Marking& m0, Index goal_place,
                      const MilpOptions& options, std::vector<IndexSet> seeded_exclusions) {
  if (goal_place < 0 || goal_place >= net.num_places()) {
    throw IdentifierError("place index " + std::to_string(goal_place) + " out of range");
  }
  if (m0.size() != net.num_places()) throw DimensionError("marking incompatible with net");
  if (options.exclusion_cap < 1) throw InputError("exclusion cap must be at least 1");

  MilpRun run;
  YieldResult& res = run.result;
  res.yield = m0[goal_place];
  res.exclusion_log = seeded_exclusions;

  const int T = net.num_transitions();
  if (T == 0) {
    res.parikh = Parikh(0);
    return run;
  }

  MilpContext ctx{net,         m0,    goal_place, options,
                  goal_row(net, goal_place), std::move(seeded_exclusions)};
  ctx.ceiling_flag = &res.linking_ceiling_used;

  std::optional<Cpn> reversed;
  if (options.strict_finite) reversed = reverse_net(net);

  for (;;) {
    StageSolution sol = solve_stage(ctx);
    res.cuts = static_cast<int>(ctx.exclusions.size());
    res.exclusion_log = ctx.exclusions;
    if (!sol.feasible) {
      res.status = YieldStatus::NoSolution;
      return run;
    }
    Parikh parikh(T);
    for (int t = 0; t < T; ++t) parikh.set(t, sol.v[t]);
    IndexSet supp = parikh.support();

    bool accept = fireable(net, m0, supp).member;
    if (accept && options.strict_finite) {
      Marking reached = apply_parikh(net, m0, parikh);
      accept = fireable(*reversed, reached, supp).member;
    }
    if (accept) {
      Rat gained(0);
      for (int t = 0; t < T; ++t) gained += ctx.yield_coeffs[t] * sol.v[t];
      res.yield = m0[goal_place] + gained;
      res.parikh = std::move(parikh);
      res.support = std::move(supp);
      run.b_support = std::move(sol.b_support);
      return run;
    }
    if (static_cast<int>(ctx.exclusions.size()) >= options.exclusion_cap) {
      res.status = YieldStatus::BudgetExhausted;
      return run;
    }
    ctx.exclusions.push_back(sol.b_support);
  }
}

}  // namespace

YieldResult milp_max(const Cpn& net, const Marking& m0, Index goal_place,
                     const MilpOptions& options) {
  return milp_max_impl(net, m0, goal_place, options, {}).result;
}

std::vector<YieldResult> enumerate_solutions(const Cpn& net, const Marking& m0, Index goal_place,
                                             int n, const MilpOptions& options) {
  if (n < 1) throw InputError("solution count must be at least 1");
  std::vector<YieldResult> results;
  std::vector<IndexSet> exclusions;
  while (static_cast<int>(results.size()) < n) {
    MilpRun run = milp_max_impl(net, m0, goal_place, options, exclusions);
    if (run.result.status != YieldStatus::Ok) break;
    // A boolean support padded beyond the Parikh support means every
    // genuinely new transition set is gone; treat it as exhaustion.
    if (run.b_support != run.result.support) break;
    exclusions = run.result.exclusion_log;
    exclusions.push_back(run.result.support);
    results.push_back(std::move(run.result));
  }
  return results;
}

}  // namespace cpn
