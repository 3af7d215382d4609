#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "cpn/rational.hpp"

namespace cpn {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Maximize, Minimize, FeasibilityOnly };

/// A linear program over exact rationals. Variables default to lower bound 0
/// and no upper bound.
struct LinearProgram {
  struct Row {
    std::vector<Rat> coeffs;
    Relation rel = Relation::Equal;
    Rat rhs;
  };

  int num_vars = 0;
  std::vector<Row> rows;
  std::vector<std::optional<Rat>> lower;
  std::vector<std::optional<Rat>> upper;
  std::vector<Rat> objective;
  Sense sense = Sense::FeasibilityOnly;

  LinearProgram() = default;
  explicit LinearProgram(int nvars)
      : num_vars(nvars),
        lower(nvars, Rat(0)),
        upper(nvars, std::nullopt),
        objective(nvars, Rat(0)) {}

  void add_row(std::vector<Rat> coeffs, Relation rel, Rat rhs);
};

enum class LpStatus { Infeasible, Optimal, Unbounded };

/// Exact solve outcome. `point` is a vertex when optimal, and the feasible
/// point where unboundedness was detected when unbounded. The ray strictly
/// improves the objective and stays feasible for every nonnegative step.
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rat> point;
  Rat value;
  std::vector<Rat> ray;
};

/// Two-phase primal simplex over exact rationals, Bland's rule for
/// anti-cycling. Small instances run on a 64-bit fast path and fall back to
/// arbitrary precision transparently when entries outgrow it.
LpOutcome solve(const LinearProgram& lp);

/// Searches for v >= 0 with v[t_index] > 0 and (matrix * v) relation rhs,
/// by maximizing v[t_index] and post-checking strict positivity; the
/// unbounded case returns a feasible point pushed along the improving ray.
/// Returns nullopt when the component is identically zero or the system is
/// infeasible.
std::optional<std::vector<Rat>> solve_positive_component(
    const std::vector<std::vector<Rat>>& matrix, const std::vector<Rat>& rhs, int t_index,
    Relation relation);

/// One constraint system, many objectives. Phase 1 runs once; every
/// maximize() call re-prices the new objective on the current basis and
/// continues pivoting, which typically costs a handful of pivots instead of
/// a full solve. The base program's own objective and sense are ignored.
class BatchLp {
 public:
  explicit BatchLp(const LinearProgram& base);
  ~BatchLp();
  BatchLp(BatchLp&&) noexcept;
  BatchLp& operator=(BatchLp&&) noexcept;

  bool infeasible() const;
  // Maximizes the given objective; status is Optimal or Unbounded unless the
  // system itself is infeasible.
  LpOutcome maximize(const std::vector<Rat>& objective);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cpn
