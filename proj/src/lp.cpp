#include "cpn/lp.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "cpn/errors.hpp"

namespace cpn {

void LinearProgram::add_row(std::vector<Rat> coeffs, Relation rel, Rat rhs) {
  if (static_cast<int>(coeffs.size()) != num_vars) {
    throw DimensionError("constraint row has " + std::to_string(coeffs.size()) +
                         " coefficients, expected " + std::to_string(num_vars));
  }
  rows.push_back(Row{std::move(coeffs), rel, std::move(rhs)});
}

namespace {

// ---------------------------------------------------------------------------
// 64-bit rational fast path. Throws Overflow when a value leaves the range;
// the caller retries the whole solve in arbitrary precision.
// ---------------------------------------------------------------------------

struct Overflow {};

using i128 = __int128;

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct SmallRat {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

SmallRat make_small(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) return SmallRat{0, 1};
  i128 g = gcd128(n, d);
  n /= g;
  d /= g;
  constexpr i128 lim = INT64_MAX;
  if (n > lim || n < -lim || d > lim) throw Overflow{};
  return SmallRat{static_cast<std::int64_t>(n), static_cast<std::int64_t>(d)};
}

SmallRat operator+(const SmallRat& a, const SmallRat& b) {
  if (a.num == 0) return b;
  if (b.num == 0) return a;
  return make_small(static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den,
                    static_cast<i128>(a.den) * b.den);
}

SmallRat operator-(const SmallRat& a, const SmallRat& b) {
  if (b.num == 0) return a;
  return make_small(static_cast<i128>(a.num) * b.den - static_cast<i128>(b.num) * a.den,
                    static_cast<i128>(a.den) * b.den);
}

SmallRat operator*(const SmallRat& a, const SmallRat& b) {
  if (a.num == 0 || b.num == 0) return SmallRat{0, 1};
  std::int64_t g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
  std::int64_t g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
  return make_small(static_cast<i128>(a.num / g1) * (b.num / g2),
                    static_cast<i128>(a.den / g2) * (b.den / g1));
}

SmallRat operator/(const SmallRat& a, const SmallRat& b) {
  if (b.num == 0) throw CpnError("division by zero");
  if (a.num == 0) return SmallRat{0, 1};
  return make_small(static_cast<i128>(a.num) * b.den, static_cast<i128>(a.den) * b.num);
}

SmallRat operator-(const SmallRat& a) { return SmallRat{-a.num, a.den}; }

bool operator==(const SmallRat& a, const SmallRat& b) { return a.num == b.num && a.den == b.den; }

bool operator<(const SmallRat& a, const SmallRat& b) {
  return static_cast<i128>(a.num) * b.den < static_cast<i128>(b.num) * a.den;
}

struct SmallOps {
  using Num = SmallRat;
  static Num zero() { return SmallRat{0, 1}; }
  static Num one() { return SmallRat{1, 1}; }
  static int sign(const Num& x) { return x.num > 0 ? 1 : (x.num < 0 ? -1 : 0); }
  static Num from_rat(const Rat& r) {
    if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p()) throw Overflow{};
    return SmallRat{r.get_num().get_si(), r.get_den().get_si()};
  }
  static Rat to_rat(const Num& x) {
    return Rat(static_cast<long>(x.num), static_cast<long>(x.den));
  }
};

struct BigOps {
  using Num = Rat;
  static Num zero() { return Rat(0); }
  static Num one() { return Rat(1); }
  static int sign(const Num& x) { return sgn(x); }
  static Num from_rat(const Rat& r) { return r; }
  static Rat to_rat(const Num& x) { return x; }
};

// ---------------------------------------------------------------------------
// Standard form: maximize obj*y over rows*y = rhs, y >= 0, rhs >= 0, built
// once in exact rationals and shared by both numeric paths.
// ---------------------------------------------------------------------------

struct VarMap {
  int pos = -1;
  int neg = -1;  // second column of a split free variable, -1 otherwise
  Rat shift;
};

struct StdForm {
  int num_vars = 0;  // original variable count
  int num_cols = 0;
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  std::vector<Rat> obj;  // the base program's own objective, mapped
  std::vector<int> basis_slack;
  std::vector<VarMap> vmap;
  bool trivially_infeasible = false;

  // Maps an original-space maximization objective onto standard columns.
  std::vector<Rat> map_objective(const std::vector<Rat>& c) const {
    std::vector<Rat> out(num_cols, Rat(0));
    for (int i = 0; i < num_vars; ++i) {
      if (c[i] == 0) continue;
      out[vmap[i].pos] += c[i];
      if (vmap[i].neg >= 0) out[vmap[i].neg] -= c[i];
    }
    return out;
  }

  std::vector<Rat> map_point_back(const std::vector<Rat>& y, bool with_shift) const {
    std::vector<Rat> x(num_vars, Rat(0));
    for (int i = 0; i < num_vars; ++i) {
      x[i] = y[vmap[i].pos];
      if (vmap[i].neg >= 0) x[i] -= y[vmap[i].neg];
      if (with_shift) x[i] += vmap[i].shift;
    }
    return x;
  }
};

StdForm build_std_form(const LinearProgram& lp) {
  StdForm sf;
  const int n = lp.num_vars;
  sf.num_vars = n;
  if (static_cast<int>(lp.lower.size()) != n || static_cast<int>(lp.upper.size()) != n ||
      static_cast<int>(lp.objective.size()) != n) {
    throw DimensionError("linear program bound/objective arrays must match num_vars");
  }

  sf.vmap.resize(n);
  std::vector<LinearProgram::Row> work = lp.rows;
  for (int i = 0; i < n; ++i) {
    if (lp.lower[i] && lp.upper[i] && *lp.lower[i] > *lp.upper[i]) {
      sf.trivially_infeasible = true;
      return sf;
    }
    if (lp.lower[i]) {
      sf.vmap[i].pos = sf.num_cols++;
      sf.vmap[i].shift = *lp.lower[i];
    } else {
      sf.vmap[i].pos = sf.num_cols++;
      sf.vmap[i].neg = sf.num_cols++;
      sf.vmap[i].shift = 0;
    }
    if (lp.upper[i]) {
      // x_i <= u as an ordinary row; folded through the same pipeline.
      LinearProgram::Row bound;
      bound.coeffs.assign(n, Rat(0));
      bound.coeffs[i] = 1;
      bound.rel = Relation::LessEq;
      bound.rhs = *lp.upper[i];
      work.push_back(std::move(bound));
    }
  }

  const int num_rows = static_cast<int>(work.size());
  sf.rows.assign(num_rows, {});
  sf.rhs.assign(num_rows, Rat(0));
  sf.basis_slack.assign(num_rows, -1);

  int num_slacks = 0;
  for (const auto& row : work) {
    if (row.rel != Relation::Equal) ++num_slacks;
  }
  const int total = sf.num_cols + num_slacks;

  int next_slack = sf.num_cols;
  for (int r = 0; r < num_rows; ++r) {
    const auto& row = work[r];
    if (static_cast<int>(row.coeffs.size()) != n) {
      throw DimensionError("constraint row width mismatch");
    }
    std::vector<Rat> out(total, Rat(0));
    Rat rhs = row.rhs;
    for (int i = 0; i < n; ++i) {
      const Rat& c = row.coeffs[i];
      if (c == 0) continue;
      out[sf.vmap[i].pos] += c;
      if (sf.vmap[i].neg >= 0) out[sf.vmap[i].neg] -= c;
      if (sf.vmap[i].shift != 0) rhs -= c * sf.vmap[i].shift;
    }
    int slack = -1;
    if (row.rel != Relation::Equal) {
      slack = next_slack++;
      out[slack] = row.rel == Relation::LessEq ? 1 : -1;
    }
    if (rhs < 0) {
      for (auto& c : out) c = -c;
      rhs = -rhs;
    }
    if (slack >= 0 && out[slack] == 1) sf.basis_slack[r] = slack;
    sf.rows[r] = std::move(out);
    sf.rhs[r] = std::move(rhs);
  }
  sf.num_cols = total;

  sf.obj.assign(total, Rat(0));
  if (lp.sense != Sense::FeasibilityOnly) {
    std::vector<Rat> c = lp.objective;
    if (lp.sense == Sense::Minimize) {
      for (auto& x : c) x = -x;
    }
    sf.obj = sf.map_objective(c);
  }
  return sf;
}

// ---------------------------------------------------------------------------
// Tableau simplex, templated over the number type. The tableau survives
// across maximize() calls so follow-up objectives warm-start from the
// previous basis.
// ---------------------------------------------------------------------------

enum class StdStatus { Infeasible, Optimal, Unbounded };

struct StdOutcome {
  StdStatus status = StdStatus::Infeasible;
  std::vector<Rat> point;
  std::vector<Rat> ray;
};

template <class Ops>
class Simplex {
  using Num = typename Ops::Num;

 public:
  explicit Simplex(const StdForm& sf) : ncols_(sf.num_cols) {
    const int m = static_cast<int>(sf.rows.size());
    a_.resize(m);
    b_.resize(m);
    for (int r = 0; r < m; ++r) {
      a_[r].resize(ncols_);
      for (int j = 0; j < ncols_; ++j) a_[r][j] = Ops::from_rat(sf.rows[r][j]);
      b_[r] = Ops::from_rat(sf.rhs[r]);
    }
    basis_.assign(m, -1);
    for (int r = 0; r < m; ++r) basis_[r] = sf.basis_slack[r];
  }

  // Phase 1; false means the system is infeasible.
  bool ensure_feasible() {
    if (checked_) return feasible_;
    checked_ = true;
    feasible_ = phase_one();
    return feasible_;
  }

  StdOutcome maximize(const std::vector<Rat>& objective) {
    if (!ensure_feasible()) return StdOutcome{StdStatus::Infeasible, {}, {}};
    std::vector<Num> cost(ncols_, Ops::zero());
    for (int j = 0; j < ncols_; ++j) {
      if (objective[j] != 0) cost[j] = Ops::from_rat(objective[j]);
    }
    price_out(std::move(cost));
    int unbounded_col = -1;
    StdOutcome out;
    if (!optimize(&unbounded_col)) {
      out.status = StdStatus::Unbounded;
      out.point = extract_point();
      out.ray = extract_ray(unbounded_col);
      return out;
    }
    out.status = StdStatus::Optimal;
    out.point = extract_point();
    return out;
  }

  std::vector<Rat> feasible_point() { return extract_point(); }

 private:
  int rows() const { return static_cast<int>(a_.size()); }

  bool phase_one() {
    const int m = rows();
    int first_artificial = ncols_;
    for (int r = 0; r < m; ++r) {
      if (basis_[r] >= 0) continue;
      for (int i = 0; i < m; ++i) a_[i].push_back(i == r ? Ops::one() : Ops::zero());
      basis_[r] = ncols_++;
    }
    if (ncols_ == first_artificial) return true;  // slack basis already feasible

    std::vector<Num> cost(ncols_, Ops::zero());
    for (int j = first_artificial; j < ncols_; ++j) cost[j] = -Ops::one();
    price_out(std::move(cost));
    int unbounded_col = -1;
    if (!optimize(&unbounded_col)) throw CpnError("phase-1 objective cannot be unbounded");
    if (Ops::sign(value_) != 0) return false;

    // Drive leftover basic artificials out or drop their (redundant) rows.
    for (int r = 0; r < rows(); ++r) {
      if (basis_[r] < first_artificial) continue;
      int enter = -1;
      for (int j = 0; j < first_artificial; ++j) {
        if (Ops::sign(a_[r][j]) != 0) {
          enter = j;
          break;
        }
      }
      if (enter >= 0) {
        pivot(r, enter);
      } else {
        a_.erase(a_.begin() + r);
        b_.erase(b_.begin() + r);
        basis_.erase(basis_.begin() + r);
        --r;
      }
    }
    for (auto& row : a_) row.resize(first_artificial);
    ncols_ = first_artificial;
    red_.clear();
    return true;
  }

  void price_out(std::vector<Num> cost) {
    red_ = std::move(cost);
    red_.resize(ncols_, Ops::zero());
    value_ = Ops::zero();
    std::vector<Num> adj(ncols_, Ops::zero());
    for (int r = 0; r < rows(); ++r) {
      const Num cb = red_[basis_[r]];
      if (Ops::sign(cb) == 0) continue;
      value_ = value_ + cb * b_[r];
      for (int j = 0; j < ncols_; ++j) {
        if (Ops::sign(a_[r][j]) != 0) adj[j] = adj[j] + cb * a_[r][j];
      }
    }
    for (int j = 0; j < ncols_; ++j) red_[j] = red_[j] - adj[j];
  }

  // Largest-coefficient entering rule with a permanent switch to Bland's
  // rule after a degenerate streak; any cycle is all-degenerate, so the
  // switch guarantees termination. Returns false on unbounded.
  bool optimize(int* unbounded_col) {
    const int streak_limit = 4 * (rows() + ncols_) + 16;
    int degenerate_streak = 0;
    bool bland = false;
    for (;;) {
      int enter = -1;
      if (bland) {
        for (int j = 0; j < ncols_; ++j) {
          if (Ops::sign(red_[j]) > 0) {
            enter = j;
            break;
          }
        }
      } else {
        for (int j = 0; j < ncols_; ++j) {
          if (Ops::sign(red_[j]) > 0 && (enter < 0 || red_[enter] < red_[j])) enter = j;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      for (int r = 0; r < rows(); ++r) {
        if (Ops::sign(a_[r][enter]) <= 0) continue;
        if (leave < 0) {
          leave = r;
          continue;
        }
        const Num lhs = b_[r] * a_[leave][enter];
        const Num rhs = b_[leave] * a_[r][enter];
        if (lhs < rhs || (lhs == rhs && basis_[r] < basis_[leave])) leave = r;
      }
      if (leave < 0) {
        *unbounded_col = enter;
        return false;
      }
      if (Ops::sign(b_[leave]) == 0) {
        if (++degenerate_streak > streak_limit) bland = true;
      } else {
        degenerate_streak = 0;
      }
      pivot(leave, enter);
    }
  }

  void pivot(int r, int c) {
    const Num piv = a_[r][c];
    if (Ops::sign(piv) == 0) throw CpnError("zero pivot");
    for (int j = 0; j < ncols_; ++j) {
      if (Ops::sign(a_[r][j]) != 0) a_[r][j] = a_[r][j] / piv;
    }
    b_[r] = b_[r] / piv;
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const Num f = a_[i][c];
      if (Ops::sign(f) == 0) continue;
      for (int j = 0; j < ncols_; ++j) {
        if (Ops::sign(a_[r][j]) != 0) a_[i][j] = a_[i][j] - f * a_[r][j];
      }
      b_[i] = b_[i] - f * b_[r];
    }
    if (!red_.empty()) {
      const Num f = red_[c];
      if (Ops::sign(f) != 0) {
        for (int j = 0; j < ncols_; ++j) {
          if (Ops::sign(a_[r][j]) != 0) red_[j] = red_[j] - f * a_[r][j];
        }
        value_ = value_ + f * b_[r];
      }
    }
    basis_[r] = c;
  }

  std::vector<Rat> extract_point() const {
    std::vector<Rat> y(ncols_, Rat(0));
    for (int r = 0; r < rows(); ++r) {
      if (basis_[r] < ncols_) y[basis_[r]] = Ops::to_rat(b_[r]);
    }
    return y;
  }

  std::vector<Rat> extract_ray(int col) const {
    std::vector<Rat> d(ncols_, Rat(0));
    d[col] = 1;
    for (int r = 0; r < rows(); ++r) {
      if (Ops::sign(a_[r][col]) != 0) d[basis_[r]] = Ops::to_rat(-a_[r][col]);
    }
    return d;
  }

  int ncols_;
  bool checked_ = false;
  bool feasible_ = false;
  std::vector<std::vector<Num>> a_;
  std::vector<Num> b_;
  std::vector<Num> red_;
  Num value_{};
  std::vector<int> basis_;
};

LpOutcome assemble(const StdForm& sf, const StdOutcome& std_out,
                   const std::vector<Rat>& objective, bool negate_value) {
  LpOutcome out;
  if (std_out.status == StdStatus::Infeasible) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  out.point = sf.map_point_back(std_out.point, true);
  if (std_out.status == StdStatus::Unbounded) {
    out.status = LpStatus::Unbounded;
    out.ray = sf.map_point_back(std_out.ray, false);
    return out;
  }
  out.status = LpStatus::Optimal;
  out.value = 0;
  for (size_t i = 0; i < objective.size(); ++i) {
    if (objective[i] != 0) out.value += objective[i] * out.point[i];
  }
  if (negate_value) out.value = -out.value;
  return out;
}

}  // namespace

LpOutcome solve(const LinearProgram& lp) {
  StdForm sf = build_std_form(lp);
  if (sf.trivially_infeasible) return LpOutcome{LpStatus::Infeasible, {}, Rat(0), {}};
  const std::vector<Rat> no_objective(lp.num_vars, Rat(0));
  const std::vector<Rat>& value_obj =
      lp.sense == Sense::FeasibilityOnly ? no_objective : lp.objective;

  auto run = [&](auto ops_tag) -> LpOutcome {
    using Ops = decltype(ops_tag);
    Simplex<Ops> s(sf);
    if (!s.ensure_feasible()) return LpOutcome{LpStatus::Infeasible, {}, Rat(0), {}};
    if (lp.sense == Sense::FeasibilityOnly) {
      StdOutcome so;
      so.status = StdStatus::Optimal;
      so.point = s.feasible_point();
      return assemble(sf, so, value_obj, false);
    }
    StdOutcome so = s.maximize(sf.obj);
    return assemble(sf, so, value_obj, false);
  };

  try {
    return run(SmallOps{});
  } catch (const Overflow&) {
    return run(BigOps{});
  }
}

std::optional<std::vector<Rat>> solve_positive_component(
    const std::vector<std::vector<Rat>>& matrix, const std::vector<Rat>& rhs, int t_index,
    Relation relation) {
  if (matrix.size() != rhs.size()) throw DimensionError("matrix/rhs row count mismatch");
  const int n = matrix.empty() ? 0 : static_cast<int>(matrix.front().size());
  if (t_index < 0 || t_index >= n) throw DimensionError("positive-component index out of range");
  if (relation == Relation::LessEq) {
    throw InputError("positive-component search takes an equality or at-least system");
  }
  LinearProgram lp(n);
  for (size_t r = 0; r < matrix.size(); ++r) {
    lp.add_row(matrix[r], relation, rhs[r]);
  }
  lp.objective[t_index] = 1;
  lp.sense = Sense::Maximize;
  LpOutcome out = solve(lp);
  switch (out.status) {
    case LpStatus::Infeasible:
      return std::nullopt;
    case LpStatus::Optimal:
      if (out.point[t_index] > 0) return out.point;
      return std::nullopt;
    case LpStatus::Unbounded: {
      std::vector<Rat> v = out.point;
      for (int i = 0; i < n; ++i) v[i] += out.ray[i];
      if (!(v[t_index] > 0)) throw CpnError("unbounded ray must raise the objective component");
      return v;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// BatchLp
// ---------------------------------------------------------------------------

struct BatchLp::Impl {
  StdForm sf;
  bool trivially_infeasible = false;
  bool infeasible = false;
  bool use_big = false;
  std::optional<Simplex<SmallOps>> small;
  std::optional<Simplex<BigOps>> big;
};

BatchLp::BatchLp(const LinearProgram& base) : impl_(new Impl) {
  LinearProgram shell = base;
  shell.sense = Sense::FeasibilityOnly;
  impl_->sf = build_std_form(shell);
  if (impl_->sf.trivially_infeasible) {
    impl_->trivially_infeasible = true;
    impl_->infeasible = true;
    return;
  }
  try {
    impl_->small.emplace(impl_->sf);
    impl_->infeasible = !impl_->small->ensure_feasible();
  } catch (const Overflow&) {
    impl_->use_big = true;
    impl_->small.reset();
    impl_->big.emplace(impl_->sf);
    impl_->infeasible = !impl_->big->ensure_feasible();
  }
}

BatchLp::~BatchLp() = default;
BatchLp::BatchLp(BatchLp&&) noexcept = default;
BatchLp& BatchLp::operator=(BatchLp&&) noexcept = default;

bool BatchLp::infeasible() const { return impl_->infeasible; }

LpOutcome BatchLp::maximize(const std::vector<Rat>& objective) {
  if (static_cast<int>(objective.size()) != impl_->sf.num_vars) {
    throw DimensionError("objective width mismatch");
  }
  if (impl_->infeasible) return LpOutcome{LpStatus::Infeasible, {}, Rat(0), {}};
  std::vector<Rat> cost = impl_->sf.map_objective(objective);
  if (!impl_->use_big) {
    try {
      StdOutcome so = impl_->small->maximize(cost);
      return assemble(impl_->sf, so, objective, false);
    } catch (const Overflow&) {
      impl_->use_big = true;
      impl_->small.reset();
      impl_->big.emplace(impl_->sf);
      if (!impl_->big->ensure_feasible()) throw CpnError("feasibility changed across retry");
    }
  }
  StdOutcome so = impl_->big->maximize(cost);
  return assemble(impl_->sf, so, objective, false);
}

}  // namespace cpn
