#include "kltq/lp.hpp"

#include <cassert>

namespace kltq {

namespace {

// Dense rational simplex tableau. Variables are split x = u - w so the
// public interface works with free variables; slacks turn inequalities
// into equations; artificials provide the phase-I basis.
class Simplex {
 public:
  Simplex(const LpProblem& p) : n_(p.nvars) {
    if (!p.strict.empty())
      throw Error("StrictUnsupported", "lp_optimize requires a closed system");
    for (const auto& c : p.equalities) add_row(c, false);
    for (const auto& c : p.inequalities) add_row(c, true);
    m_ = static_cast<int>(rows_.size());
    nstruct_ = 2 * n_ + nslack_;
    for (int i = 0; i < m_; ++i) basis_.push_back(nstruct_ + i);
  }

  // Returns false when phase I proves infeasibility (farkas_ is then set).
  bool phase1() {
    RatVec c(nstruct_ + m_, Rat(0));
    for (int i = 0; i < m_; ++i) c[nstruct_ + i] = 1;
    bool unbounded = run(c);
    assert(!unbounded);
    Rat w = objective_value(c);
    if (w > 0) {
      // y = c_B^T B^{-1}; the artificial block of the tableau is B^{-1}.
      RatVec y(m_, Rat(0));
      for (int k = 0; k < m_; ++k) {
        if (basis_[k] < nstruct_) continue;
        for (int i = 0; i < m_; ++i) y[i] += rows_[k][nstruct_ + i];
      }
      farkas_.resize(m_);
      for (int i = 0; i < m_; ++i) farkas_[i] = row_sign_[i] * y[i];
      return false;
    }
    // Pivot leftover artificials out where possible; blocked ones sit at zero.
    for (int k = 0; k < m_; ++k) {
      if (basis_[k] < nstruct_) continue;
      for (int j = 0; j < nstruct_; ++j) {
        if (rows_[k][j] != 0) {
          pivot(k, j);
          break;
        }
      }
    }
    artificials_frozen_ = true;
    return true;
  }

  // Minimize c over structural variables. Returns true when unbounded.
  bool phase2(const RatVec& cstruct) {
    RatVec c(nstruct_ + m_, Rat(0));
    for (int j = 0; j < nstruct_; ++j) c[j] = cstruct[j];
    return run(c);
  }

  RatVec solution_x() const {
    RatVec z(nstruct_, Rat(0));
    for (int k = 0; k < m_; ++k)
      if (basis_[k] < nstruct_) z[basis_[k]] = rows_[k].back();
    RatVec x(n_);
    for (int j = 0; j < n_; ++j) x[j] = z[j] - z[n_ + j];
    return x;
  }

  Rat objective_value(const RatVec& c) const {
    Rat v = 0;
    for (int k = 0; k < m_; ++k) v += c[basis_[k]] * rows_[k].back();
    return v;
  }

  int nstruct() const { return nstruct_; }
  int nvars() const { return n_; }
  const RatVec& farkas() const { return farkas_; }

 private:
  void add_row(const LpProblem::Constraint& c, bool slack) {
    if (static_cast<int>(c.a.size()) != n_)
      throw Error("ShapeMismatch", "constraint arity mismatch");
    RatVec r(2 * n_ + nslack_total_, Rat(0));
    for (int j = 0; j < n_; ++j) {
      r[j] = c.a[j];
      r[n_ + j] = -c.a[j];
    }
    if (slack) {
      r.push_back(Rat(0));  // placeholder, filled below
    }
    r.push_back(c.rhs);
    rows_.push_back(std::move(r));
    slack_of_row_.push_back(slack ? nslack_++ : -1);
    row_sign_.push_back(Rat(1));
  }

  // Bland's rule; returns true on unbounded.
  bool run(const RatVec& c) {
    normalize_rows();
    // Reduced-cost row: obj[j] = c_j - c_B^T B^{-1} a_j.
    obj_.assign(nstruct_ + m_, Rat(0));
    for (int j = 0; j < nstruct_ + m_; ++j) {
      Rat v = c[j];
      for (int k = 0; k < m_; ++k) v -= c[basis_[k]] * rows_[k][j];
      obj_[j] = v;
    }
    for (;;) {
      int enter = -1;
      int limit = artificials_frozen_ ? nstruct_ : nstruct_ + m_;
      for (int j = 0; j < limit; ++j)
        if (obj_[j] < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return false;
      int leave = -1;
      Rat best;
      for (int k = 0; k < m_; ++k) {
        if (rows_[k][enter] <= 0) continue;
        Rat ratio = rows_[k].back() / rows_[k][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[k] < basis_[leave])) {
          leave = k;
          best = ratio;
        }
      }
      if (leave < 0) return true;
      pivot(leave, enter);
    }
  }

  void pivot(int k, int j) {
    RatVec& pr = rows_[k];
    Rat inv = 1 / pr[j];
    for (Rat& v : pr) v *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == k || rows_[i][j] == 0) continue;
      Rat f = rows_[i][j];
      for (size_t t = 0; t < pr.size(); ++t) rows_[i][t] -= f * pr[t];
    }
    if (!obj_.empty() && obj_[j] != 0) {
      Rat f = obj_[j];
      for (size_t t = 0; t < obj_.size() && t < pr.size(); ++t) obj_[t] -= f * pr[t];
    }
    basis_[k] = j;
  }

  // One-time setup once all rows are present: place slack columns, flip
  // rows to nonnegative rhs.
  void normalize_rows() {
    if (normalized_) return;
    normalized_ = true;
    for (int i = 0; i < m_; ++i) {
      RatVec& r = rows_[i];
      Rat rhs = r.back();
      // Expand to the final width: slots for all slacks.
      RatVec full(nstruct_ + m_ + 1, Rat(0));
      for (int j = 0; j < 2 * n_; ++j) full[j] = r[j];
      if (slack_of_row_[i] >= 0) full[2 * n_ + slack_of_row_[i]] = -1;
      full[nstruct_ + i] = 1;
      full[nstruct_ + m_] = rhs;
      if (rhs < 0) {
        for (Rat& v : full) v = -v;
        full[nstruct_ + i] = 1;  // keep the artificial positive
        row_sign_[i] = -1;
      }
      r = std::move(full);
    }
  }

  int n_;
  int m_ = 0;
  int nslack_ = 0;
  int nslack_total_ = 0;  // unused widths handled in normalize_rows
  int nstruct_ = 0;
  bool normalized_ = false;
  bool artificials_frozen_ = false;
  std::vector<RatVec> rows_;
  std::vector<int> slack_of_row_;
  std::vector<Rat> row_sign_;
  std::vector<int> basis_;
  RatVec obj_;
  RatVec farkas_;
};

}  // namespace

LpResult lp_optimize(const LpProblem& p, const RatVec& objective, bool maximize) {
  if (static_cast<int>(objective.size()) != p.nvars)
    throw Error("ShapeMismatch", "objective arity mismatch");
  Simplex s(p);
  if (!s.phase1()) {
    LpResult r;
    r.status = LpStatus::Infeasible;
    r.farkas = s.farkas();
    return r;
  }
  // Structural objective on the split variables (u, w, slacks).
  RatVec c(s.nstruct(), Rat(0));
  for (int j = 0; j < p.nvars; ++j) {
    Rat cj = maximize ? -objective[j] : objective[j];
    c[j] = cj;
    c[p.nvars + j] = -cj;
  }
  if (s.phase2(c)) {
    LpResult r;
    r.status = LpStatus::Unbounded;
    return r;
  }
  LpResult r;
  r.status = LpStatus::Optimal;
  r.point = s.solution_x();
  r.value = 0;
  for (int j = 0; j < p.nvars; ++j) r.value += objective[j] * r.point[j];
  return r;
}

namespace {

// Closed relaxation with an explicit slack variable t appended.
LpProblem slacked(const LpProblem& p) {
  LpProblem q;
  q.nvars = p.nvars + 1;
  auto lift = [&](const LpProblem::Constraint& c, const Rat& tcoef) {
    RatVec a = c.a;
    a.push_back(tcoef);
    return LpProblem::Constraint{std::move(a), c.rhs};
  };
  for (const auto& c : p.equalities) q.equalities.push_back(lift(c, Rat(0)));
  for (const auto& c : p.inequalities) q.inequalities.push_back(lift(c, Rat(0)));
  for (const auto& c : p.strict) q.inequalities.push_back(lift(c, Rat(-1)));
  // t <= 1 caps the auxiliary objective.
  RatVec cap(q.nvars, Rat(0));
  cap[q.nvars - 1] = -1;
  q.inequalities.push_back({std::move(cap), Rat(-1)});
  return q;
}

}  // namespace

std::optional<RatVec> lp_feasible_strict(const LpProblem& p) {
  LpProblem q = slacked(p);
  RatVec obj(q.nvars, Rat(0));
  obj[q.nvars - 1] = 1;
  LpResult r = lp_optimize(q, obj, /*maximize=*/true);
  if (r.status != LpStatus::Optimal || r.value <= 0) return std::nullopt;
  r.point.pop_back();
  return r.point;
}

std::optional<RatVec> lp_feasible_strict_minimizing(const LpProblem& p,
                                                    const RatVec& secondary) {
  LpProblem q = slacked(p);
  RatVec obj(q.nvars, Rat(0));
  obj[q.nvars - 1] = 1;
  LpResult r = lp_optimize(q, obj, /*maximize=*/true);
  if (r.status != LpStatus::Optimal || r.value <= 0) return std::nullopt;
  // Pin t at its optimum, then minimize the secondary objective.
  RatVec pin(q.nvars, Rat(0));
  pin[q.nvars - 1] = 1;
  q.equalities.push_back({std::move(pin), r.value});
  RatVec sec = secondary;
  sec.push_back(Rat(0));
  LpResult r2 = lp_optimize(q, sec, /*maximize=*/false);
  if (r2.status != LpStatus::Optimal)
    throw Error("Internal", "secondary objective must stay bounded and feasible");
  r2.point.pop_back();
  return r2.point;
}

}  // namespace kltq
