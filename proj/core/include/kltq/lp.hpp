// Exact rational linear programming: two-phase simplex, Bland's rule.
#pragma once

#include "kltq/exactlin.hpp"

#include <optional>
#include <vector>

namespace kltq {

/// Feasibility system over free rational variables.
/// Strict inequalities are handled by lp_feasible_strict via slack maximization.
struct LpProblem {
  int nvars = 0;
  struct Constraint {
    RatVec a;
    Rat rhs;
  };
  std::vector<Constraint> equalities;     // <a,x> =  rhs
  std::vector<Constraint> inequalities;   // <a,x> >= rhs
  std::vector<Constraint> strict;         // <a,x> >  rhs

  void add_eq(RatVec a, Rat rhs) { equalities.push_back({std::move(a), std::move(rhs)}); }
  void add_geq(RatVec a, Rat rhs) { inequalities.push_back({std::move(a), std::move(rhs)}); }
  void add_gt(RatVec a, Rat rhs) { strict.push_back({std::move(a), std::move(rhs)}); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status;
  RatVec point;   // Optimal
  Rat value;      // Optimal
  /// Infeasible: multipliers over (equalities, then inequalities) with
  /// lambda >= 0 on inequality rows, lambda^T A = 0 and lambda^T rhs > 0
  /// after orienting every row as <a,x> >= rhs.
  RatVec farkas;
};

/// Optimize objective over the closed system (strict constraints must be empty).
LpResult lp_optimize(const LpProblem& p, const RatVec& objective, bool maximize);

/// Exact feasible point of the full system (strict inequalities strictly),
/// or nullopt. Slack construction: <a,x> > c becomes <a,x> >= c + t, t <= 1,
/// maximize t; feasible iff the optimum is positive.
std::optional<RatVec> lp_feasible_strict(const LpProblem& p);

/// Same, then minimize a secondary objective with the slack pinned at its
/// optimum (keeps reported points canonical).
std::optional<RatVec> lp_feasible_strict_minimizing(const LpProblem& p,
                                                    const RatVec& secondary);

}  // namespace kltq
