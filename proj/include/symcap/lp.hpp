#pragma once

#include "symcap/core.hpp"

namespace symcap::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  Vec x;     // primal, size = columns of A
  Vec dual;  // y with A^T y <= c and b^T y = objective at optimality
  int pivots = 0;
};

/// Dense two-phase simplex for  min c^T x  s.t.  A x = b,  x >= 0.
/// Meant for the small, dense problems that show up in polytope gauges
/// and containment scores (a handful of rows, up to a few thousand columns).
Solution solve_standard_form(const MatRef& A, const VecRef& b, const VecRef& c,
                             int max_pivots = 50000);

/// Conic scaling problem  min 1^T lambda  s.t.  G lambda = z,  lambda >= 0,
/// where the columns of G are generators. For G = vertices of K this is the
/// gauge g_K(z); the dual certificate y satisfies G^T y <= 1 and <y, z> = value.
struct ScalingResult {
  bool feasible = false;
  double value = 0.0;
  Vec certificate;
};
ScalingResult conic_scaling(const MatRef& generators, const VecRef& z);

}  // namespace symcap::lp
