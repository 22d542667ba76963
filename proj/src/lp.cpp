#include "symcap/lp.hpp"

#include <limits>
#include <vector>

namespace symcap::lp {
namespace {

constexpr double kPivotTol = 1e-10;
constexpr int kDegenerateSwitch = 64;

struct Tableau {
  // Rows 0..m-1 are constraints, row m is the reduced-cost row.
  // Columns 0..n-1 original, n..n+m-1 artificial, n+m is the right-hand side.
  Mat t;
  std::vector<Eigen::Index> basis;
  Eigen::Index m = 0;
  Eigen::Index n = 0;

  Eigen::Index rhs() const { return n + m; }

  void pivot(Eigen::Index r, Eigen::Index s) {
    t.row(r) /= t(r, s);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == r) continue;
      const double f = t(i, s);
      if (f != 0.0) t.row(i) -= f * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = s;
  }

  void price(const Vec& cost) {
    // cost has size n + m
    t.row(m).setZero();
    t.row(m).head(n + m) = cost.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double cb = cost(basis[static_cast<std::size_t>(i)]);
      if (cb != 0.0) t.row(m) -= cb * t.row(i);
    }
  }

  // Returns Optimal, Unbounded or IterationLimit.
  Status run(Eigen::Index allowed_columns, int& pivots, int max_pivots) {
    int degenerate = 0;
    double last_obj = t(m, rhs());
    while (true) {
      Eigen::Index enter = -1;
      if (degenerate < kDegenerateSwitch) {
        double best = -kPivotTol;
        for (Eigen::Index j = 0; j < allowed_columns; ++j) {
          if (t(m, j) < best) {
            best = t(m, j);
            enter = j;
          }
        }
      } else {
        for (Eigen::Index j = 0; j < allowed_columns; ++j) {
          if (t(m, j) < -kPivotTol) {
            enter = j;
            break;
          }
        }
      }
      if (enter < 0) return Status::Optimal;

      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = t(i, enter);
        if (a <= kPivotTol) continue;
        const double r = t(i, rhs()) / a;
        if (r < ratio - 1e-14 ||
            (r <= ratio + 1e-14 && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          ratio = r;
          leave = i;
        }
      }
      if (leave < 0) return Status::Unbounded;
      pivot(leave, enter);
      if (++pivots > max_pivots) return Status::IterationLimit;
      const double obj = t(m, rhs());
      degenerate = (std::abs(obj - last_obj) <= 1e-14) ? degenerate + 1 : 0;
      last_obj = obj;
    }
  }
};

}  // namespace

Solution solve_standard_form(const MatRef& A, const VecRef& b, const VecRef& c, int max_pivots) {
  require(A.rows() == b.size() && A.cols() == c.size(), ErrorCode::DimensionMismatch,
          "lp: inconsistent problem sizes");
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();

  Tableau tab;
  tab.m = m;
  tab.n = n;
  tab.t = Mat::Zero(m + 1, n + m + 1);
  Vec sign = Vec::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < 0) sign(i) = -1.0;
    tab.t.row(i).head(n) = sign(i) * A.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, tab.rhs()) = sign(i) * b(i);
  }
  tab.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) tab.basis[static_cast<std::size_t>(i)] = n + i;

  Solution sol;
  Vec phase1_cost = Vec::Zero(n + m);
  phase1_cost.tail(m).setOnes();
  tab.price(phase1_cost);
  Status st = tab.run(n, sol.pivots, max_pivots);
  if (st == Status::IterationLimit) {
    sol.status = st;
    return sol;
  }
  const double scale = 1.0 + b.cwiseAbs().sum();
  if (-tab.t(m, tab.rhs()) > 1e-9 * scale) {
    sol.status = Status::Infeasible;
    return sol;
  }
  // Drive zero-level artificials out of the basis where possible.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) continue;
    Eigen::Index col = -1;
    double best = kPivotTol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.t(i, j)) > best) {
        best = std::abs(tab.t(i, j));
        col = j;
      }
    }
    if (col >= 0) tab.pivot(i, col);
  }

  Vec phase2_cost = Vec::Zero(n + m);
  phase2_cost.head(n) = c;
  tab.price(phase2_cost);
  st = tab.run(n, sol.pivots, max_pivots);
  sol.status = st;
  if (st != Status::Optimal) return sol;

  // Clean up the basic solution and recover duals from the final basis.
  Mat B(m, m);
  Vec cb(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = tab.basis[static_cast<std::size_t>(i)];
    if (j < n) {
      B.col(i) = sign.cwiseProduct(A.col(j));
      cb(i) = c(j);
    } else {
      B.col(i) = Vec::Unit(m, j - n);
      cb(i) = 0.0;
    }
  }
  Eigen::FullPivLU<Mat> lu(B);
  Vec signed_b = sign.cwiseProduct(b);
  Vec xb = lu.isInvertible() ? Vec(lu.solve(signed_b)) : Vec(tab.t.col(tab.rhs()).head(m));
  Vec y = lu.isInvertible() ? Vec(lu.transpose().solve(cb)) : Vec::Zero(m);

  sol.x = Vec::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = tab.basis[static_cast<std::size_t>(i)];
    if (j < n) sol.x(j) = std::max(0.0, xb(i));
  }
  sol.dual = sign.cwiseProduct(y);
  sol.objective = c.dot(sol.x);
  return sol;
}

ScalingResult conic_scaling(const MatRef& generators, const VecRef& z) {
  require(generators.rows() == z.size(), ErrorCode::DimensionMismatch,
          "conic_scaling: generator dimension differs from point dimension");
  ScalingResult out;
  if (z.squaredNorm() == 0.0) {
    out.feasible = true;
    out.certificate = Vec::Zero(z.size());
    return out;
  }
  const Solution sol = solve_standard_form(generators, z, Vec::Ones(generators.cols()));
  if (sol.status != Status::Optimal) return out;
  out.feasible = true;
  out.value = sol.objective;
  out.certificate = sol.dual;
  return out;
}

}  // namespace symcap::lp
