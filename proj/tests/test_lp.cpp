#include "symcap/lp.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <limits>
#include <vector>

using namespace symcap;

namespace {

// Brute force over all bases: min c^T x over basic feasible solutions.
double brute_force_min(const Mat& A, const Vec& b, const Vec& c) {
  const Eigen::Index m = A.rows(), n = A.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(m));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == m) {
      Mat B(m, m);
      for (Eigen::Index k = 0; k < m; ++k) B.col(k) = A.col(pick[static_cast<std::size_t>(k)]);
      Eigen::FullPivLU<Mat> lu(B);
      if (lu.rank() < m) return;
      const Vec xb = lu.solve(b);
      if (xb.minCoeff() < -1e-12) return;
      double v = 0.0;
      for (Eigen::Index k = 0; k < m; ++k) v += c(pick[static_cast<std::size_t>(k)]) * xb(k);
      best = std::min(best, v);
      return;
    }
    for (int j = start; j < n; ++j) {
      pick[static_cast<std::size_t>(depth)] = j;
      rec(j + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST(Simplex, MatchesBasisEnumerationOnRandomBoundedProblems) {
  Rng rng(11);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index m = 3, n = 7;
    Mat A(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j) A(i, j) = rng.normal();
    Vec x0(n);
    for (Eigen::Index j = 0; j < n; ++j) x0(j) = rng.uniform(0.0, 1.0);
    const Vec b = A * x0;
    Vec c(n);
    for (Eigen::Index j = 0; j < n; ++j) c(j) = rng.uniform(0.1, 2.0);  // c > 0 keeps it bounded
    const auto sol = lp::solve_standard_form(A, b, c);
    ASSERT_EQ(sol.status, lp::Status::Optimal);
    EXPECT_NEAR(sol.objective, brute_force_min(A, b, c), 1e-9 * (1.0 + std::abs(sol.objective)));
    EXPECT_GE(sol.x.minCoeff(), -1e-12);
    EXPECT_LE((A * sol.x - b).cwiseAbs().maxCoeff(), 1e-9);
    // strong duality and dual feasibility
    EXPECT_NEAR(b.dot(sol.dual), sol.objective, 1e-9 * (1.0 + std::abs(sol.objective)));
    EXPECT_LE((A.transpose() * sol.dual - c).maxCoeff(), 1e-9);
    ++solved;
  }
  EXPECT_EQ(solved, 200);
}

TEST(Simplex, DetectsInfeasibility) {
  Mat A(1, 2);
  A << 1, 1;
  Vec b(1);
  b << -1;
  Vec c = Vec::Ones(2);
  EXPECT_EQ(lp::solve_standard_form(A, b, c).status, lp::Status::Infeasible);
}

TEST(Simplex, DetectsUnboundedness) {
  Mat A(1, 2);
  A << 1, -1;
  Vec b = Vec::Zero(1);
  Vec c(2);
  c << -1, 0;
  EXPECT_EQ(lp::solve_standard_form(A, b, c).status, lp::Status::Unbounded);
}

TEST(Simplex, HandlesDegenerateVertices) {
  // many constraints active at the optimum
  Mat A(2, 6);
  A << 1, 1, 1, 1, 0, 0,
       1, -1, 2, -2, 1, -1;
  Vec b(2);
  b << 1, 0;
  Vec c(6);
  c << 1, 1, 1, 1, 0.5, 0.5;
  const auto sol = lp::solve_standard_form(A, b, c);
  ASSERT_EQ(sol.status, lp::Status::Optimal);
  EXPECT_NEAR(sol.objective, brute_force_min(A, b, c), 1e-12);
}

TEST(ConicScaling, CrossPolytopeGaugeIsL1Norm) {
  Mat G(3, 6);
  G << Mat::Identity(3, 3), -Mat::Identity(3, 3);
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const Vec z = rng.normal_vector(3);
    const auto r = lp::conic_scaling(G, z);
    ASSERT_TRUE(r.feasible);
    EXPECT_NEAR(r.value, z.lpNorm<1>(), 1e-12);
    EXPECT_NEAR(r.certificate.dot(z), r.value, 1e-12);
    EXPECT_LE((G.transpose() * r.certificate).maxCoeff(), 1.0 + 1e-12);
  }
}

TEST(ConicScaling, ZeroTargetAndOutsideCone) {
  Mat G(2, 2);
  G << 1, 0, 0, 1;
  EXPECT_EQ(lp::conic_scaling(G, Vec::Zero(2)).value, 0.0);
  Vec z(2);
  z << -1, 0;
  EXPECT_FALSE(lp::conic_scaling(G, z).feasible);
}
