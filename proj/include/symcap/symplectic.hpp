#pragma once

// Standard symplectic structure on R^{2n} = C^n with coordinates laid out as
// (q_1..q_n, p_1..p_n) and z_j = q_j + i p_j.
//   J(q, p) = (-p, q),   omega(x, y) = <J x, y>.

#include "symcap/core.hpp"

#include <cmath>
#include <numbers>

namespace symcap {

template <typename Derived>
void require_even(const Eigen::MatrixBase<Derived>& x) {
  require(x.rows() >= 2 && x.rows() % 2 == 0, ErrorCode::DimensionMismatch,
          "symplectic vectors need even dimension, got " + std::to_string(x.rows()));
}

/// Multiplication by i, applied column-wise.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime> apply_J(
    const Eigen::MatrixBase<Derived>& x) {
  require_even(x);
  const Eigen::Index n = x.rows() / 2;
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime> out(x.rows(), x.cols());
  out.topRows(n) = -x.bottomRows(n);
  out.bottomRows(n) = x.topRows(n);
  return out;
}

template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> j_matrix(Eigen::Index n) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> J =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = -Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
  J.bottomLeftCorner(n, n) = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
  return J;
}

template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar omega(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  require_even(x);
  require(x.size() == y.size(), ErrorCode::DimensionMismatch, "omega: dimension mismatch");
  const Eigen::Index n = x.size() / 2;
  // <Jx, y> = sum_j q^x_j p^y_j - p^x_j q^y_j
  return x.head(n).dot(y.tail(n)) - x.tail(n).dot(y.head(n));
}

/// Component of x in the complex line spanned by (q_j, p_j), other coordinates zeroed.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime> project_to_line(
    const Eigen::MatrixBase<Derived>& x, Eigen::Index j) {
  require_even(x);
  const Eigen::Index n = x.rows() / 2;
  require(j >= 0 && j < n, ErrorCode::DimensionMismatch, "complex line index out of range");
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime> out =
      Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime>::Zero(x.rows(), x.cols());
  out.row(j) = x.row(j);
  out.row(n + j) = x.row(n + j);
  return out;
}

/// w^k x with w = exp(2 pi i / m), rotating every complex line simultaneously.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime> root_multiply(
    int m, long k, const Eigen::MatrixBase<Derived>& x) {
  require(m >= 2, ErrorCode::InvalidArgument, "root of unity order must be >= 2");
  require_even(x);
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = x.rows() / 2;
  const long r = ((k % m) + m) % m;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime> out(x.rows(), x.cols());
  if (r == 0) {
    out = x;
    return out;
  }
  // exact values for quarter turns keep m = 2, 4 free of rounding
  Scalar c, s;
  if (4 * r == m) {
    c = 0, s = 1;
  } else if (2 * r == m) {
    c = -1, s = 0;
  } else if (4 * r == 3 * m) {
    c = 0, s = -1;
  } else {
    const Scalar theta = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(r) / Scalar(m);
    c = std::cos(theta);
    s = std::sin(theta);
  }
  out.topRows(n) = c * x.topRows(n) - s * x.bottomRows(n);
  out.bottomRows(n) = s * x.topRows(n) + c * x.bottomRows(n);
  return out;
}

/// Action (1/2) sum_i omega(x_i, x_{i+1}) of the closed polygon whose vertices are
/// the columns of `vertices`. Independent of the primitive and of translations.
template <typename Derived>
typename Derived::Scalar polygon_action(const Eigen::MatrixBase<Derived>& vertices) {
  require(vertices.cols() >= 3, ErrorCode::TooFewVertices, "polygon action needs at least 3 vertices");
  require_even(vertices);
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = vertices.rows() / 2;
  const Eigen::Index N = vertices.cols();
  // Translating to the first vertex improves conditioning without changing the value.
  Scalar acc = 0;
  for (Eigen::Index i = 1; i + 1 < N; ++i) {
    const auto a = vertices.col(i) - vertices.col(0);
    const auto b = vertices.col(i + 1) - vertices.col(0);
    acc += a.head(n).dot(b.tail(n)) - a.tail(n).dot(b.head(n));
  }
  return acc / Scalar(2);
}

/// Area constant of the regular m-gon: area = alpha_m * side^2.
inline double regular_polygon_alpha(int m) {
  require(m >= 2, ErrorCode::InvalidArgument, "polygon order must be >= 2");
  if (m == 2) return 0.0;
  return m / (4.0 * std::tan(std::numbers::pi / m));
}

/// Dimension-checked view of the structure for a fixed n.
class SymplecticFrame {
 public:
  explicit SymplecticFrame(Eigen::Index n) : n_(n) {
    require(n >= 1, ErrorCode::DimensionMismatch, "symplectic frame needs n >= 1");
  }
  static SymplecticFrame for_dim(Eigen::Index dim) {
    require(dim >= 2 && dim % 2 == 0, ErrorCode::DimensionMismatch, "odd dimension has no symplectic frame");
    return SymplecticFrame(dim / 2);
  }

  Eigen::Index n() const { return n_; }
  Eigen::Index dim() const { return 2 * n_; }

  template <typename Derived>
  void check(const Eigen::MatrixBase<Derived>& x) const {
    require(x.rows() == dim(), ErrorCode::DimensionMismatch,
            "expected dimension " + std::to_string(dim()) + ", got " + std::to_string(x.rows()));
  }

  Vec J(const VecRef& x) const {
    check(x);
    return apply_J(x);
  }
  double omega(const VecRef& x, const VecRef& y) const {
    check(x);
    check(y);
    return symcap::omega(x, y);
  }
  Vec root_multiply(int m, long k, const VecRef& x) const {
    check(x);
    return symcap::root_multiply(m, k, x);
  }
  double polygon_action(const MatRef& vertices) const {
    check(vertices);
    return symcap::polygon_action(vertices);
  }
  Vec project(const VecRef& x, Eigen::Index j) const {
    check(x);
    return project_to_line(x, j);
  }
  Mat J_matrix() const { return j_matrix(n_); }

 private:
  Eigen::Index n_;
};

}  // namespace symcap
