#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace symcap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecRef = Eigen::Ref<const Eigen::VectorXd>;
using MatRef = Eigen::Ref<const Eigen::MatrixXd>;

enum class ErrorCode {
  NonConvexParameters,
  OriginNotInterior,
  GradientUndefinedAtZero,
  DimensionMismatch,
  TooFewVertices,
  DegenerateLoop,
  OptimizerDidNotConverge,
  ZeroActionStart,
  ZeroAction,
  BodyNotSymmetric,
  BodyNotSymmetricUnderW,
  GraphDisconnected,
  LoopNotSymmetric,
  LoopNotOnBoundary,
  NotSmoothBody,
  StepUnstable,
  OrbitNotClosed,
  SpecParseError,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by iterative solvers; carries the best bound reached and the remaining gap.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, double bound, double gap)
      : Error(ErrorCode::OptimizerDidNotConverge,
              what + " (bound " + std::to_string(bound) + ", gap " + std::to_string(gap) + ")"),
        bound_(bound),
        gap_(gap) {}

  double bound() const noexcept { return bound_; }
  double gap() const noexcept { return gap_; }

 private:
  double bound_;
  double gap_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

/// Seeded random stream. All randomness in the library flows through this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return normal_(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Vec normal_vector(Eigen::Index d) {
    Vec v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = normal();
    return v;
  }
  Vec direction(Eigen::Index d) {
    Vec v = normal_vector(d);
    while (v.norm() < 1e-12) v = normal_vector(d);
    return v.normalized();
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace symcap
