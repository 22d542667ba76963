#pragma once

#include "symcap/geometry.hpp"
#include "symcap/symplectic.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace symcap {

/// Closed polygonal curve; the columns of `vertices()` are visited cyclically.
class DiscreteLoop {
 public:
  DiscreteLoop() = default;
  explicit DiscreteLoop(Mat vertices);

  Eigen::Index dim() const { return vertices_.rows(); }
  Eigen::Index size() const { return vertices_.cols(); }
  const Mat& vertices() const { return vertices_; }
  auto vertex(Eigen::Index i) const { return vertices_.col(((i % size()) + size()) % size()); }
  Vec edge(Eigen::Index i) const { return vertex(i + 1) - vertex(i); }

  SymplecticFrame frame() const { return SymplecticFrame::for_dim(dim()); }

  /// Drops consecutive duplicate vertices.
  DiscreteLoop normalized() const;
  DiscreteLoop translated(const VecRef& t) const;
  DiscreteLoop scaled(double s) const;
  DiscreteLoop reversed() const;
  /// Same cyclic curve, starting at vertex `start`.
  DiscreteLoop rotated(Eigen::Index start) const;
  Vec centroid() const { return vertices_.rowwise().mean(); }
  double euclidean_diameter() const;

 private:
  Mat vertices_;
};

/// The norms loops are measured in: the gauge g_K, or the dual norm
/// v -> h_K(-J v) of the closed-loop variational problem (and its mirror h_K(J v)).
class LoopNorm {
 public:
  enum class Kind { Gauge, ClarkeDual, ClarkeDualMirror };

  LoopNorm(ConvexBody body, Kind kind = Kind::Gauge) : body_(std::move(body)), kind_(kind) {}

  double operator()(const VecRef& v) const;
  Vec gradient(const VecRef& v) const;
  bool is_symmetric() const { return body_.is_symmetric(); }
  const ConvexBody& body() const { return body_; }
  Kind kind() const { return kind_; }

 private:
  ConvexBody body_;
  Kind kind_;
};

double loop_length(const DiscreteLoop& loop, const LoopNorm& norm);
/// Length of an open polyline (columns in order).
double polyline_length(const MatRef& points, const LoopNorm& norm);

double gauge_length(const DiscreteLoop& loop, const ConvexBody& body);
double action(const DiscreteLoop& loop);

/// N vertices at equal norm-arclength spacing along the polygonal trace, starting at vertex 0.
DiscreteLoop resample_by_arclength(const DiscreteLoop& loop, const LoopNorm& norm, Eigen::Index N);
DiscreteLoop resample_by_gauge_arclength(const DiscreteLoop& loop, const ConvexBody& body, Eigen::Index N);

/// Splits the loop, starting at vertex 0, into m consecutive open arcs of equal
/// norm-length. Each arc includes both endpoints; breakpoints are interpolated
/// on edges unless they fall on a vertex.
std::vector<Mat> split_equal_length(const DiscreteLoop& loop, const LoopNorm& norm, int m);
std::pair<Mat, Mat> split_at_half_length(const DiscreteLoop& loop, const LoopNorm& norm);

struct ContainmentResult {
  double score = 0.0;        // achieved max_i g_K(x_i - t), an upper bound on sigma
  double lower_bound = 0.0;  // certified lower bound on sigma
  Vec translation;
  int iterations = 0;
  std::string method;
  double gap() const { return score - lower_bound; }
};

struct ContainmentOptions {
  double gap_tolerance = 1e-7;
  int restarts = 20;
  int subgradient_steps = 50;
  int max_cut_rounds = 400;
  std::uint64_t seed = 0;
};

/// sigma = min_t max_i g_K(x_i - t). The loop fits in the interior of a translate
/// of K iff sigma < 1. Exact LP for polytopes with a facet description, cutting
/// planes with a certified gap otherwise.
ContainmentResult containment_score(const DiscreteLoop& loop, const ConvexBody& body,
                                    const ContainmentOptions& options = {});

struct LoopMetrics {
  std::string id;
  double length = 0.0;
  double action = 0.0;
  double sigma = 0.0;
};
void write_loop_metrics_csv(std::ostream& out, std::span<const LoopMetrics> rows);

}  // namespace symcap
