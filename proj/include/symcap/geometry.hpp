#pragma once

#include "symcap/core.hpp"

#include <optional>
#include <string>
#include <variant>

namespace symcap {

enum class BodyKind { Ellipsoid, LpBall, PolytopeV, PolytopeH };

const char* to_string(BodyKind kind);

/// K = { x : (x - c)^T M (x - c) <= 1 }.
struct Ellipsoid {
  Mat shape;
  Vec center;
  Mat shape_inverse;
};

/// K = { x : sum_i |x_i / w_i|^p <= 1 }, p in [1, inf].
struct LpBall {
  double p = 2.0;
  Vec weights;
};

/// K = conv(columns of vertices). `facets` holds the vertices of the polar
/// (one column per facet normal a with <a, x> <= 1 on K) when enumeration is
/// affordable.
struct PolytopeV {
  Mat vertices;
  std::optional<Mat> facets;
};

/// K = { x : <n_j, x> <= c_j }. `polar_vertices` are the columns n_j / c_j;
/// `vertices` are the extreme points of K when enumeration is affordable.
struct PolytopeH {
  Mat normals;
  Vec offsets;
  Mat polar_vertices;
  std::optional<Mat> vertices;
};

/// Immutable convex body with 0 in its interior.
class ConvexBody {
 public:
  using Data = std::variant<Ellipsoid, LpBall, PolytopeV, PolytopeH>;

  static ConvexBody ellipsoid(const MatRef& shape, std::optional<Vec> center = std::nullopt);
  /// Axis-aligned ellipsoid with one semi-axis per coordinate.
  static ConvexBody ellipsoid_axes(const VecRef& axes);
  /// Ellipsoid with radius r_j in the complex line (q_j, p_j).
  static ConvexBody ellipsoid_complex(const VecRef& radii);
  static ConvexBody ball(Eigen::Index dim, double radius = 1.0);
  /// Weighted l_p ball. l_1 and l_inf are stored as polytopes when dim <= 8.
  static ConvexBody lp_ball(Eigen::Index dim, double p, std::optional<Vec> weights = std::nullopt);
  static ConvexBody polytope_v(const MatRef& vertices);
  static ConvexBody polytope_h(const MatRef& normals, const VecRef& offsets);
  static ConvexBody cube(Eigen::Index dim, double half_width = 1.0);
  static ConvexBody cross_polytope(Eigen::Index dim, double radius = 1.0);

  BodyKind kind() const;
  Eigen::Index dim() const { return dim_; }
  const Data& data() const { return data_; }

  bool is_symmetric() const { return symmetric_; }
  /// Smooth gauge: gradient defined away from the origin.
  bool is_smooth() const;
  bool is_polytope() const;
  /// Upper bound on max{|x| : x in K}.
  double euclidean_radius() const { return radius_; }

  /// Extreme points of K and of its polar, when known.
  std::optional<Mat> vertex_list() const;
  std::optional<Mat> polar_vertex_list() const;

 private:
  friend ConvexBody polar(const ConvexBody& body);
  ConvexBody(Data data, Eigen::Index dim);
  void finalize();

  Data data_;
  Eigen::Index dim_ = 0;
  bool symmetric_ = false;
  double radius_ = 0.0;
};

double gauge(const ConvexBody& body, const VecRef& x);
double support(const ConvexBody& body, const VecRef& u);

/// Gradient of the gauge (0-homogeneous, <grad, x> = g(x)). At polytope ridges
/// the lexicographically smallest maximizing facet normal is selected.
Vec gauge_gradient(const ConvexBody& body, const VecRef& x);

/// A point of K attaining the support value in direction u (the gradient of h_K).
Vec support_point(const ConvexBody& body, const VecRef& u);

ConvexBody polar(const ConvexBody& body);

/// direction / g_K(direction).
Vec boundary_point(const ConvexBody& body, const VecRef& direction);

/// Enumerate facets of conv(points) (0 interior) as normals a with <a, x> <= 1.
/// Returns nullopt when C(#points, dim) exceeds `max_subsets`.
std::optional<Mat> enumerate_facets(const MatRef& points, double max_subsets = 2e6);

}  // namespace symcap
