#include "symcap/geometry.hpp"

#include "symcap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace symcap {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvexParameters: return "NonConvexParameters";
    case ErrorCode::OriginNotInterior: return "OriginNotInterior";
    case ErrorCode::GradientUndefinedAtZero: return "GradientUndefinedAtZero";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooFewVertices: return "TooFewVertices";
    case ErrorCode::DegenerateLoop: return "DegenerateLoop";
    case ErrorCode::OptimizerDidNotConverge: return "OptimizerDidNotConverge";
    case ErrorCode::ZeroActionStart: return "ZeroActionStart";
    case ErrorCode::ZeroAction: return "ZeroAction";
    case ErrorCode::BodyNotSymmetric: return "BodyNotSymmetric";
    case ErrorCode::BodyNotSymmetricUnderW: return "BodyNotSymmetricUnderW";
    case ErrorCode::GraphDisconnected: return "GraphDisconnected";
    case ErrorCode::LoopNotSymmetric: return "LoopNotSymmetric";
    case ErrorCode::LoopNotOnBoundary: return "LoopNotOnBoundary";
    case ErrorCode::NotSmoothBody: return "NotSmoothBody";
    case ErrorCode::StepUnstable: return "StepUnstable";
    case ErrorCode::OrbitNotClosed: return "OrbitNotClosed";
    case ErrorCode::SpecParseError: return "SpecParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

const char* to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::Ellipsoid: return "ellipsoid";
    case BodyKind::LpBall: return "lp";
    case BodyKind::PolytopeV: return "polytope_v";
    case BodyKind::PolytopeH: return "polytope_h";
  }
  return "unknown";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool lex_less(const VecRef& a, const VecRef& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

// Column of `candidates` maximizing <col, x>; ties broken by lexicographic order.
Eigen::Index lex_argmax(const Mat& candidates, const VecRef& x) {
  const Vec values = candidates.transpose() * x;
  const double best = values.maxCoeff();
  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  Eigen::Index pick = -1;
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (values(j) < best - tol) continue;
    if (pick < 0 || lex_less(candidates.col(j), candidates.col(pick))) pick = j;
  }
  return pick;
}

bool positively_spans(const Mat& generators) {
  const Eigen::Index d = generators.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (double s : {1.0, -1.0}) {
      if (!lp::conic_scaling(generators, s * Vec::Unit(d, i)).feasible) return false;
    }
  }
  return true;
}

bool columns_closed_under_negation(const Mat& cols) {
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    bool found = false;
    const double tol = 1e-9 * (1.0 + cols.col(j).norm());
    for (Eigen::Index k = 0; k < cols.cols() && !found; ++k) {
      found = (cols.col(k) + cols.col(j)).norm() <= tol;
    }
    if (!found) return false;
  }
  return true;
}

double binomial(Eigen::Index n, Eigen::Index k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (Eigen::Index i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double weighted_lp_norm(const VecRef& x, const VecRef& weights, double p) {
  Vec r = x.cwiseAbs().cwiseQuotient(weights);
  const double m = r.maxCoeff();
  if (m == 0.0) return 0.0;
  if (std::isinf(p)) return m;
  if (p == 1.0) return r.sum();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) acc += std::pow(r(i) / m, p);
  return m * std::pow(acc, 1.0 / p);
}

Vec weighted_lp_gradient(const VecRef& x, const VecRef& weights, double p) {
  const Eigen::Index d = x.size();
  Vec g = Vec::Zero(d);
  const Vec r = x.cwiseAbs().cwiseQuotient(weights);
  if (std::isinf(p)) {
    Eigen::Index i = 0;
    r.maxCoeff(&i);
    g(i) = (x(i) >= 0 ? 1.0 : -1.0) / weights(i);
    return g;
  }
  if (p == 1.0) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (x(i) != 0.0) g(i) = (x(i) > 0 ? 1.0 : -1.0) / weights(i);
    }
    return g;
  }
  const double norm = weighted_lp_norm(x, weights, p);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (x(i) == 0.0) continue;
    g(i) = std::pow(r(i) / norm, p - 1.0) * (x(i) > 0 ? 1.0 : -1.0) / weights(i);
  }
  return g;
}

double dual_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return p / (p - 1.0);
}

}  // namespace

std::optional<Mat> enumerate_facets(const MatRef& points, double max_subsets) {
  const Eigen::Index d = points.rows();
  const Eigen::Index k = points.cols();
  if (k < d || binomial(k, d) > max_subsets) return std::nullopt;

  std::vector<Vec> found;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = i;
  const double scale = points.cwiseAbs().maxCoeff();
  Mat sub(d, d);
  while (true) {
    for (Eigen::Index i = 0; i < d; ++i) sub.col(i) = points.col(idx[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<Mat> lu(sub.transpose());
    lu.setThreshold(1e-10);
    if (lu.rank() == d) {
      const Vec a = lu.solve(Vec::Ones(d));
      const double slack = (points.transpose() * a).maxCoeff();
      if (slack <= 1.0 + 1e-9) {
        const double tol = 1e-9 * (1.0 + a.norm()) / std::max(1.0, scale);
        const bool dup = std::any_of(found.begin(), found.end(),
                                     [&](const Vec& f) { return (f - a).norm() <= tol; });
        if (!dup) found.push_back(a);
      }
    }
    // next combination
    Eigen::Index pos = d - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - d + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (Eigen::Index i = pos + 1; i < d; ++i)
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  std::sort(found.begin(), found.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
  Mat out(d, static_cast<Eigen::Index>(found.size()));
  for (std::size_t j = 0; j < found.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = found[j];
  return out;
}

ConvexBody::ConvexBody(Data data, Eigen::Index dim) : data_(std::move(data)), dim_(dim) { finalize(); }

void ConvexBody::finalize() {
  std::visit(overloaded{
                 [&](const Ellipsoid& e) {
                   symmetric_ = e.center.norm() <= 1e-14;
                   Eigen::SelfAdjointEigenSolver<Mat> es(e.shape, Eigen::EigenvaluesOnly);
                   radius_ = e.center.norm() + 1.0 / std::sqrt(es.eigenvalues().minCoeff());
                 },
                 [&](const LpBall& b) {
                   symmetric_ = true;
                   if (b.p <= 2.0) {
                     radius_ = b.weights.maxCoeff();
                   } else {
                     const double r = std::isinf(b.p) ? 1.0 : b.p / (b.p - 2.0);
                     radius_ = std::sqrt(weighted_lp_norm(b.weights.cwiseAbs2(), Vec::Ones(dim_), r));
                   }
                 },
                 [&](const PolytopeV& v) {
                   symmetric_ = columns_closed_under_negation(v.vertices);
                   radius_ = v.vertices.colwise().norm().maxCoeff();
                 },
                 [&](const PolytopeH& h) {
                   symmetric_ = columns_closed_under_negation(h.polar_vertices);
                   if (h.vertices) {
                     radius_ = h.vertices->colwise().norm().maxCoeff();
                   } else {
                     double acc = 0.0;
                     for (Eigen::Index i = 0; i < dim_; ++i) {
                       const double hp = lp::conic_scaling(h.polar_vertices, Vec::Unit(dim_, i)).value;
                       const double hm = lp::conic_scaling(h.polar_vertices, -Vec::Unit(dim_, i)).value;
                       acc += std::pow(std::max(hp, hm), 2);
                     }
                     radius_ = std::sqrt(acc);
                   }
                 },
             },
             data_);
}

ConvexBody ConvexBody::ellipsoid(const MatRef& shape, std::optional<Vec> center) {
  require(shape.rows() == shape.cols() && shape.rows() >= 1, ErrorCode::DimensionMismatch,
          "ellipsoid matrix must be square");
  const Eigen::Index d = shape.rows();
  const double scale = std::max(1e-300, shape.cwiseAbs().maxCoeff());
  require((shape - shape.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          ErrorCode::NonConvexParameters, "ellipsoid matrix is not symmetric");
  Mat sym = 0.5 * (shape + shape.transpose());
  Eigen::LLT<Mat> llt(sym);
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  require(llt.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0,
          ErrorCode::NonConvexParameters, "ellipsoid matrix is not positive definite");
  Vec c = center.value_or(Vec::Zero(d));
  require(c.size() == d, ErrorCode::DimensionMismatch, "ellipsoid center has wrong dimension");
  require(c.dot(sym * c) < 1.0, ErrorCode::OriginNotInterior, "origin is not inside the ellipsoid");
  Mat inv = llt.solve(Mat::Identity(d, d));
  inv = 0.5 * (inv + inv.transpose()).eval();
  return ConvexBody(Ellipsoid{sym, c, inv}, d);
}

ConvexBody ConvexBody::ellipsoid_axes(const VecRef& axes) {
  require((axes.array() > 0).all(), ErrorCode::NonConvexParameters, "ellipsoid axes must be positive");
  return ellipsoid(axes.cwiseAbs2().cwiseInverse().asDiagonal().toDenseMatrix());
}

ConvexBody ConvexBody::ellipsoid_complex(const VecRef& radii) {
  const Eigen::Index n = radii.size();
  Vec axes(2 * n);
  axes << radii, radii;
  return ellipsoid_axes(axes);
}

ConvexBody ConvexBody::ball(Eigen::Index dim, double radius) {
  require(radius > 0, ErrorCode::NonConvexParameters, "ball radius must be positive");
  return ellipsoid(Mat::Identity(dim, dim) / (radius * radius));
}

ConvexBody ConvexBody::lp_ball(Eigen::Index dim, double p, std::optional<Vec> weights) {
  require(dim >= 1, ErrorCode::DimensionMismatch, "lp ball dimension must be positive");
  require(p >= 1.0, ErrorCode::NonConvexParameters, "lp exponent must be >= 1");
  Vec w = weights.value_or(Vec::Ones(dim));
  require(w.size() == dim, ErrorCode::DimensionMismatch, "lp weights have wrong dimension");
  require((w.array() > 0).all(), ErrorCode::NonConvexParameters, "lp weights must be positive");
  if (dim <= 8 && std::isinf(p)) {
    Mat normals(dim, 2 * dim);
    Vec offsets(2 * dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      normals.col(i) = Vec::Unit(dim, i);
      normals.col(dim + i) = -Vec::Unit(dim, i);
      offsets(i) = offsets(dim + i) = w(i);
    }
    return polytope_h(normals, offsets);
  }
  if (dim <= 8 && p == 1.0) {
    Mat verts(dim, 2 * dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      verts.col(i) = w(i) * Vec::Unit(dim, i);
      verts.col(dim + i) = -w(i) * Vec::Unit(dim, i);
    }
    return polytope_v(verts);
  }
  return ConvexBody(LpBall{p, w}, dim);
}

ConvexBody ConvexBody::polytope_v(const MatRef& vertices) {
  require(vertices.cols() >= 1 && vertices.rows() >= 1, ErrorCode::NonConvexParameters,
          "polytope vertex list is empty");
  require(vertices.allFinite(), ErrorCode::NonConvexParameters, "polytope vertices must be finite");
  require(positively_spans(vertices), ErrorCode::OriginNotInterior,
          "origin is not in the interior of the vertex hull");
  PolytopeV v{vertices, enumerate_facets(vertices)};
  return ConvexBody(std::move(v), vertices.rows());
}

ConvexBody ConvexBody::polytope_h(const MatRef& normals, const VecRef& offsets) {
  require(normals.cols() >= 1 && normals.cols() == offsets.size(), ErrorCode::NonConvexParameters,
          "polytope facet list is empty or inconsistent");
  require(normals.allFinite() && offsets.allFinite(), ErrorCode::NonConvexParameters,
          "polytope facets must be finite");
  require((offsets.array() > 0).all(), ErrorCode::OriginNotInterior,
          "facet offsets must be positive for the origin to be interior");
  require(positively_spans(normals), ErrorCode::NonConvexParameters, "facet normals describe an unbounded set");
  Mat polar_vertices = normals * offsets.cwiseInverse().asDiagonal();
  PolytopeH h{normals, offsets, polar_vertices, enumerate_facets(polar_vertices)};
  return ConvexBody(std::move(h), normals.rows());
}

ConvexBody ConvexBody::cube(Eigen::Index dim, double half_width) {
  return lp_ball(dim, std::numeric_limits<double>::infinity(), Vec::Constant(dim, half_width));
}

ConvexBody ConvexBody::cross_polytope(Eigen::Index dim, double radius) {
  return lp_ball(dim, 1.0, Vec::Constant(dim, radius));
}

BodyKind ConvexBody::kind() const { return static_cast<BodyKind>(data_.index()); }

bool ConvexBody::is_smooth() const {
  if (const auto* b = std::get_if<LpBall>(&data_)) return b->p > 1.0 && !std::isinf(b->p);
  return std::holds_alternative<Ellipsoid>(data_);
}

bool ConvexBody::is_polytope() const {
  return std::holds_alternative<PolytopeV>(data_) || std::holds_alternative<PolytopeH>(data_);
}

std::optional<Mat> ConvexBody::vertex_list() const {
  if (const auto* v = std::get_if<PolytopeV>(&data_)) return v->vertices;
  if (const auto* h = std::get_if<PolytopeH>(&data_)) return h->vertices;
  return std::nullopt;
}

std::optional<Mat> ConvexBody::polar_vertex_list() const {
  if (const auto* v = std::get_if<PolytopeV>(&data_)) return v->facets;
  if (const auto* h = std::get_if<PolytopeH>(&data_)) return h->polar_vertices;
  return std::nullopt;
}

namespace {
void check_dim(const ConvexBody& body, const VecRef& x) {
  require(x.size() == body.dim(), ErrorCode::DimensionMismatch,
          "vector of size " + std::to_string(x.size()) + " for body of dimension " + std::to_string(body.dim()));
}
}  // namespace

double gauge(const ConvexBody& body, const VecRef& x) {
  check_dim(body, x);
  return std::visit(
      overloaded{
          [&](const Ellipsoid& e) {
            const double a = x.dot(e.shape * x);
            if (a == 0.0) return 0.0;
            const double b = x.dot(e.shape * e.center);
            const double kappa = 1.0 - e.center.dot(e.shape * e.center);
            const double root = std::sqrt(b * b + a * kappa);
            return b > 0 ? a / (b + root) : (root - b) / kappa;
          },
          [&](const LpBall& b) { return weighted_lp_norm(x, b.weights, b.p); },
          [&](const PolytopeV& v) {
            if (x.squaredNorm() == 0.0) return 0.0;
            if (v.facets) return std::max(0.0, (v.facets->transpose() * x).maxCoeff());
            const auto r = lp::conic_scaling(v.vertices, x);
            require(r.feasible, ErrorCode::OriginNotInterior, "gauge linear program infeasible");
            return r.value;
          },
          [&](const PolytopeH& h) { return std::max(0.0, (h.polar_vertices.transpose() * x).maxCoeff()); },
      },
      body.data());
}

double support(const ConvexBody& body, const VecRef& u) {
  check_dim(body, u);
  return std::visit(overloaded{
                        [&](const Ellipsoid& e) { return std::sqrt(u.dot(e.shape_inverse * u)) + e.center.dot(u); },
                        [&](const LpBall& b) {
                          return weighted_lp_norm(u, b.weights.cwiseInverse(), dual_exponent(b.p));
                        },
                        [&](const PolytopeV& v) { return (v.vertices.transpose() * u).maxCoeff(); },
                        [&](const PolytopeH& h) {
                          if (h.vertices) return (h.vertices->transpose() * u).maxCoeff();
                          if (u.squaredNorm() == 0.0) return 0.0;
                          return lp::conic_scaling(h.polar_vertices, u).value;
                        },
                    },
                    body.data());
}

Vec gauge_gradient(const ConvexBody& body, const VecRef& x) {
  check_dim(body, x);
  require(x.squaredNorm() > 0.0, ErrorCode::GradientUndefinedAtZero, "gauge gradient at the origin");
  return std::visit(overloaded{
                        [&](const Ellipsoid& e) -> Vec {
                          const Vec y = x / gauge(body, x);
                          const Vec normal = e.shape * (y - e.center);
                          return normal / normal.dot(y);
                        },
                        [&](const LpBall& b) -> Vec { return weighted_lp_gradient(x, b.weights, b.p); },
                        [&](const PolytopeV& v) -> Vec {
                          if (v.facets) return v.facets->col(lex_argmax(*v.facets, x));
                          return lp::conic_scaling(v.vertices, x).certificate;
                        },
                        [&](const PolytopeH& h) -> Vec { return h.polar_vertices.col(lex_argmax(h.polar_vertices, x)); },
                    },
                    body.data());
}

Vec support_point(const ConvexBody& body, const VecRef& u) {
  check_dim(body, u);
  require(u.squaredNorm() > 0.0, ErrorCode::GradientUndefinedAtZero, "support point for the zero direction");
  return std::visit(overloaded{
                        [&](const Ellipsoid& e) -> Vec {
                          const Vec mu = e.shape_inverse * u;
                          return e.center + mu / std::sqrt(u.dot(mu));
                        },
                        [&](const LpBall& b) -> Vec {
                          return weighted_lp_gradient(u, b.weights.cwiseInverse(), dual_exponent(b.p));
                        },
                        [&](const PolytopeV& v) -> Vec { return v.vertices.col(lex_argmax(v.vertices, u)); },
                        [&](const PolytopeH& h) -> Vec {
                          if (h.vertices) return h.vertices->col(lex_argmax(*h.vertices, u));
                          return lp::conic_scaling(h.polar_vertices, u).certificate;
                        },
                    },
                    body.data());
}

ConvexBody polar(const ConvexBody& body) {
  const Eigen::Index d = body.dim();
  return std::visit(
      overloaded{
          [&](const Ellipsoid& e) {
            if (e.center.norm() == 0.0) return ConvexBody::ellipsoid(e.shape_inverse);
            const Mat q = e.shape_inverse - e.center * e.center.transpose();
            const Eigen::LLT<Mat> llt(q);
            const Vec qc = llt.solve(e.center);
            Mat shape = q / (1.0 + e.center.dot(qc));
            shape = 0.5 * (shape + shape.transpose()).eval();
            return ConvexBody::ellipsoid(shape, Vec(-qc));
          },
          [&](const LpBall& b) { return ConvexBody::lp_ball(d, dual_exponent(b.p), Vec(b.weights.cwiseInverse())); },
          [&](const PolytopeV& v) {
            Mat normals = v.vertices;
            Vec offsets = Vec::Ones(v.vertices.cols());
            PolytopeH h{normals, offsets, normals, v.facets};
            return ConvexBody(std::move(h), d);
          },
          [&](const PolytopeH& h) {
            PolytopeV v{h.polar_vertices, h.vertices};
            return ConvexBody(std::move(v), d);
          },
      },
      body.data());
}

Vec boundary_point(const ConvexBody& body, const VecRef& direction) {
  check_dim(body, direction);
  require(direction.squaredNorm() > 0.0, ErrorCode::GradientUndefinedAtZero, "zero direction");
  return direction / gauge(body, direction);
}

}  // namespace symcap
