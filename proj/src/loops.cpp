#include "symcap/loops.hpp"

#include "symcap/lp.hpp"
#include "symcap/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace symcap {

DiscreteLoop::DiscreteLoop(Mat vertices) : vertices_(std::move(vertices)) {
  require(vertices_.cols() >= 3, ErrorCode::TooFewVertices, "a loop needs at least 3 vertices");
  require(vertices_.rows() >= 1, ErrorCode::DimensionMismatch, "loop vertices are empty");
  require(vertices_.allFinite(), ErrorCode::DegenerateLoop, "loop has non-finite vertices");
}

DiscreteLoop DiscreteLoop::normalized() const {
  const double scale = std::max(1e-300, vertices_.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < size(); ++i) {
    const Eigen::Index prev = keep.empty() ? -1 : keep.back();
    if (prev >= 0 && (vertices_.col(i) - vertices_.col(prev)).norm() <= 1e-14 * scale) continue;
    keep.push_back(i);
  }
  while (keep.size() > 1 && (vertices_.col(keep.back()) - vertices_.col(keep.front())).norm() <= 1e-14 * scale)
    keep.pop_back();
  require(keep.size() >= 3, ErrorCode::DegenerateLoop, "loop has fewer than 3 distinct vertices");
  Mat out(dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = vertices_.col(keep[j]);
  return DiscreteLoop(std::move(out));
}

DiscreteLoop DiscreteLoop::translated(const VecRef& t) const {
  require(t.size() == dim(), ErrorCode::DimensionMismatch, "translation has wrong dimension");
  return DiscreteLoop(vertices_.colwise() + t);
}

DiscreteLoop DiscreteLoop::scaled(double s) const { return DiscreteLoop(s * vertices_); }

DiscreteLoop DiscreteLoop::reversed() const { return DiscreteLoop(vertices_.rowwise().reverse()); }

DiscreteLoop DiscreteLoop::rotated(Eigen::Index start) const {
  Mat out(dim(), size());
  for (Eigen::Index i = 0; i < size(); ++i) out.col(i) = vertex(start + i);
  return DiscreteLoop(std::move(out));
}

double DiscreteLoop::euclidean_diameter() const {
  double best = 0.0;
  for (Eigen::Index i = 0; i < size(); ++i)
    for (Eigen::Index j = i + 1; j < size(); ++j) best = std::max(best, (vertices_.col(i) - vertices_.col(j)).norm());
  return best;
}

double LoopNorm::operator()(const VecRef& v) const {
  switch (kind_) {
    case Kind::Gauge: return gauge(body_, v);
    case Kind::ClarkeDual: return support(body_, -apply_J(v));
    case Kind::ClarkeDualMirror: return support(body_, apply_J(v));
  }
  return 0.0;
}

Vec LoopNorm::gradient(const VecRef& v) const {
  switch (kind_) {
    case Kind::Gauge: return gauge_gradient(body_, v);
    case Kind::ClarkeDual: return apply_J(support_point(body_, -apply_J(v)));
    case Kind::ClarkeDualMirror: return -apply_J(support_point(body_, apply_J(v)));
  }
  return Vec();
}

double loop_length(const DiscreteLoop& loop, const LoopNorm& norm) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < loop.size(); ++i) total += norm(loop.edge(i));
  return total;
}

double polyline_length(const MatRef& points, const LoopNorm& norm) {
  double total = 0.0;
  for (Eigen::Index i = 0; i + 1 < points.cols(); ++i) total += norm(points.col(i + 1) - points.col(i));
  return total;
}

double gauge_length(const DiscreteLoop& loop, const ConvexBody& body) {
  const double len = loop_length(loop, LoopNorm(body));
  require(len > 0.0, ErrorCode::DegenerateLoop, "loop has zero length");
  return len;
}

double action(const DiscreteLoop& loop) { return polygon_action(loop.vertices()); }

namespace {

struct Arclength {
  std::vector<double> cum;  // cum[i] = length up to vertex i; cum[N] = total
  double total() const { return cum.back(); }
};

Arclength arclength(const DiscreteLoop& loop, const LoopNorm& norm) {
  Arclength a;
  a.cum.resize(static_cast<std::size_t>(loop.size()) + 1, 0.0);
  for (Eigen::Index i = 0; i < loop.size(); ++i)
    a.cum[static_cast<std::size_t>(i) + 1] = a.cum[static_cast<std::size_t>(i)] + norm(loop.edge(i));
  require(a.total() > 0.0, ErrorCode::DegenerateLoop, "loop has zero length");
  return a;
}

// Point at arclength position s in [0, total); also reports the edge it lies on
// or the vertex it snapped to.
struct Locus {
  Vec point;
  Eigen::Index edge = 0;
  bool on_vertex = false;
};

Locus locate(const DiscreteLoop& loop, const Arclength& a, double s) {
  const double snap = 1e-12 * a.total();
  const auto N = loop.size();
  auto it = std::upper_bound(a.cum.begin(), a.cum.end(), s);
  Eigen::Index e = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(it - a.cum.begin()) - 1, 0, N - 1);
  const double c0 = a.cum[static_cast<std::size_t>(e)];
  const double c1 = a.cum[static_cast<std::size_t>(e) + 1];
  Locus out;
  out.edge = e;
  if (s - c0 <= snap) {
    out.point = loop.vertex(e);
    out.on_vertex = true;
  } else if (c1 - s <= snap) {
    out.point = loop.vertex(e + 1);
    out.edge = (e + 1) % N;
    out.on_vertex = true;
  } else {
    const double tau = (s - c0) / (c1 - c0);
    out.point = loop.vertex(e) + tau * loop.edge(e);
  }
  return out;
}

}  // namespace

DiscreteLoop resample_by_arclength(const DiscreteLoop& loop, const LoopNorm& norm, Eigen::Index N) {
  require(N >= 3, ErrorCode::TooFewVertices, "resampling needs at least 3 vertices");
  const Arclength a = arclength(loop, norm);
  Mat out(loop.dim(), N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const double s = a.total() * static_cast<double>(k) / static_cast<double>(N);
    out.col(k) = locate(loop, a, s).point;
  }
  return DiscreteLoop(std::move(out));
}

DiscreteLoop resample_by_gauge_arclength(const DiscreteLoop& loop, const ConvexBody& body, Eigen::Index N) {
  return resample_by_arclength(loop, LoopNorm(body), N);
}

std::vector<Mat> split_equal_length(const DiscreteLoop& loop, const LoopNorm& norm, int m) {
  require(m >= 2, ErrorCode::InvalidArgument, "split needs m >= 2");
  const Arclength a = arclength(loop, norm);
  const auto N = loop.size();
  const double snap = 1e-12 * a.total();

  std::vector<Locus> breaks;
  std::vector<double> pos;
  for (int j = 0; j < m; ++j) {
    const double s = a.total() * j / m;
    breaks.push_back(locate(loop, a, s));
    pos.push_back(s);
  }
  pos.push_back(a.total());

  std::vector<Mat> arcs;
  for (int j = 0; j < m; ++j) {
    std::vector<Vec> pts{breaks[static_cast<std::size_t>(j)].point};
    const double lo = pos[static_cast<std::size_t>(j)] + snap;
    const double hi = pos[static_cast<std::size_t>(j) + 1] - snap;
    for (Eigen::Index v = 0; v < N; ++v) {
      const double c = a.cum[static_cast<std::size_t>(v)];
      if (c > lo && c < hi) pts.push_back(loop.vertex(v));
    }
    pts.push_back(j + 1 < m ? breaks[static_cast<std::size_t>(j) + 1].point : breaks.front().point);
    Mat arc(loop.dim(), static_cast<Eigen::Index>(pts.size()));
    for (std::size_t k = 0; k < pts.size(); ++k) arc.col(static_cast<Eigen::Index>(k)) = pts[k];
    arcs.push_back(std::move(arc));
  }
  return arcs;
}

std::pair<Mat, Mat> split_at_half_length(const DiscreteLoop& loop, const LoopNorm& norm) {
  auto arcs = split_equal_length(loop, norm, 2);
  return {std::move(arcs[0]), std::move(arcs[1])};
}

namespace {

// min_t max_c <a_c, x_c - t> over the cut set, via the dual
//   max sum mu_c b_c   s.t.  sum mu_c = 1,  sum mu_c a_c = 0,  mu >= 0.
struct CutLp {
  bool ok = false;
  double value = 0.0;
  Vec t;
};

CutLp solve_cuts(const Mat& a, const Vec& b) {
  const Eigen::Index d = a.rows();
  const Eigen::Index C = a.cols();
  Mat A(d + 1, C);
  A.topRows(d) = a;
  A.row(d).setOnes();
  Vec rhs = Vec::Zero(d + 1);
  rhs(d) = 1.0;
  const auto sol = lp::solve_standard_form(A, rhs, -b);
  CutLp out;
  if (sol.status != lp::Status::Optimal) return out;
  out.ok = true;
  out.value = -sol.objective;
  out.t = -sol.dual.head(d);
  return out;
}

double max_gauge(const DiscreteLoop& loop, const ConvexBody& body, const VecRef& t, Eigen::Index* argmax = nullptr) {
  double best = -1.0;
  for (Eigen::Index i = 0; i < loop.size(); ++i) {
    const double g = gauge(body, loop.vertex(i) - t);
    if (g > best) {
      best = g;
      if (argmax) *argmax = i;
    }
  }
  return best;
}

}  // namespace

ContainmentResult containment_score(const DiscreteLoop& loop, const ConvexBody& body,
                                    const ContainmentOptions& options) {
  require(loop.dim() == body.dim(), ErrorCode::DimensionMismatch, "loop and body dimensions differ");
  require(loop.euclidean_diameter() >= 0.0, ErrorCode::DegenerateLoop, "degenerate loop");
  const Eigen::Index d = body.dim();
  const Eigen::Index N = loop.size();
  ContainmentResult result;

  if (auto facets = body.polar_vertex_list()) {
    const Eigen::Index F = facets->cols();
    Mat a(d, N * F);
    Vec b(N * F);
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = 0; j < F; ++j) {
        a.col(i * F + j) = facets->col(j);
        b(i * F + j) = facets->col(j).dot(loop.vertex(i));
      }
    }
    const CutLp cut = solve_cuts(a, b);
    if (!cut.ok) throw NotConverged("containment LP failed", 0.0, std::numeric_limits<double>::infinity());
    result.translation = cut.t;
    result.score = std::max(cut.value, max_gauge(loop, body, cut.t));
    result.lower_bound = cut.value;
    result.iterations = 1;
    result.method = "lp";
    return result;
  }

  // Warm start: subgradient descent on t -> max_i g(x_i - t) with restarts.
  Rng rng(options.seed);
  const double scale = std::max(loop.euclidean_diameter(), 1e-300);
  Vec best_t = loop.centroid();
  double best_f = max_gauge(loop, body, best_t);
  for (int r = 0; r < options.restarts; ++r) {
    Vec t = loop.centroid() + (r == 0 ? 0.0 : 0.25 * scale) * rng.normal_vector(d) / std::sqrt(double(d));
    for (int k = 1; k <= options.subgradient_steps; ++k) {
      Eigen::Index i = 0;
      const double f = max_gauge(loop, body, t, &i);
      if (f < best_f) {
        best_f = f;
        best_t = t;
      }
      const Vec z = loop.vertex(i) - t;
      if (z.squaredNorm() == 0.0) break;
      // moving t toward the farthest vertex decreases its gauge
      const Vec g = gauge_gradient(body, z);
      t += 0.5 * scale / std::sqrt(double(k)) * g.normalized();
    }
  }

  // Cutting planes: every a in the polar gives g_K(z) >= <a, z>, so the LP value
  // over any cut set is a certified lower bound.
  std::vector<Vec> cut_a;
  std::vector<double> cut_b;
  auto add_cut = [&](const Vec& a, Eigen::Index i) {
    cut_a.push_back(a);
    cut_b.push_back(a.dot(loop.vertex(i)));
  };
  Eigen::Index far = 0;
  max_gauge(loop, body, best_t, &far);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (double s : {1.0, -1.0}) {
      const Vec e = s * Vec::Unit(d, j);
      add_cut(e / support(body, e), far);
    }
  }
  for (Eigen::Index i = 0; i < N; ++i) {
    const Vec z = loop.vertex(i) - best_t;
    if (z.squaredNorm() > 0.0) add_cut(gauge_gradient(body, z), i);
  }

  double lower = 0.0;
  int round = 0;
  for (; round < options.max_cut_rounds; ++round) {
    Mat a(d, static_cast<Eigen::Index>(cut_a.size()));
    Vec b(static_cast<Eigen::Index>(cut_b.size()));
    for (std::size_t c = 0; c < cut_a.size(); ++c) {
      a.col(static_cast<Eigen::Index>(c)) = cut_a[c];
      b(static_cast<Eigen::Index>(c)) = cut_b[c];
    }
    const CutLp cut = solve_cuts(a, b);
    if (!cut.ok) break;
    lower = std::max(lower, cut.value);
    std::vector<std::pair<double, Eigen::Index>> values;
    for (Eigen::Index i = 0; i < N; ++i) values.emplace_back(gauge(body, loop.vertex(i) - cut.t), i);
    const double f = std::max_element(values.begin(), values.end())->first;
    if (f < best_f) {
      best_f = f;
      best_t = cut.t;
    }
    if (best_f - lower <= options.gap_tolerance) break;
    std::sort(values.begin(), values.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    const std::size_t limit = static_cast<std::size_t>(4 * (d + 1));
    for (std::size_t k = 0; k < values.size() && k < limit; ++k) {
      if (values[k].first <= cut.value) break;
      const Vec z = loop.vertex(values[k].second) - cut.t;
      if (z.squaredNorm() > 0.0) add_cut(gauge_gradient(body, z), values[k].second);
    }
  }
  result.translation = best_t;
  result.score = best_f;
  result.lower_bound = lower;
  result.iterations = round + 1;
  result.method = "cutting_plane";
  if (result.gap() > options.gap_tolerance)
    throw NotConverged("containment score did not reach the certificate gap", result.score, result.gap());
  return result;
}

void write_loop_metrics_csv(std::ostream& out, std::span<const LoopMetrics> rows) {
  out << "id,length,action,sigma\n";
  for (const auto& r : rows) {
    out << r.id << ',' << format_double(r.length) << ',' << format_double(r.action) << ','
        << format_double(r.sigma) << '\n';
  }
}

}  // namespace symcap
