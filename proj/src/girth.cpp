#include "symcap/girth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

namespace symcap {

BoundaryGraph build_boundary_graph(const ConvexBody& body, int samples, int neighbours, std::uint64_t seed) {
  require(body.is_symmetric(), ErrorCode::BodyNotSymmetric, "boundary graph needs a centrally symmetric body");
  require(samples >= 4 && samples % 2 == 0, ErrorCode::InvalidArgument, "sample count must be even and >= 4");
  require(neighbours >= 1 && neighbours < samples, ErrorCode::InvalidArgument, "bad neighbour count");
  const Eigen::Index d = body.dim();
  const int half = samples / 2;
  BoundaryGraph g{body, Mat(d, samples), std::vector<int>(static_cast<std::size_t>(samples)), {}};
  Rng rng(seed);
  for (int i = 0; i < half; ++i) {
    Vec u(d);
    if (d == 2) {
      const double t = std::numbers::pi * double(i) / double(half);
      u << std::cos(t), std::sin(t);
    } else {
      u = rng.direction(d);
    }
    g.points.col(i) = boundary_point(body, u);
    g.points.col(i + half) = -g.points.col(i);
    g.antipode[static_cast<std::size_t>(i)] = i + half;
    g.antipode[static_cast<std::size_t>(i + half)] = i;
  }

  // k nearest neighbours in the Euclidean metric, symmetrized
  const Vec sq = g.points.colwise().squaredNorm().transpose();
  const Mat gram = g.points.transpose() * g.points;
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(samples));
  std::vector<std::pair<double, int>> row(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < samples; ++j) row[static_cast<std::size_t>(j)] = {sq(i) + sq(j) - 2.0 * gram(i, j), j};
    row[static_cast<std::size_t>(i)].first = std::numeric_limits<double>::infinity();
    std::partial_sort(row.begin(), row.begin() + neighbours, row.end());
    for (int k = 0; k < neighbours; ++k) {
      const int j = row[static_cast<std::size_t>(k)].second;
      nbr[static_cast<std::size_t>(i)].push_back(j);
      nbr[static_cast<std::size_t>(j)].push_back(i);
    }
  }
  g.adjacency.resize(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    auto& list = nbr[static_cast<std::size_t>(i)];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (int j : list) g.adjacency[static_cast<std::size_t>(i)].push_back({j, gauge(body, g.points.col(j) - g.points.col(i))});
  }
  return g;
}

namespace {

// Dijkstra from `from`, abandoning the search once every open label exceeds `cutoff`.
std::vector<int> dijkstra(const BoundaryGraph& graph, int from, int to, double cutoff, double& length) {
  const auto P = static_cast<std::size_t>(graph.size());
  std::vector<double> dist(P, std::numeric_limits<double>::infinity());
  std::vector<int> prev(P, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[static_cast<std::size_t>(from)] = 0.0;
  open.emplace(0.0, from);
  length = std::numeric_limits<double>::infinity();
  while (!open.empty()) {
    const auto [du, u] = open.top();
    open.pop();
    if (du > dist[static_cast<std::size_t>(u)]) continue;
    if (du > cutoff) return {};
    if (u == to) {
      length = du;
      std::vector<int> path;
      for (int v = to; v != -1; v = prev[static_cast<std::size_t>(v)]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const auto& e : graph.adjacency[static_cast<std::size_t>(u)]) {
      const double nd = du + e.weight;
      if (nd < dist[static_cast<std::size_t>(e.to)]) {
        dist[static_cast<std::size_t>(e.to)] = nd;
        prev[static_cast<std::size_t>(e.to)] = u;
        open.emplace(nd, e.to);
      }
    }
  }
  return {};
}

Mat doubled(const Mat& half) {
  Mat x(half.rows(), 2 * half.cols());
  x << half, -half;
  return x;
}

Mat project_columns(const ConvexBody& body, Mat y) {
  for (Eigen::Index i = 0; i < y.cols(); ++i) y.col(i) /= gauge(body, y.col(i));
  return y;
}

double half_length(const ConvexBody& body, const Mat& y) { return gauge_length(DiscreteLoop(doubled(y)), body); }

// Equal gauge-arclength half with H vertices, projected back to the boundary.
Mat respace(const ConvexBody& body, const Mat& y, Eigen::Index H) {
  const DiscreteLoop full = resample_by_gauge_arclength(DiscreteLoop(doubled(y)), body, 2 * H);
  return project_columns(body, full.vertices().leftCols(H));
}

// Gradient of the doubled-loop length with respect to the half vertices.
Mat half_gradient(const ConvexBody& body, const Mat& y) {
  const Eigen::Index H = y.cols();
  Mat g = Mat::Zero(y.rows(), H);
  for (Eigen::Index i = 0; i + 1 < H; ++i) {
    const Vec n = gauge_gradient(body, y.col(i + 1) - y.col(i));
    g.col(i + 1) += n;
    g.col(i) -= n;
  }
  const Vec n = gauge_gradient(body, -y.col(0) - y.col(H - 1));
  g.col(0) -= n;
  g.col(H - 1) -= n;
  return 2.0 * g;
}

struct Refined {
  Mat half;
  double length;
  std::vector<std::vector<double>> history;
};

Refined refine(const ConvexBody& body, Mat y, const GirthOptions& opt) {
  Refined r;
  for (int H : opt.levels) {
    if (H < 2) continue;
    y = respace(body, y, H);
    double len = half_length(body, y);
    std::vector<double>& level = r.history.emplace_back(1, len);
    double step = 0.1 * len / double(H);
    for (int it = 0; it < opt.steps_per_level; ++it) {
      const Mat g = half_gradient(body, y);
      const double gmax = g.colwise().norm().maxCoeff();
      if (!(gmax > 0.0)) break;
      bool accepted = false;
      for (int ls = 0; ls < 30; ++ls) {
        const Mat trial = respace(body, project_columns(body, y - (step / gmax) * g), H);
        const double tl = half_length(body, trial);
        if (tl < len * (1.0 - 1e-13)) {
          y = trial;
          len = tl;
          accepted = true;
          step *= 2.0;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      level.push_back(len);
    }
  }
  r.half = std::move(y);
  r.length = half_length(body, r.half);
  return r;
}

}  // namespace

std::vector<int> shortest_path(const BoundaryGraph& graph, int from, int to, double* length) {
  double len = 0.0;
  auto path = dijkstra(graph, from, to, std::numeric_limits<double>::infinity(), len);
  if (length) *length = len;
  return path;
}

double schaffer_bound(Eigen::Index d) {
  require(d >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  if (d % 2 == 0) return 4.0 + 4.0 / double(d);
  return d == 1 ? 4.0 : 4.0 + 4.0 / double(d - 1);
}

DiscreteLoop boundary_loop(const ConvexBody& body, const DiscreteLoop& curve, int subdivisions) {
  require(subdivisions >= 1, ErrorCode::InvalidArgument, "subdivisions must be >= 1");
  const Eigen::Index N = curve.size();
  const auto s = static_cast<Eigen::Index>(subdivisions);
  Mat dense(curve.dim(), N * s);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index k = 0; k < s; ++k) {
      const double t = double(k) / double(s);
      dense.col(i * s + k) = (1.0 - t) * curve.vertex(i) + t * curve.vertex(i + 1);
    }
  const bool symmetric = body.is_symmetric() && N % 2 == 0 &&
                         (curve.vertices().leftCols(N / 2) + curve.vertices().rightCols(N / 2)).cwiseAbs().maxCoeff() == 0.0;
  if (symmetric) return DiscreteLoop(doubled(project_columns(body, dense.leftCols(N * s / 2))));
  return DiscreteLoop(project_columns(body, std::move(dense)));
}

GirthResult symmetric_girth(const ConvexBody& body, const GirthOptions& opt) {
  const BoundaryGraph graph = build_boundary_graph(body, opt.samples, opt.neighbours, opt.seed);
  const int half = graph.size() / 2;
  const auto keep = static_cast<std::size_t>(std::max(1, opt.candidates));

  // best antipodal paths, ordered by (length, source)
  std::vector<std::tuple<double, int, std::vector<int>>> best;
  GirthResult out;
  for (int i = 0; i < half; ++i) {
    const double cutoff = best.size() < keep ? std::numeric_limits<double>::infinity() : std::get<0>(best.back());
    double len = 0.0;
    auto path = dijkstra(graph, i, graph.antipode[static_cast<std::size_t>(i)], cutoff, len);
    ++out.sources_searched;
    if (path.size() < 3 || len > cutoff) continue;
    best.emplace_back(len, i, std::move(path));
    std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    if (best.size() > keep) best.pop_back();
  }
  require(!best.empty(), ErrorCode::GraphDisconnected, "no antipodal path in the boundary graph; increase k");
  out.graph_length = 2.0 * std::get<0>(best.front());

  double best_len = std::numeric_limits<double>::infinity();
  for (const auto& [len, src, path] : best) {
    Mat y(body.dim(), static_cast<Eigen::Index>(path.size()) - 1);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) y.col(static_cast<Eigen::Index>(k)) = graph.points.col(path[k]);
    Refined r = refine(body, std::move(y), opt);
    const DiscreteLoop loop = boundary_loop(body, DiscreteLoop(doubled(r.half)), opt.subdivisions);
    const double l = gauge_length(loop, body);
    if (l < best_len) {
      best_len = l;
      out.loop = loop;
      out.history = std::move(r.history);
    }
  }
  out.length = best_len;
  out.bound = schaffer_bound(body.dim());
  out.margin = out.length - out.bound;
  return out;
}

SchafferReport check_schaffer_bound(const ConvexBody& body, const DiscreteLoop& loop) {
  require(body.dim() == loop.dim(), ErrorCode::DimensionMismatch, "loop and body dimensions differ");
  SchafferReport r;
  const Eigen::Index N = loop.size();
  require(N % 2 == 0, ErrorCode::LoopNotSymmetric, "a centrally symmetric loop has an even vertex count");
  r.symmetry_defect = (loop.vertices().leftCols(N / 2) + loop.vertices().rightCols(N / 2)).colwise().norm().maxCoeff();
  require(r.symmetry_defect <= 1e-6 * loop.euclidean_diameter(), ErrorCode::LoopNotSymmetric,
          "loop is not centrally symmetric");
  for (Eigen::Index i = 0; i < N; ++i) r.boundary_residual = std::max(r.boundary_residual, std::abs(gauge(body, loop.vertex(i)) - 1.0));
  require(r.boundary_residual <= 1e-3, ErrorCode::LoopNotOnBoundary, "loop does not lie on the boundary");
  r.length = gauge_length(loop, body);
  r.bound = schaffer_bound(body.dim());
  r.margin = r.length - r.bound;
  r.violation = r.margin < -1e-2;
  return r;
}

namespace {
std::size_t refinement_steps(const GirthResult& g) {
  std::size_t steps = 0;
  for (const auto& level : g.history) steps += level.size() - 1;
  return steps;
}
}  // namespace

Json to_json(const GirthResult& g) {
  return {{"length", g.length},
          {"graph_length", g.graph_length},
          {"bound", g.bound},
          {"margin", g.margin},
          {"sources_searched", g.sources_searched},
          {"refinement_steps", refinement_steps(g)},
          {"loop", loop_to_json(g.loop)}};
}

Json to_json(const SchafferReport& r) {
  return {{"length", r.length},
          {"bound", r.bound},
          {"margin", r.margin},
          {"violation", r.violation},
          {"symmetry_defect", r.symmetry_defect},
          {"boundary_residual", r.boundary_residual}};
}

}  // namespace symcap
