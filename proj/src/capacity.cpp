#include "symcap/capacity.hpp"

#include "symcap/symplectic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <thread>

namespace symcap {

const char* to_string(CapacityMethod method) {
  switch (method) {
    case CapacityMethod::ExactVertexPair: return "ExactVertexPair";
    case CapacityMethod::ExactSpectral: return "ExactSpectral";
    case CapacityMethod::MultistartOptimize: return "MultistartOptimize";
    case CapacityMethod::ClarkeMinimize: return "ClarkeMinimize";
    case CapacityMethod::EllipsoidEigen: return "EllipsoidEigen";
  }
  return "Unknown";
}

Json to_json(const CapacityResult& r) {
  Json out;
  out["value"] = r.value;
  out["method"] = to_string(r.method);
  Json diag;
  diag["iterations"] = r.diagnostics.iterations;
  diag["restarts"] = r.diagnostics.restarts;
  diag["residual"] = r.diagnostics.residual;
  diag["lower_bound"] = r.diagnostics.lower_bound;
  diag["converged"] = r.diagnostics.converged;
  if (r.diagnostics.smoothing_p > 0) {
    diag["smoothing_p"] = r.diagnostics.smoothing_p;
    diag["smoothed_value"] = r.diagnostics.smoothed_value;
  }
  if (!r.diagnostics.restart_values.empty()) diag["restart_values"] = r.diagnostics.restart_values;
  if (!r.diagnostics.frequencies.empty()) diag["frequencies"] = r.diagnostics.frequencies;
  out["diagnostics"] = diag;
  if (r.witness_pair) out["witness_pair"] = {vector_to_json(r.witness_pair->first), vector_to_json(r.witness_pair->second)};
  if (r.witness_loop) out["witness_loop"] = loop_to_json(*r.witness_loop);
  return out;
}

namespace {

template <typename F>
auto run_indexed(int count, int threads, F&& task) {
  using R = decltype(task(0));
  std::vector<R> results(static_cast<std::size_t>(count));
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = task(i);
    return results;
  }
  std::vector<std::future<void>> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, [&] {
      for (int i = next++; i < count; i = next++) results[static_cast<std::size_t>(i)] = task(i);
    }));
  }
  for (auto& f : pool) f.get();
  return results;
}

const Ellipsoid* centred_ellipsoid(const ConvexBody& body) {
  const auto* e = std::get_if<Ellipsoid>(&body.data());
  return (e && e->center.norm() == 0.0) ? e : nullptr;
}

Mat sqrt_spd(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

// ---------------------------------------------------------------------------
// c_J

CapacityResult c_j(const ConvexBody& body, std::uint64_t seed) {
  const Eigen::Index d = body.dim();
  require(d % 2 == 0, ErrorCode::DimensionMismatch, "c_j needs an even-dimensional body");
  CapacityResult out;
  if (const auto* e = centred_ellipsoid(body)) {
    // polar = M^{1/2} B, so max omega = sigma_max(M^{1/2} J^T M^{1/2})
    const Mat root = sqrt_spd(e->shape);
    const Mat s = root * j_matrix(d / 2).transpose() * root;
    Eigen::JacobiSVD<Mat> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double sigma = svd.singularValues()(0);
    const Vec x = root * svd.matrixU().col(0);
    const Vec y = root * svd.matrixV().col(0);
    out.value = 1.0 / sigma;
    out.method = CapacityMethod::ExactSpectral;
    out.witness_pair = std::make_pair(x, y);
    out.diagnostics.residual = std::abs(omega(x, y) - sigma);
    return out;
  }
  if (auto pv = body.polar_vertex_list()) {
    const Mat omega_table = pv->transpose() * j_matrix(d / 2).transpose() * (*pv);
    Eigen::Index i = 0, j = 0;
    const double best = omega_table.maxCoeff(&i, &j);
    require(best > 0.0, ErrorCode::OriginNotInterior, "polar is degenerate");
    out.value = 1.0 / best;
    out.method = CapacityMethod::ExactVertexPair;
    out.witness_pair = std::make_pair(Vec(pv->col(i)), Vec(pv->col(j)));
    out.diagnostics.iterations = static_cast<int>(omega_table.size());
    return out;
  }
  return c_j_multistart(body, seed);
}

CapacityResult c_j_multistart(const ConvexBody& body, std::uint64_t seed, int restarts, int samples) {
  const Eigen::Index d = body.dim();
  require(d % 2 == 0, ErrorCode::DimensionMismatch, "c_j needs an even-dimensional body");
  const ConvexBody dual = polar(body);
  Rng rng(seed);

  // alternating best responses over the polar; omega(x, y) never decreases
  auto ascend = [&](Vec x, int& iters) {
    Vec y = gauge_gradient(body, apply_J(x));
    double value = omega(x, y);
    for (int k = 0; k < 1000; ++k) {
      ++iters;
      const Vec x_new = gauge_gradient(body, Vec(-apply_J(y)));
      const Vec y_new = gauge_gradient(body, apply_J(x_new));
      const double v = omega(x_new, y_new);
      if (v <= value * (1.0 + 1e-15)) {
        if (v > value) {
          x = x_new;
          y = y_new;
          value = v;
        }
        break;
      }
      x = x_new;
      y = y_new;
      value = v;
    }
    return std::make_tuple(value, x, y);
  };

  CapacityResult out;
  out.method = CapacityMethod::MultistartOptimize;
  double best = -1.0;
  Vec bx, by;
  int iters = 0;
  for (int r = 0; r < restarts; ++r) {
    const Vec x0 = boundary_point(dual, rng.direction(d));
    auto [v, x, y] = ascend(x0, iters);
    out.diagnostics.restart_values.push_back(v);
    if (v > best) {
      best = v;
      bx = x;
      by = y;
    }
  }
  // sampling certificate: each sample is a value max_y omega(x, y) = g_K(J x) that is attained
  double sampled = -1.0;
  Vec sx;
  for (int s = 0; s < samples; ++s) {
    const Vec x = boundary_point(dual, rng.direction(d));
    const double v = gauge(body, apply_J(x));
    if (v > sampled) {
      sampled = v;
      sx = x;
    }
  }
  out.diagnostics.lower_bound = sampled;
  if (sampled > best) {
    out.diagnostics.converged = false;
    auto [v, x, y] = ascend(sx, iters);
    if (v > best) {
      best = v;
      bx = x;
      by = y;
    }
  }
  out.value = 1.0 / best;
  out.witness_pair = std::make_pair(bx, by);
  out.diagnostics.iterations = iters;
  out.diagnostics.restarts = restarts;
  out.diagnostics.residual = std::abs(omega(bx, by) - best);
  return out;
}

// ---------------------------------------------------------------------------
// Clarke functional

ClarkeFunctional::ClarkeFunctional(ConvexBody body, bool mirror_sign, double smoothing_p)
    : body_(std::move(body)), sign_(mirror_sign ? 1.0 : -1.0), smoothing_p_(0.0) {
  require(body_.dim() % 2 == 0, ErrorCode::DimensionMismatch, "Clarke functional needs an even dimension");
  if (smoothing_p > 0.0 && body_.is_polytope()) {
    if (auto v = body_.vertex_list()) {
      support_vertices_ = *v;
      smoothing_p_ = smoothing_p;
    }
  }
}

double ClarkeFunctional::support_value(const VecRef& u) const {
  if (!smoothed()) return support(body_, u);
  const Vec dots = support_vertices_.transpose() * u;
  const double m = dots.maxCoeff();
  if (m <= 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < dots.size(); ++k)
    if (dots(k) > 0.0) acc += std::pow(dots(k) / m, smoothing_p_);
  return m * std::pow(acc, 1.0 / smoothing_p_);
}

Vec ClarkeFunctional::support_gradient(const VecRef& u) const {
  if (!smoothed()) return support_point(body_, u);
  const Vec dots = support_vertices_.transpose() * u;
  const double h = support_value(u);
  Vec g = Vec::Zero(u.size());
  if (h <= 0.0) return g;
  for (Eigen::Index k = 0; k < dots.size(); ++k)
    if (dots(k) > 0.0) g += std::pow(dots(k) / h, smoothing_p_ - 1.0) * support_vertices_.col(k);
  return g;
}

namespace {

// r^e for r >= 0, by squaring when e is a small integer.
Eigen::ArrayXXd power(const Eigen::ArrayXXd& r, double e) {
  const double ie = std::round(e);
  if (ie != e || ie < 1.0 || ie > 256.0) return r.pow(e);
  auto k = static_cast<unsigned>(ie);
  Eigen::ArrayXXd base = r, out = Eigen::ArrayXXd::Ones(r.rows(), r.cols());
  while (k) {
    if (k & 1u) out *= base;
    base *= base;
    k >>= 1u;
  }
  return out;
}

// Polytope-style smoothing (sum_k max(0, d_k)^p)^(1/p) over the columns of `dots`.
Vec smoothed_max(const Mat& dots, double p, Mat* coef) {
  const Eigen::Index N = dots.cols();
  const Eigen::ArrayXXd pos = dots.array().max(0.0);
  Eigen::RowVectorXd m = pos.colwise().maxCoeff();
  for (Eigen::Index i = 0; i < N; ++i)
    if (m(i) == 0.0) m(i) = 1.0;
  const Eigen::ArrayXXd r = pos.rowwise() / m.array();
  const Eigen::ArrayXXd rp = power(r, p);
  Vec h = (m.array() * rp.colwise().sum().pow(1.0 / p)).transpose();
  for (Eigen::Index i = 0; i < N; ++i)
    if (pos.col(i).maxCoeff() == 0.0) h(i) = 0.0;
  if (coef) {
    // dh/dd_k = (d_k / h)^(p - 1) = r_k^(p - 1) (m / h)^(p - 1)
    Eigen::ArrayXXd c = power(r, p - 1.0);
    for (Eigen::Index i = 0; i < N; ++i) c.col(i) *= h(i) > 0.0 ? std::pow(m(i) / h(i), p - 1.0) : 0.0;
    *coef = c.matrix();
  }
  return h;
}

}  // namespace

Vec ClarkeFunctional::support_columns(const Mat& u, Mat* grad) const {
  const Eigen::Index N = u.cols();
  if (smoothed()) {
    Mat coef;
    Vec h = smoothed_max(support_vertices_.transpose() * u, smoothing_p_, grad ? &coef : nullptr);
    if (grad) *grad = support_vertices_ * coef;
    return h;
  }
  if (const auto* e = std::get_if<Ellipsoid>(&body_.data())) {
    const Mat w = e->shape_inverse * u;
    const Eigen::ArrayXd r = (u.array() * w.array()).colwise().sum().sqrt().transpose();
    Vec h = r.matrix() + u.transpose() * e->center;
    if (grad) {
      *grad = w;
      for (Eigen::Index i = 0; i < N; ++i) {
        if (r(i) > 0.0) grad->col(i) /= r(i);
        else grad->col(i).setZero();
      }
      grad->colwise() += e->center;
    }
    return h;
  }
  if (const auto* b = std::get_if<LpBall>(&body_.data()); b && std::isfinite(b->p) && b->p > 1.0) {
    // h(u) = || w .* u ||_q with q the dual exponent
    const double q = b->p / (b->p - 1.0);
    const Mat y = b->weights.asDiagonal() * u;
    Mat coef;
    Vec h = smoothed_max(y.cwiseAbs(), q, grad ? &coef : nullptr);
    if (grad) *grad = b->weights.asDiagonal() * Mat(coef.cwiseProduct(Mat(y.array().sign().matrix())));
    return h;
  }
  Vec h(N);
  if (grad) grad->resize(u.rows(), N);
  for (Eigen::Index i = 0; i < N; ++i) {
    h(i) = support_value(u.col(i));
    if (grad) grad->col(i) = u.col(i).squaredNorm() > 0.0 ? support_gradient(u.col(i)) : Vec::Zero(u.rows());
  }
  return h;
}

namespace {

Mat forward_differences(const MatRef& x) {
  const Eigen::Index N = x.cols();
  Mat delta(x.rows(), N);
  delta.leftCols(N - 1) = x.rightCols(N - 1) - x.leftCols(N - 1);
  delta.col(N - 1) = x.col(0) - x.col(N - 1);
  return delta;
}

}  // namespace

double ClarkeFunctional::length(const MatRef& x) const {
  return support_columns(sign_ * apply_J(forward_differences(x)), nullptr).sum();
}

double ClarkeFunctional::value(const MatRef& x) const {
  const double a = std::abs(polygon_action(x));
  if (a <= 0.0) return std::numeric_limits<double>::infinity();
  const double len = length(x);
  return len * len / (4.0 * a);
}

double ClarkeFunctional::value_and_gradient(const MatRef& x, Mat& grad) const {
  const Eigen::Index N = x.cols();
  const Eigen::Index d = x.rows();
  const double a = polygon_action(x);
  grad = Mat::Zero(d, N);
  if (!(a > 0.0)) return std::numeric_limits<double>::infinity();

  Mat hg;
  const double len = support_columns(sign_ * apply_J(forward_differences(x)), &hg).sum();
  // d h(s J delta) / d delta = s J^T grad h = -s J grad h; delta_i = x_{i+1} - x_i
  const Mat w = -sign_ * apply_J(hg);
  Mat dl(d, N);
  dl.col(0) = w.col(N - 1) - w.col(0);
  dl.rightCols(N - 1) = w.leftCols(N - 1) - w.rightCols(N - 1);
  Mat diff(d, N);
  diff.col(0) = x.col(N - 1) - x.col(1);
  diff.col(N - 1) = x.col(N - 2) - x.col(0);
  if (N > 2) diff.middleCols(1, N - 2) = x.leftCols(N - 2) - x.rightCols(N - 2);
  const Mat da = 0.5 * apply_J(diff);
  grad = (len / (2.0 * a)) * dl - (len * len / (4.0 * a * a)) * da;
  return len * len / (4.0 * a);
}

double clarke_functional(const DiscreteLoop& loop, const ConvexBody& body, bool mirror_sign) {
  return ClarkeFunctional(body, mirror_sign).value(loop.vertices());
}

namespace {

struct LbfgsResult {
  Vec x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

// L-BFGS with Armijo backtracking. Stops when the relative decrease over the last
// `window` iterations drops below `rtol`.
LbfgsResult lbfgs(const std::function<double(const Vec&, Vec&)>& fg, Vec x, int max_iter, double rtol, int window) {
  constexpr int kMemory = 12;
  std::deque<Vec> s_hist, y_hist;
  std::deque<double> f_hist;
  Vec g;
  double f = fg(x, g);
  LbfgsResult out;
  int failures = 0;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    // two-loop recursion
    Vec q = g;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      const double rho = 1.0 / y_hist[k].dot(s_hist[k]);
      alpha[k] = rho * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    double gamma = 1.0;
    if (!s_hist.empty()) gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    else gamma = 1e-3 / std::max(1e-300, g.cwiseAbs().maxCoeff()) * std::max(1.0, x.cwiseAbs().maxCoeff());
    Vec dir = gamma * q;
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double rho = 1.0 / y_hist[k].dot(s_hist[k]);
      const double beta = rho * y_hist[k].dot(dir);
      dir += (alpha[k] - beta) * s_hist[k];
    }
    dir = -dir;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      dir = -g * (1e-3 / std::max(1e-300, g.cwiseAbs().maxCoeff()) * std::max(1.0, x.cwiseAbs().maxCoeff()));
      slope = g.dot(dir);
    }
    double step = 1.0;
    Vec x_new, g_new;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * dir;
      f_new = fg(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (++failures >= 2 || s_hist.empty()) {
        out.converged = true;  // no descent available at machine precision
        break;
      }
      s_hist.clear();
      y_hist.clear();
      continue;
    }
    failures = 0;
    const Vec s = x_new - x;
    const Vec y = g_new - g;
    if (s.dot(y) > 1e-16 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      if (static_cast<int>(s_hist.size()) > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    f_hist.push_back(f);
    if (static_cast<int>(f_hist.size()) > window) {
      const double old = f_hist.front();
      f_hist.pop_front();
      if ((old - f) <= rtol * std::abs(f)) {
        out.converged = true;
        break;
      }
    }
  }
  out.x = std::move(x);
  out.f = f;
  return out;
}

// Random planar ellipse with positive action; retries on near-Lagrangian planes.
Mat initial_loop(Rng& rng, Eigen::Index d, Eigen::Index N, double scale) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vec e = rng.direction(d);
    Vec f = rng.normal_vector(d);
    f -= f.dot(e) * e;
    if (f.norm() < 1e-8) continue;
    f.normalize();
    double w = omega(e, f);
    if (std::abs(w) < 0.05) continue;
    if (w < 0) f = -f;
    const double a = scale * rng.uniform(0.5, 1.5);
    const double b = scale * rng.uniform(0.5, 1.5);
    Mat x(d, N);
    for (Eigen::Index k = 0; k < N; ++k) {
      const double t = 2.0 * std::numbers::pi * double(k) / double(N);
      x.col(k) = a * std::cos(t) * e + b * std::sin(t) * f;
    }
    return x;
  }
  throw Error(ErrorCode::ZeroActionStart, "could not draw an initial loop with nonzero action");
}

}  // namespace

CapacityResult clarke_minimize(const ConvexBody& body, const OptimizerConfig& config) {
  const Eigen::Index d = body.dim();
  require(d % 2 == 0, ErrorCode::DimensionMismatch, "Clarke minimization needs an even dimension");
  require(config.points >= 8 && config.restarts >= 1, ErrorCode::InvalidArgument, "need points >= 8 and restarts >= 1");
  require(!config.symmetric || config.points % 2 == 0, ErrorCode::InvalidArgument,
          "symmetric mode needs an even number of points");
  const ClarkeFunctional smooth(body, config.mirror_sign, body.is_polytope() ? config.smoothing_p : 0.0);
  const ClarkeFunctional exact(body, config.mirror_sign, 0.0);
  const Eigen::Index N = config.points;
  const LoopNorm euclid(ConvexBody::ball(d));

  auto expand = [&](const Vec& params, Eigen::Index n) -> Mat {
    if (!config.symmetric) return Eigen::Map<const Mat>(params.data(), d, n);
    Mat x(d, n);
    x.leftCols(n / 2) = Eigen::Map<const Mat>(params.data(), d, n / 2);
    x.rightCols(n / 2) = -x.leftCols(n / 2);
    return x;
  };
  auto flatten = [&](const Mat& x) -> Vec {
    const Eigen::Index cols = config.symmetric ? x.cols() / 2 : x.cols();
    return Eigen::Map<const Vec>(x.data(), d * cols);
  };

  // coarse-to-fine: 32, 64, ... points, the last level at N
  std::vector<Eigen::Index> levels;
  for (Eigen::Index n = 32; n < N; n *= 2) levels.push_back(n);
  levels.push_back(N);

  auto run = [&](int r) {
    Rng rng(config.seed + static_cast<std::uint64_t>(r));
    Mat x = initial_loop(rng, d, levels.front(), body.euclidean_radius());
    LbfgsResult total;
    for (std::size_t level = 0; level < levels.size(); ++level) {
      const Eigen::Index n = levels[level];
      if (level > 0) {
        x = resample_by_arclength(DiscreteLoop(x), euclid, n).vertices();
        if (config.symmetric) x.rightCols(n / 2) = -x.leftCols(n / 2);
      }
      auto fg = [&](const Vec& p, Vec& gout) {
        Mat g;
        const double f = smooth.value_and_gradient(expand(p, n), g);
        if (config.symmetric) {
          const Mat gh = g.leftCols(n / 2) - g.rightCols(n / 2);
          gout = Eigen::Map<const Vec>(gh.data(), gh.size());
        } else {
          gout = Eigen::Map<const Vec>(g.data(), g.size());
        }
        return f;
      };
      LbfgsResult res = lbfgs(fg, flatten(x), config.max_iterations, config.relative_tolerance, config.window);
      x = expand(res.x, n);
      total.iterations += res.iterations;
      total.converged = res.converged;
      total.f = res.f;
      total.x = std::move(res.x);
    }
    return total;
  };

  const auto runs = run_indexed(config.restarts, config.threads, run);

  CapacityResult out;
  out.method = CapacityMethod::ClarkeMinimize;
  out.diagnostics.restarts = config.restarts;
  double best = std::numeric_limits<double>::infinity();
  Mat best_x;
  bool converged = true;
  for (const auto& res : runs) {
    Mat x = expand(res.x, N);
    const double v = exact.value(x);
    out.diagnostics.restart_values.push_back(v);
    out.diagnostics.iterations += res.iterations;
    converged = converged && res.converged;
    if (v < best) {
      best = v;
      best_x = x;
      out.diagnostics.smoothed_value = res.f;
    }
  }
  require(std::isfinite(best), ErrorCode::OptimizerDidNotConverge, "every restart collapsed to zero action");
  double a = polygon_action(best_x);
  if (a < 0) {
    best_x = best_x.rowwise().reverse().eval();
    a = -a;
  }
  Vec c = best_x.rowwise().mean();
  best_x = ((best_x.colwise() - c) / std::sqrt(a)).eval();
  out.value = exact.value(best_x);
  out.witness_loop = DiscreteLoop(best_x);
  out.diagnostics.converged = converged;
  out.diagnostics.residual = std::abs(polygon_action(best_x) - 1.0);
  if (smooth.smoothed()) out.diagnostics.smoothing_p = smooth.smoothing_p();
  else out.diagnostics.smoothed_value = out.value;
  return out;
}

DiscreteLoop characteristic_from_dual_loop(const ConvexBody& body, const DiscreteLoop& dual_loop) {
  Mat pts(body.dim(), dual_loop.size());
  for (Eigen::Index i = 0; i < dual_loop.size(); ++i) pts.col(i) = support_point(body, -apply_J(dual_loop.edge(i)));
  return DiscreteLoop(std::move(pts));
}

// ---------------------------------------------------------------------------
// ellipsoids

EllipsoidSpectrum ellipsoid_spectrum(const ConvexBody& body) {
  const auto* e = std::get_if<Ellipsoid>(&body.data());
  require(e != nullptr, ErrorCode::NonConvexParameters, "ellipsoid spectrum needs an ellipsoid");
  const Eigen::Index d = body.dim();
  require(d % 2 == 0, ErrorCode::DimensionMismatch, "ellipsoid spectrum needs an even dimension");
  const Mat jm = j_matrix(d / 2) * e->shape;
  Eigen::EigenSolver<Mat> es(jm);
  require(es.info() == Eigen::Success, ErrorCode::NonConvexParameters, "eigen-decomposition failed");
  std::vector<std::pair<double, Eigen::Index>> positive;
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto lambda = es.eigenvalues()(k);
    require(std::abs(lambda.real()) <= 1e-8 * scale, ErrorCode::NonConvexParameters,
            "J M has an eigenvalue off the imaginary axis");
    if (lambda.imag() > 0) positive.emplace_back(lambda.imag(), k);
  }
  std::sort(positive.begin(), positive.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  EllipsoidSpectrum out;
  for (const auto& [lambda, k] : positive) {
    // J M (a + i b) = i lambda (a + i b)
    const Eigen::VectorXcd v = es.eigenvectors().col(k);
    const Vec a = v.real();
    const Vec b = v.imag();
    const double na = std::max(a.norm(), b.norm());
    out.frequencies.push_back(lambda);
    out.planes.emplace_back(a / na, b / na);
  }
  return out;
}

CapacityResult ellipsoid_ehz_exact(const ConvexBody& body) {
  const EllipsoidSpectrum spec = ellipsoid_spectrum(body);
  require(!spec.frequencies.empty(), ErrorCode::NonConvexParameters, "no closed orbits found");
  CapacityResult out;
  out.method = CapacityMethod::EllipsoidEigen;
  out.value = std::numbers::pi / spec.frequencies.front();
  out.diagnostics.frequencies = spec.frequencies;
  return out;
}

}  // namespace symcap
