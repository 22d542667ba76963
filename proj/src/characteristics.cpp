#include "symcap/characteristics.hpp"

#include "symcap/io.hpp"
#include "symcap/loops.hpp"
#include "symcap/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <ostream>

namespace symcap {

namespace {

Vec field(const ConvexBody& body, const Vec& x) { return apply_J(gauge_gradient(body, x)); }

// Cubic Hermite interpolant on one step, theta in [0, 1].
Vec hermite(const Vec& x0, const Vec& f0, const Vec& x1, const Vec& f1, double h, double t) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * x0 + (t3 - 2 * t2 + t) * h * f0 + (-2 * t3 + 3 * t2) * x1 + (t3 - t2) * h * f1;
}

}  // namespace

Trajectory integrate_characteristic(const ConvexBody& body, const VecRef& x0_in, double t_max,
                                    const FlowOptions& options) {
  require(body.is_smooth(), ErrorCode::NotSmoothBody, "characteristic flow needs a smooth body");
  require(options.step > 0.0 && t_max > 0.0, ErrorCode::InvalidArgument, "step and t_max must be positive");
  const Vec x0 = x0_in;
  require(x0.size() == body.dim(), ErrorCode::DimensionMismatch, "start point has the wrong dimension");
  require(std::abs(gauge(body, x0) - 1.0) <= 1e-9, ErrorCode::InvalidArgument, "start point is not on the boundary");

  const double h = options.step;
  Trajectory tr;
  tr.step = h;
  tr.diameter = 2.0 * body.euclidean_radius();
  const Vec normal = field(body, x0);
  auto section = [&](const Vec& x) { return normal.dot(x - x0); };

  std::vector<Vec> states{x0};
  tr.times.push_back(0.0);
  Vec x = x0, f = normal;
  double s = 0.0;
  bool armed = false;
  const auto max_steps = static_cast<long>(std::ceil(t_max / h));
  for (long k = 0; k < max_steps; ++k) {
    const Vec k1 = f;
    const Vec k2 = field(body, x + 0.5 * h * k1);
    const Vec k3 = field(body, x + 0.5 * h * k2);
    const Vec k4 = field(body, x + h * k3);
    Vec xn = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double g = gauge(body, xn);
    require(std::isfinite(g) && std::abs(g - 1.0) <= 0.1, ErrorCode::StepUnstable,
            "integration step left the boundary; reduce the step");
    tr.boundary_residual = std::max(tr.boundary_residual, std::abs(g - 1.0));
    xn /= g;
    const Vec fn = field(body, xn);
    const double sn = section(xn);
    const double t = double(k + 1) * h;

    if (armed && s < 0.0 && sn >= 0.0 && (xn - x0).norm() < 0.25 * tr.diameter) {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (section(hermite(x, f, xn, fn, h, mid)) < 0.0 ? lo : hi) = mid;
      }
      const double theta = 0.5 * (lo + hi);
      Vec xr = hermite(x, f, xn, fn, h, theta);
      xr /= gauge(body, xr);
      tr.period = t - h + theta * h;
      tr.closure_residual = (xr - x0).norm();
      if (options.stop_at_return) {
        states.push_back(xr);
        tr.times.push_back(*tr.period);
        break;
      }
    }
    if (sn < 0.0) armed = true;
    states.push_back(xn);
    tr.times.push_back(t);
    x = std::move(xn);
    f = fn;
    s = sn;
  }
  tr.states.resize(body.dim(), static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) tr.states.col(static_cast<Eigen::Index>(k)) = states[k];
  return tr;
}

Mat exact_linear_flow(const ConvexBody& body, const VecRef& x0, const std::vector<double>& times) {
  const auto* e = std::get_if<Ellipsoid>(&body.data());
  require(e != nullptr && e->center.norm() == 0.0, ErrorCode::InvalidArgument, "exact flow needs a centred ellipsoid");
  const Mat jm = j_matrix(body.dim() / 2) * e->shape;
  Mat out(body.dim(), static_cast<Eigen::Index>(times.size()));
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Mat a = times[k] * jm;
    out.col(static_cast<Eigen::Index>(k)) = a.exp() * x0;
  }
  return out;
}

OrbitAction closed_orbit_action(const ConvexBody& body, const Trajectory& tr) {
  require(tr.closed() && tr.closure_residual <= 1e-4 * tr.diameter, ErrorCode::OrbitNotClosed,
          "trajectory did not close up");
  // the last state is the return point and duplicates the first
  const Mat orbit = tr.states.leftCols(tr.states.cols() - 1);
  OrbitAction out;
  out.period = *tr.period;
  out.action = polygon_action(orbit);
  out.identity_residual = std::abs(out.action - 0.5 * out.period);
  out.identity_holds = out.identity_residual <= 1e-3 * out.period;
  Vec normals = Vec::Zero(body.dim());
  for (Eigen::Index k = 0; k + 1 < tr.states.cols(); ++k) {
    const double dt = tr.times[static_cast<std::size_t>(k) + 1] - tr.times[static_cast<std::size_t>(k)];
    normals += 0.5 * dt * (gauge_gradient(body, tr.states.col(k)) + gauge_gradient(body, tr.states.col(k + 1)));
  }
  out.normal_sum = normals.norm();
  out.gauge_length = gauge_length(DiscreteLoop(orbit), body);
  return out;
}

void write_trajectory_csv(std::ostream& out, const ConvexBody& body, const Trajectory& tr) {
  out << "t";
  for (Eigen::Index i = 0; i < tr.states.rows(); ++i) out << ",x" << i + 1;
  out << ",gauge_residual\n";
  for (Eigen::Index k = 0; k < tr.states.cols(); ++k) {
    out << format_double(tr.times[static_cast<std::size_t>(k)]);
    for (Eigen::Index i = 0; i < tr.states.rows(); ++i) out << ',' << format_double(tr.states(i, k));
    out << ',' << format_double(gauge(body, tr.states.col(k)) - 1.0) << '\n';
  }
}

}  // namespace symcap
