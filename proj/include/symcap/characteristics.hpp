#pragma once

#include "symcap/geometry.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace symcap {

/// Sampled solution of x' = J grad g_K(x) on the boundary.
struct Trajectory {
  double step = 0.0;
  std::vector<double> times;
  Mat states;  // d x K, column k at times[k]
  /// First Poincare return time to the hyperplane through x0 normal to x'(0).
  std::optional<double> period;
  double closure_residual = 0.0;   // |x(T) - x0|
  double boundary_residual = 0.0;  // max |g_K(x(t_k)) - 1| before projection
  double diameter = 0.0;

  bool closed() const { return period.has_value(); }
};

struct FlowOptions {
  double step = 1e-3;
  bool stop_at_return = true;
};

/// Classical RK4 with radial re-projection after every step.
/// Errors NotSmoothBody, StepUnstable, InvalidArgument (x0 off the boundary).
Trajectory integrate_characteristic(const ConvexBody& body, const VecRef& x0, double t_max,
                                    const FlowOptions& options = {});

/// exp(t J M) x0 for a centred ellipsoid {x^T M x <= 1}, one column per time.
Mat exact_linear_flow(const ConvexBody& ellipsoid, const VecRef& x0, const std::vector<double>& times);

struct OrbitAction {
  double action = 0.0;
  double period = 0.0;
  /// |A - T/2|; the identity holds when this is <= 1e-3 T.
  double identity_residual = 0.0;
  bool identity_holds = false;
  /// |integral of grad g_K dt|, zero along a closed characteristic.
  double normal_sum = 0.0;
  double gauge_length = 0.0;
};

/// Polygon action of the sampled orbit; OrbitNotClosed unless closure <= 1e-4 diameter.
OrbitAction closed_orbit_action(const ConvexBody& body, const Trajectory& trajectory);

/// Columns t, x_1..x_d, gauge_residual.
void write_trajectory_csv(std::ostream& out, const ConvexBody& body, const Trajectory& trajectory);

}  // namespace symcap
