#pragma once

#include "symcap/geometry.hpp"
#include "symcap/io.hpp"
#include "symcap/loops.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace symcap {

enum class CapacityMethod { ExactVertexPair, ExactSpectral, MultistartOptimize, ClarkeMinimize, EllipsoidEigen };

const char* to_string(CapacityMethod method);

struct CapacityDiagnostics {
  int iterations = 0;
  int restarts = 0;
  double residual = 0.0;
  /// c_j general path: best sampled value of max omega (a certified lower bound on it).
  double lower_bound = 0.0;
  bool converged = true;
  /// Clarke on polytopes: exponent of the smoothed support function (0 = exact).
  double smoothing_p = 0.0;
  double smoothed_value = 0.0;
  std::vector<double> restart_values;
  std::vector<double> frequencies;
};

struct CapacityResult {
  double value = 0.0;
  CapacityMethod method = CapacityMethod::ClarkeMinimize;
  std::optional<std::pair<Vec, Vec>> witness_pair;
  std::optional<DiscreteLoop> witness_loop;
  CapacityDiagnostics diagnostics;
};

Json to_json(const CapacityResult& result);

/// Lower-bound constants of the capacity estimates, c_EHZ >= bound * c_J.
inline double general_ratio_bound(Eigen::Index n) { return 1.0 + 1.0 / (2.0 * double(n)); }
inline double symmetric_ratio_bound(Eigen::Index n) { return 2.0 + 1.0 / double(n); }

// --- c_J ------------------------------------------------------------------

/// c_J(K) = 1 / max{ omega(x, y) : x, y in K polar }.
/// Exact for centred ellipsoids (spectral) and polytopes (vertex pairs of the polar),
/// multistart ascent otherwise.
CapacityResult c_j(const ConvexBody& body, std::uint64_t seed = 0);

/// The general path, usable on any body: alternating best responses
/// y <- argmax <Jx, y>, x <- argmax <x, -Jy> over the polar, from random starts,
/// plus a random-sampling certificate.
CapacityResult c_j_multistart(const ConvexBody& body, std::uint64_t seed = 0, int restarts = 64,
                              int samples = 4000);

// --- Clarke dual problem ----------------------------------------------------

struct OptimizerConfig {
  std::uint64_t seed = 0;
  int restarts = 8;
  int points = 256;
  /// Per coarse-to-fine level.
  int max_iterations = 3000;
  double relative_tolerance = 1e-10;
  int window = 50;
  /// Optimize over centrally symmetric loops only (x_{i+N/2} = -x_i).
  bool symmetric = false;
  /// Use h_K(J v) instead of h_K(-J v) as the loop norm.
  bool mirror_sign = false;
  /// Support-function smoothing exponent for polytopes.
  double smoothing_p = 40.0;
  /// 0 picks std::thread::hardware_concurrency().
  int threads = 0;
};

/// c(gamma) = L(gamma)^2 / (4 |A(gamma)|),  L = sum_i h(-J (x_{i+1} - x_i)).
/// For polytopes the support function may be replaced by a p-norm smoothing.
class ClarkeFunctional {
 public:
  ClarkeFunctional(ConvexBody body, bool mirror_sign = false, double smoothing_p = 0.0);

  double length(const MatRef& vertices) const;
  double value(const MatRef& vertices) const;
  /// Value and gradient with respect to every vertex coordinate; +inf when A <= 0.
  double value_and_gradient(const MatRef& vertices, Mat& gradient) const;

  double support_value(const VecRef& u) const;
  Vec support_gradient(const VecRef& u) const;
  bool smoothed() const { return smoothing_p_ > 0.0; }
  double smoothing_p() const { return smoothing_p_; }
  const ConvexBody& body() const { return body_; }

 private:
  /// h and (optionally) grad h for every column of u.
  Vec support_columns(const Mat& u, Mat* gradients) const;

  ConvexBody body_;
  double sign_;
  double smoothing_p_;
  Mat support_vertices_;
};

/// Rescale-invariant evaluation on a loop (uses |A|).
double clarke_functional(const DiscreteLoop& loop, const ConvexBody& body, bool mirror_sign = false);

/// Minimizes the Clarke functional over discrete loops with multistart L-BFGS.
/// The witness loop is positively oriented, centred, and normalized to action 1.
CapacityResult clarke_minimize(const ConvexBody& body, const OptimizerConfig& config = {});

/// Support points of K along the dual loop: the discrete closed characteristic
/// x_i maximizing <-J(z_{i+1} - z_i), x> over K.
DiscreteLoop characteristic_from_dual_loop(const ConvexBody& body, const DiscreteLoop& dual_loop);

// --- ellipsoids ---------------------------------------------------------------

struct EllipsoidSpectrum {
  /// +lambda for each eigenvalue pair +-i lambda of J M, in decreasing order.
  std::vector<double> frequencies;
  /// Real invariant plane (a, b) of each frequency: J M a = -lambda b, J M b = lambda a.
  std::vector<std::pair<Vec, Vec>> planes;
};
EllipsoidSpectrum ellipsoid_spectrum(const ConvexBody& ellipsoid);

/// Minimal action pi / lambda_max of the closed orbits of x' = J M x.
CapacityResult ellipsoid_ehz_exact(const ConvexBody& ellipsoid);

}  // namespace symcap
