#include "symcap/symmetry.hpp"

#include <cmath>
#include <limits>

namespace symcap {

namespace {

// Action of an open polyline closed by its chord.
double closed_action(const Mat& pts) {
  if (pts.cols() < 3) return 0.0;
  return polygon_action(pts);
}

// Drops the last column of an arc whose last point starts the next block.
Mat without_last(const Mat& arc) { return arc.leftCols(arc.cols() - 1); }

DiscreteLoop oriented(const DiscreteLoop& loop, double& a, bool& reversed) {
  a = action(loop);
  require(std::abs(a) > 0.0, ErrorCode::ZeroAction, "loop has zero action");
  reversed = a < 0.0;
  if (reversed) {
    a = -a;
    return loop.reversed();
  }
  return loop;
}

}  // namespace

double SymmetrizationOutcome::pre_normalized_length() const { return pre_length / std::sqrt(std::abs(pre_action)); }
double SymmetrizationOutcome::post_normalized_length() const { return post_length / std::sqrt(std::abs(post_action)); }

SymmetrizationOutcome symmetrize_central(const DiscreteLoop& input, const LoopNorm& norm, bool require_action_one) {
  require(input.dim() == norm.body().dim(), ErrorCode::DimensionMismatch, "loop and body dimensions differ");
  SymmetrizationOutcome out;
  out.m = 2;
  double a = 0.0;
  const DiscreteLoop loop = oriented(input.normalized(), a, out.reversed_input);
  out.pre_action = a;
  out.pre_length = loop_length(loop, norm);
  require(out.pre_length > 0.0, ErrorCode::DegenerateLoop, "loop has zero length");

  auto [g1, g2] = split_at_half_length(loop, norm);
  const Vec mid = 0.5 * (g1.col(0) + g1.col(g1.cols() - 1));
  g1.colwise() -= mid;
  g2.colwise() -= mid;
  const double b1 = closed_action(g1);
  const double b2 = closed_action(g2);
  out.additivity_residual = std::abs(b1 + b2 - a);
  out.chosen_index = b1 >= b2 ? 0 : 1;
  const Mat& chosen = out.chosen_index == 0 ? g1 : g2;
  // b1 + b2 = a, so the larger half has action >= a / 2
  const Mat half = without_last(chosen);
  Mat doubled(loop.dim(), 2 * half.cols());
  doubled << half, -half;
  for (const auto& [arc, beta] : {std::pair{&g1, b1}, std::pair{&g2, b2}}) {
    SegmentCandidate c;
    c.segment_action = beta;
    c.chord = arc->col(arc->cols() - 1) - arc->col(0);
    c.candidate_action = 2.0 * beta;
    out.decomposition.push_back(std::move(c));
  }

  DiscreteLoop result(std::move(doubled));
  double post_a = action(result);
  require(post_a > 0.0, ErrorCode::ZeroAction, "symmetrized loop has zero action");
  out.decomposition[static_cast<std::size_t>(out.chosen_index)].identity_residual = std::abs(post_a - 2.0 * std::max(b1, b2));
  out.max_candidate_margin = post_a - a;
  if (require_action_one) {
    result = result.scaled(1.0 / std::sqrt(post_a));
    post_a = action(result);
  }
  out.post_action = post_a;
  out.post_length = loop_length(result, norm);
  out.output = std::move(result);
  return out;
}

double w_invariance_defect(const LoopNorm& norm, int m, int samples, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Index d = norm.body().dim();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec v = rng.direction(d);
    const double base = norm(v);
    for (int k = 1; k < m; ++k) worst = std::max(worst, std::abs(norm(root_multiply(m, k, v)) - base) / base);
  }
  return worst;
}

double symmetry_residual(const DiscreteLoop& loop, int m) {
  const Eigen::Index N = loop.size();
  if (N % m != 0) return std::numeric_limits<double>::infinity();
  const Eigen::Index block = N / m;
  const Mat w = root_multiply(m, 1, loop.vertices());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < N; ++k) worst = std::max(worst, (loop.vertex(k + block) - w.col(k)).norm());
  return worst;
}

SymmetrizationOutcome symmetrize_mfold(const DiscreteLoop& input, const LoopNorm& norm, int m) {
  require(m >= 2, ErrorCode::InvalidArgument, "m must be at least 2");
  require(input.dim() == norm.body().dim(), ErrorCode::DimensionMismatch, "loop and body dimensions differ");
  require(w_invariance_defect(norm, m) <= 1e-6, ErrorCode::BodyNotSymmetricUnderW,
          "norm is not invariant under multiplication by w");
  SymmetrizationOutcome out;
  out.m = m;
  double a = 0.0;
  const DiscreteLoop loop = oriented(input.normalized(), a, out.reversed_input);
  out.pre_action = a;
  out.pre_length = loop_length(loop, norm);
  require(out.pre_length > 0.0, ErrorCode::DegenerateLoop, "loop has zero length");

  const auto arcs = split_equal_length(loop, norm, m);
  const double alpha = regular_polygon_alpha(m);
  double best = -std::numeric_limits<double>::infinity();
  Mat best_loop;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Mat& arc = arcs[i];
    SegmentCandidate c;
    c.chord = arc.col(arc.cols() - 1) - arc.col(0);
    c.segment_action = closed_action(arc);
    c.polygon_term = alpha * c.chord.squaredNorm();

    const Mat base = without_last(arc).colwise() - arc.col(0);
    const Eigen::Index K = base.cols();
    Mat verts(loop.dim(), m * K);
    Vec start = Vec::Zero(loop.dim());
    for (int k = 0; k < m; ++k) {
      verts.middleCols(k * K, K) = root_multiply(m, k, base).colwise() + start;
      start += root_multiply(m, k, c.chord);
    }
    const Vec centre = verts.rowwise().mean();
    verts.colwise() -= centre;
    c.candidate_action = verts.cols() >= 3 ? polygon_action(verts) : 0.0;
    c.identity_residual = std::abs(c.candidate_action - (m * c.segment_action + c.polygon_term));
    if (c.candidate_action > best) {
      best = c.candidate_action;
      best_loop = std::move(verts);
      out.chosen_index = static_cast<int>(i);
    }
    out.decomposition.push_back(std::move(c));
  }
  out.max_candidate_margin = best - a;
  require(best > 0.0, ErrorCode::ZeroAction, "every candidate has zero action");
  DiscreteLoop result = DiscreteLoop(std::move(best_loop)).scaled(1.0 / std::sqrt(best));
  out.post_action = action(result);
  out.post_length = loop_length(result, norm);
  out.output = std::move(result);
  return out;
}

Json to_json(const SymmetrizationOutcome& o) {
  Json out;
  out["m"] = o.m;
  out["chosen_index"] = o.chosen_index;
  out["reversed_input"] = o.reversed_input;
  out["pre_action"] = o.pre_action;
  out["post_action"] = o.post_action;
  out["pre_length"] = o.pre_length;
  out["post_length"] = o.post_length;
  out["pre_normalized_length"] = o.pre_normalized_length();
  out["post_normalized_length"] = o.post_normalized_length();
  out["max_candidate_margin"] = o.max_candidate_margin;
  if (o.m == 2) out["additivity_residual"] = o.additivity_residual;
  Json table = Json::array();
  for (const auto& c : o.decomposition) {
    table.push_back({{"segment_action", c.segment_action},
                     {"polygon_term", c.polygon_term},
                     {"chord", vector_to_json(c.chord)},
                     {"candidate_action", c.candidate_action},
                     {"identity_residual", c.identity_residual}});
  }
  out["decomposition"] = table;
  out["output"] = loop_to_json(o.output);
  return out;
}

}  // namespace symcap
