#pragma once

#include "symcap/io.hpp"
#include "symcap/loops.hpp"

#include <vector>

namespace symcap {

/// One replicated segment gamma_i of an m-fold symmetrization.
struct SegmentCandidate {
  double segment_action = 0.0;   // A_i: gamma_i closed by the chord -v_i
  double polygon_term = 0.0;     // S_i = alpha_m |v_i|^2
  Vec chord;                     // v_i = end - start
  double candidate_action = 0.0; // action of gamma_i, w gamma_i, ..., w^{m-1} gamma_i
  double identity_residual = 0.0;
};

struct SymmetrizationOutcome {
  DiscreteLoop output;
  int m = 2;
  int chosen_index = 0;
  bool reversed_input = false;
  double pre_action = 0.0;
  double post_action = 0.0;
  double pre_length = 0.0;
  double post_length = 0.0;
  /// Central case: actions of beta_1, beta_2 and |beta_1 + beta_2 - A|.
  double additivity_residual = 0.0;
  std::vector<SegmentCandidate> decomposition;
  /// max_i candidate_action - action(loop); nonnegative for every loop.
  double max_candidate_margin = 0.0;

  /// L / sqrt(A), the length after rescaling to action 1.
  double pre_normalized_length() const;
  double post_normalized_length() const;
};

/// Halves the loop at half norm-length, closes each half with the chord, and
/// doubles the half of larger action into a centrally symmetric loop.
SymmetrizationOutcome symmetrize_central(const DiscreteLoop& loop, const LoopNorm& norm,
                                         bool require_action_one = true);

/// Splits into m arcs of equal norm-length and replicates each under w = exp(2 pi i / m);
/// returns the candidate of largest action, rescaled to action 1 and centred.
SymmetrizationOutcome symmetrize_mfold(const DiscreteLoop& loop, const LoopNorm& norm, int m);

/// max_v |norm(w v) - norm(v)| / norm(v) over random directions.
double w_invariance_defect(const LoopNorm& norm, int m, int samples = 256, std::uint64_t seed = 0);

/// max_k |x_k - w x_{k + N/m}|, the m-fold symmetry residual about the origin. m = 2 is central symmetry.
double symmetry_residual(const DiscreteLoop& loop, int m);

Json to_json(const SymmetrizationOutcome& outcome);

}  // namespace symcap
