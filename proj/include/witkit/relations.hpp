// relations.hpp — Pairwise and n-ary relations between witnesses: detection
// set inclusion with its (a, D) certificate, proportionality, and the
// disjoint-vs-joint dichotomy over the witness simplex.

#pragma once

#include "witkit/core.hpp"
#include "witkit/witness.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace witkit {

inline constexpr double proportional_rel_tol = 1e-8;  // ‖W1 - aW2‖_F vs ‖W1‖_F

// finer(W1, W2): every state detected by W1 is detected by W2, which holds
// exactly when W1 = a·W2 + D with a > 0 and D PSD. The certificate comes
// from maximizing the concave gap g(a) = λ_min(W1 - a·W2) over a > 0.
struct FinerVerdict {
  bool finer;
  std::optional<double> a;                // maximizer, present iff finer
  std::optional<HermitianOperator> shift; // D = W1 - a·W2, PSD iff finer
  double best_gap;                        // max_a λ_min(W1 - a·W2)
  // All a with g(a) ≥ -slack, slack frozen at the maximizer. Present iff finer.
  std::optional<std::pair<double, double>> feasible_interval;
};

FinerVerdict finer(const HermitianOperator& w1, const HermitianOperator& w2,
                   const SeeSawOptions& opts = {});

// Least-squares ratio a = ⟨W1,W2⟩/⟨W2,W2⟩ when ‖W1 - aW2‖_F ≤ tol·‖W1‖_F
// and a > 0; empty otherwise. Nonempty exactly when the two witnesses have
// identical detection sets, i.e. each is finer than the other.
std::optional<double> proportional(const HermitianOperator& w1, const HermitianOperator& w2,
                                   const SeeSawOptions& opts = {});

enum class SimplexKind { psd_found, all_witnesses };

// A point of the witness simplex together with the combination it induces.
// kind == psd_found certifies the family detects no common state; a
// kind == all_witnesses certificate is only issued next to a JointDetection.
struct SimplexCertificate {
  SimplexKind kind;
  Eigen::VectorXd weights;  // on the probability simplex
  HermitianOperator combined;
  double min_eigenvalue;  // λ_min(combined)
};

// Maximize λ_min(Σ λ_i W_i) over the simplex (ternary search for pairs,
// grid plus edge refinement up to four witnesses, projected subgradient
// ascent beyond). Returns a certificate iff the maximum clears -slack.
std::optional<SimplexCertificate> psd_combination(const std::vector<HermitianOperator>& family,
                                                  const SeeSawOptions& opts = {});

// A state every family member detects, margins[i] = Tr(W_i ρ) < -detect_tol.
struct JointDetection {
  DensityMatrix state;
  std::vector<double> margins;
};

// Search for a jointly detected state: candidates from the simplex optimum's
// bottom eigenvector and each member's own, then seeded subgradient descent
// on pure states with a softmax-weighted fallback, then pair mixing. A zero
// restart budget skips the search entirely and returns empty.
std::optional<JointDetection> joint_detect(const std::vector<HermitianOperator>& family,
                                           const SeeSawOptions& opts = {});

enum class JointOutcome { psd_found, joint_detection, inconclusive };

// The two sides are exclusive: some convex combination is PSD exactly when
// no common detected state exists. When neither side certifies within its
// budget the analysis stays inconclusive rather than guessing.
struct JointAnalysis {
  JointOutcome outcome;
  std::optional<SimplexCertificate> certificate;
  std::optional<JointDetection> detection;
  double simplex_value;  // max over the simplex of λ_min(combination)
};

JointAnalysis joint_analysis(const std::vector<HermitianOperator>& family,
                             const SeeSawOptions& opts = {});

// Monte-Carlo estimate of λ = inf |Tr(W2ρ)| / |Tr(W1ρ)| over states detected
// by W1, for a pair with finer(W1, W2). Sampled ratios only shrink as the
// budget grows under the nested seed schedule. Every feasible a in the
// decomposition W1 = a·W2 + D makes 1/a a lower bound on λ (the ratio of a
// detected state is at least 1/a), so the certificate's a is reported as
// lower_bound = 1/a beside the estimate; a_max, the upper end of the
// feasible interval, gives the weakest such bound and is kept as metadata.
struct LambdaEstimate {
  double upper_estimate;  // min sampled ratio, an upper bound on λ
  double lower_bound;     // 1/a from the finer certificate
  int samples_used;
  double a_max;           // upper end of the feasible interval
};

LambdaEstimate estimate_lambda(const HermitianOperator& w1, const HermitianOperator& w2,
                               int sample_budget, const SeeSawOptions& opts = {});

}  // namespace witkit
