// witness.hpp — Witness certification and detection: see-saw extremization
// over product states, tri-state certificates, detection margins, and the
// partial-transpose construction from an NPT state.

#pragma once

#include "witkit/core.hpp"
#include "witkit/zoo.hpp"

#include <vector>

namespace witkit {

enum class SeeSawMode { minimize, maximize };

struct SeeSawOptions {
  int restarts = 50;
  int max_sweeps = 200;
  double value_tol = 1e-12;  // stop when the sweep improvement drops below this
  zoo::Seed seed = 1;
  bool record_trace = false;  // keep per-half-sweep objective values of the best restart
};

struct SeeSawResult {
  double value;
  ProductVector argument;
  int sweeps;                 // sweeps used by the winning restart
  std::vector<double> trace;  // objective after each half-sweep, if recorded
};

// Extremize ⟨ψ⊗φ|W|ψ⊗φ⟩ by alternating exact single-factor eigenvector
// updates from seeded random starts. Each half-sweep is an exact
// minimization (maximization) over one factor, so the objective is monotone;
// the returned value upper-bounds the true minimum (lower-bounds the true
// maximum). Ties across restarts go to the lowest restart index.
SeeSawResult min_product_expectation(const HermitianOperator& w,
                                     const SeeSawOptions& opts = {},
                                     SeeSawMode mode = SeeSawMode::minimize);

// The same alternating descent started from a given product pair instead of
// random seeds. Runs until the value repeats exactly, the improvement drops
// below value_tol, or max_sweeps is hit; restarts and seed are ignored.
// Useful for polishing a near-minimizer or probing a known-suspect region.
SeeSawResult refine_product_min(const HermitianOperator& w, const ProductVector& start,
                                const SeeSawOptions& opts = {});

enum class WitnessVerdict { witness, psd_not_witness, violates_separable_positivity };

// verdict == witness  ⇔  min_product ≥ -sep_tol and λ_min < -sep_tol.
// A certified witness always has max_product > 0: block-positive operators
// with a negative eigenvalue have strictly positive separable expectations.
struct WitnessCertificate {
  WitnessVerdict verdict;
  double min_product;
  ProductVector min_product_arg;
  double max_product;
  ProductVector max_product_arg;
  double min_eigenvalue;
  PureVector min_eigenvector;
  SeeSawOptions budget;  // the search budget the certificate was issued under
};

WitnessCertificate certify_witness(const HermitianOperator& w, const SeeSawOptions& opts = {});

// margin = Tr(Wρ); detected ⇔ margin < -detect_tol. Linear in ρ.
struct DetectionReport {
  double margin;
  bool detected;
};

DetectionReport detects(const HermitianOperator& w, const DensityMatrix& rho);

// T₂(ρ) PSD within its relative tolerance.
bool is_ppt(const DensityMatrix& rho);

// T₂(|ψ⟩⟨ψ|) for ψ the most negative eigenvector of T₂(ρ). Detects ρ with
// margin equal to that eigenvalue. Throws if ρ is PPT: no witness of this
// form exists then, and the construction is silent about such states.
HermitianOperator construct_witness(const DensityMatrix& rho);

// (ρ + ϱ)/Tr(ρ + ϱ) for detected ρ and PSD ϱ with |Tr(Wϱ)| ≤ detect_tol:
// the mixture stays in the detected set up to tolerance slack.
DensityMatrix mix_preserving_detection(const HermitianOperator& w, const DensityMatrix& rho,
                                       const HermitianOperator& noise);

}  // namespace witkit
