// optimality.hpp — Diagnostics for witness optimality: the zero set of
// product vectors, its span certificate, constructive subtraction
// refutations, and the structural checks for the decomposable form.

#pragma once

#include "witkit/core.hpp"
#include "witkit/witness.hpp"

#include <string>
#include <vector>

namespace witkit {

// Sampled product vectors with ⟨ψφ|W|ψφ⟩ ≈ 0, deduplicated by joint overlap.
// span_rank is the numerical rank of the stacked joint vectors.
struct ProductVectorSet {
  std::vector<ProductVector> vectors;
  int span_rank = 0;
};

// Run `count` single-restart see-saw minimizations from distinct seeds and
// keep minimizers with |value| ≤ zero_tol. A product minimum below -sep_tol
// throws (the operator is not block positive, so the zero set is not the
// boundary set this samples); a minimum above zero_tol short-circuits to the
// empty set, since every product expectation then sits strictly above zero.
ProductVectorSet zero_set_sample(const HermitianOperator& w, int count,
                                 const SeeSawOptions& opts = {});

// True iff the sampled zero set spans the whole joint space (rank d1·d2).
// True certifies optimality; false decides nothing — the span condition is
// sufficient only, and a sample may also simply miss directions.
bool spans_test(const HermitianOperator& w, const SeeSawOptions& opts = {});

// True iff some sampled zero-set member v has ⟨v|D|v⟩ > zero_tol. Then no
// positive multiple of D can be subtracted from W without losing block
// positivity at v. An empty sample is vacuous and yields false.
bool pw_obstruction(const ProductVectorSet& set, const HermitianOperator& d);
bool pw_obstruction(const HermitianOperator& w, const HermitianOperator& d,
                    const SeeSawOptions& opts = {});

// A constructive non-optimality certificate: W − amount·subtracted still
// certifies as a witness, with `subtracted` PSD and nonzero.
struct SubtractionRefutation {
  HermitianOperator subtracted;
  double amount;
};

// Identity, eigenprojectors of W with positive eigenvalue, and up to eight
// seeded product projectors whose joint vectors sit clear of the sampled
// zero-set span (residual from that span above 1e-3).
std::vector<HermitianOperator> default_subtraction_dictionary(const HermitianOperator& w,
                                                              const ProductVectorSet& zero_set,
                                                              const SeeSawOptions& opts = {});

// For each unobstructed dictionary entry D, find the largest a with
// W − a·D still a certified witness: the feasible a form an interval down
// from 0, so a top-down log grid followed by bisection keeps the feasible
// side. Amounts within certification slack of zero are discarded rather than
// reported. Nonempty output refutes optimality constructively; empty output
// is inconclusive. Throws on a non-PSD or zero dictionary entry.
std::vector<SubtractionRefutation> subtraction_refute(
    const HermitianOperator& w, const std::vector<HermitianOperator>& dictionary,
    const SeeSawOptions& opts = {});

enum class StructureVerdict { consistent_with_optimal, refuted, inconclusive };

// Structural consequences of the optimal-decomposable form W = Q^{T₂}, Q ⪰ 0:
// the range of Q carries no product vector, and no unit-trace PSD operator
// supported in that range has a PSD partial transpose. `refuted` means one of
// the consequences failed; `inconclusive` covers Q not PSD (the checks do not
// apply) and exhausted search budgets.
struct StructureReport {
  StructureVerdict verdict;
  bool q_psd = false;
  double range_overlap = 0.0;  // best ⟨ψφ|P_R|ψφ⟩ found by see-saw
  double residual = 0.0;       // final feasibility residual of the range-supported search
  std::string details;
};

StructureReport decomposable_structure(const HermitianOperator& w,
                                       const SeeSawOptions& opts = {});

// The full diagnostic bundle: one shared zero-set sample feeds the span test,
// the obstruction pruning and the default dictionary.
struct OptimalityReport {
  ProductVectorSet zero_set;
  bool spans = false;
  std::vector<SubtractionRefutation> refutations;
  StructureReport structure;
  std::string details;
};

OptimalityReport optimality_report(const HermitianOperator& w, const SeeSawOptions& opts = {});

}  // namespace witkit
