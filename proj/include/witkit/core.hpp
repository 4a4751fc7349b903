// core.hpp — Operators on a bipartite space C^{d1} ⊗ C^{d2}: validated value
// types plus tensor products, partial transpose, eigensystems and positivity.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace witkit {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Shared tolerances. Operators are kept at O(1) scale throughout; each
// constant notes whether it is absolute or scales with the operand.
inline constexpr double hermiticity_tol = 1e-12;  // relative, ingestion
inline constexpr double unit_norm_tol = 1e-12;    // absolute, vector norms
inline constexpr double trace_tol = 1e-12;        // absolute, density traces
inline constexpr double psd_rel_tol = 1e-9;       // -λ_min ≤ tol·(1 + spectral radius)
inline constexpr double sep_tol = 1e-9;           // absolute, product expectations
inline constexpr double detect_tol = 1e-9;        // absolute, detection margins
inline constexpr double zero_tol = 1e-7;          // absolute, zero-set membership
inline constexpr double rank_rel_tol = 1e-7;      // relative, numerical rank cuts

// Subsystem dimensions of C^{d1} ⊗ C^{d2}. Joint basis order is
// lexicographic with the second index fastest: |i⟩|j⟩ ↦ i·d2 + j.
struct BipartiteDims {
  int d1 = 2;
  int d2 = 2;

  BipartiteDims(int left, int right) : d1(left), d2(right) {
    if (d1 < 2 || d2 < 2)
      throw std::invalid_argument("BipartiteDims: both factors need dimension >= 2");
  }
  int total() const { return d1 * d2; }
  bool operator==(const BipartiteDims&) const = default;
};

// Hermitian matrix on the joint space. Construction symmetrizes input whose
// deviation from its adjoint stays within hermiticity_tol·(1 + max|entry|)
// and rejects anything worse, so stored entries satisfy A = A† exactly.
class HermitianOperator {
 public:
  HermitianOperator(BipartiteDims dims, Matrix entries);

  const BipartiteDims& dims() const { return dims_; }
  const Matrix& matrix() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

 private:
  BipartiteDims dims_;
  Matrix mat_;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double s, const HermitianOperator& a);

// Unit vector on the joint space; the norm must be 1 within unit_norm_tol.
// Amplitudes are stored as given (no renormalization on ingest).
class PureVector {
 public:
  PureVector(BipartiteDims dims, Vector amplitudes);

  const BipartiteDims& dims() const { return dims_; }
  const Vector& amps() const { return amps_; }

 private:
  BipartiteDims dims_;
  Vector amps_;
};

// Product vector |ψ⟩ ⊗ |φ⟩, each factor unit within unit_norm_tol.
class ProductVector {
 public:
  ProductVector(Vector left, Vector right);

  const Vector& left() const { return left_; }
  const Vector& right() const { return right_; }
  BipartiteDims dims() const;
  PureVector joint() const;  // |ψ⟩⊗|φ⟩ in the lexicographic basis

 private:
  Vector left_;
  Vector right_;
};

// Unit-trace PSD operator: trace within trace_tol of 1 and
// λ_min ≥ -psd_rel_tol·(1 + spectral radius).
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOperator op);
  static DensityMatrix from_pure(const PureVector& psi);

  const BipartiteDims& dims() const { return op_.dims(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

// Full spectral decomposition, eigenvalues ascending. Each eigenvector's
// first component above 1e-12 of its peak magnitude is made real positive,
// so identical input yields identical output.
struct EigenSystem {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // column k pairs with values[k]
};

// Kronecker product of arbitrary blocks, (i·rB + j, k·cB + l) = A(i,k)·B(j,l).
Matrix tensor_product(const Matrix& a, const Matrix& b);
Vector tensor_product(const Vector& a, const Vector& b);

// Kronecker product checked against declared subsystem shapes.
HermitianOperator tensor_product(const BipartiteDims& dims, const Matrix& a, const Matrix& b);

// Transpose of the second factor: out[(i,j),(k,l)] = A[(i,l),(k,j)].
// Involution, linear, and hs_inner(T₂A, B) = hs_inner(A, T₂B).
// Transposing the first factor instead equals full transpose composed with this.
HermitianOperator partial_transpose(const HermitianOperator& a);

// Spectral decomposition with the deterministic phase convention above.
// Throws on eigensolver non-convergence.
EigenSystem hermitian_eigensystem(const HermitianOperator& a);

double min_eigenvalue(const HermitianOperator& a);
double spectral_radius(const HermitianOperator& a);

// PSD test at an explicit tolerance: λ_min ≥ -tol.
bool is_psd(const HermitianOperator& a, double tol);

// The default PSD slack for this operand, psd_rel_tol·(1 + spectral radius).
double psd_tolerance(const HermitianOperator& a);

// Hilbert–Schmidt pairing Tr(A·B), real for Hermitian operands. The
// imaginary residue is checked against 1e-12·(1 + ‖A‖_F‖B‖_F) and dropped.
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

double frobenius_norm(const HermitianOperator& a);

// Orthogonal projector onto the span of eigenvectors with |λ| above
// rank_tol·(spectral radius). Hermitian and idempotent within 1e-10.
HermitianOperator range_projector(const HermitianOperator& a, double rank_tol = rank_rel_tol);

// Convenience constructions used across modules.
HermitianOperator identity_operator(const BipartiteDims& dims);
HermitianOperator projector(const PureVector& psi);  // |ψ⟩⟨ψ|

// ⟨ψ⊗φ| A |ψ⊗φ⟩ for a product vector, real part after residue check.
double product_expectation(const HermitianOperator& a, const ProductVector& p);

}  // namespace witkit
