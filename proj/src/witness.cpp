// witness.cpp — See-saw product extremization and the certification layer.

#include "witkit/witness.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace witkit {

namespace {

// (I ⊗ ⟨φ|) W (I ⊗ |φ⟩): contract the right factor, d1×d1 output.
Matrix contract_right(const Matrix& w, const Vector& phi, int d1, int d2) {
  Matrix m(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d1; ++k)
      m(i, k) = phi.adjoint() * w.block(i * d2, k * d2, d2, d2) * phi;
  return 0.5 * (m + Matrix(m.adjoint()));
}

// (⟨ψ| ⊗ I) W (|ψ⟩ ⊗ I): contract the left factor, d2×d2 output.
Matrix contract_left(const Matrix& w, const Vector& psi, int d1, int d2) {
  Matrix m = Matrix::Zero(d2, d2);
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d1; ++k)
      m += std::conj(psi(i)) * psi(k) * w.block(i * d2, k * d2, d2, d2);
  return 0.5 * (m + Matrix(m.adjoint()));
}

struct ExtremePair {
  double value;
  Vector vector;
};

ExtremePair extreme_eigenpair(const Matrix& m, SeeSawMode mode) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("min_product_expectation: factor eigensolver did not converge");
  const Eigen::Index idx =
      mode == SeeSawMode::minimize ? 0 : solver.eigenvalues().size() - 1;
  return {solver.eigenvalues()(idx), solver.eigenvectors().col(idx)};
}

bool better(double candidate, double best, SeeSawMode mode) {
  return mode == SeeSawMode::minimize ? candidate < best : candidate > best;
}

}  // namespace

SeeSawResult min_product_expectation(const HermitianOperator& w, const SeeSawOptions& opts,
                                     SeeSawMode mode) {
  if (opts.restarts < 1)
    throw std::invalid_argument("min_product_expectation: need at least one restart");
  const int d1 = w.dims().d1;
  const int d2 = w.dims().d2;
  const Matrix& mat = w.matrix();

  double best_value = mode == SeeSawMode::minimize ? std::numeric_limits<double>::infinity()
                                                   : -std::numeric_limits<double>::infinity();
  Vector best_psi, best_phi;
  int best_sweeps = 0;
  std::vector<double> best_trace;

  for (int r = 0; r < opts.restarts; ++r) {
    zoo::Rng rng(zoo::derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    Vector psi = rng.gaussian_vector(d1);
    Vector phi = rng.gaussian_vector(d2);
    psi.normalize();
    phi.normalize();

    std::vector<double> trace;
    double value = (tensor_product(psi, phi).adjoint() * mat * tensor_product(psi, phi))
                       .value()
                       .real();
    int sweeps = 0;
    for (int s = 0; s < opts.max_sweeps; ++s) {
      const double prev = value;
      ExtremePair left = extreme_eigenpair(contract_right(mat, phi, d1, d2), mode);
      psi = left.vector;
      if (opts.record_trace) trace.push_back(left.value);
      ExtremePair right = extreme_eigenpair(contract_left(mat, psi, d1, d2), mode);
      phi = right.vector;
      if (opts.record_trace) trace.push_back(right.value);
      value = right.value;
      sweeps = s + 1;
      if (std::abs(prev - value) < opts.value_tol) break;
    }
    if (better(value, best_value, mode)) {
      best_value = value;
      best_psi = psi;
      best_phi = phi;
      best_sweeps = sweeps;
      best_trace = std::move(trace);
    }
  }
  return {best_value, ProductVector(std::move(best_psi), std::move(best_phi)), best_sweeps,
          std::move(best_trace)};
}

SeeSawResult refine_product_min(const HermitianOperator& w, const ProductVector& start,
                                const SeeSawOptions& opts) {
  if (!(start.dims() == w.dims()))
    throw std::invalid_argument("refine_product_min: start lives on a different space");
  const int d1 = w.dims().d1;
  const int d2 = w.dims().d2;
  const Matrix& mat = w.matrix();

  Vector psi = start.left();
  Vector phi = start.right();
  double value = (tensor_product(psi, phi).adjoint() * mat * tensor_product(psi, phi))
                     .value()
                     .real();
  std::vector<double> trace;
  int sweeps = 0;
  for (int s = 0; s < opts.max_sweeps; ++s) {
    const double prev = value;
    ExtremePair left = extreme_eigenpair(contract_right(mat, phi, d1, d2), SeeSawMode::minimize);
    psi = left.vector;
    if (opts.record_trace) trace.push_back(left.value);
    ExtremePair right = extreme_eigenpair(contract_left(mat, psi, d1, d2), SeeSawMode::minimize);
    phi = right.vector;
    if (opts.record_trace) trace.push_back(right.value);
    value = right.value;
    sweeps = s + 1;
    if (value == prev || std::abs(prev - value) < opts.value_tol) break;
  }
  return {value, ProductVector(std::move(psi), std::move(phi)), sweeps, std::move(trace)};
}

WitnessCertificate certify_witness(const HermitianOperator& w, const SeeSawOptions& opts) {
  SeeSawResult lo = min_product_expectation(w, opts, SeeSawMode::minimize);
  SeeSawResult hi = min_product_expectation(w, opts, SeeSawMode::maximize);
  const EigenSystem sys = hermitian_eigensystem(w);
  const double lambda_min = sys.values(0);

  WitnessVerdict verdict;
  if (lo.value < -sep_tol)
    verdict = WitnessVerdict::violates_separable_positivity;
  else if (lambda_min < -sep_tol)
    verdict = WitnessVerdict::witness;
  else
    verdict = WitnessVerdict::psd_not_witness;

  return {verdict,
          lo.value,
          std::move(lo.argument),
          hi.value,
          std::move(hi.argument),
          lambda_min,
          PureVector(w.dims(), sys.vectors.col(0)),
          opts};
}

DetectionReport detects(const HermitianOperator& w, const DensityMatrix& rho) {
  const double margin = hs_inner(w, rho.op());
  return {margin, margin < -detect_tol};
}

bool is_ppt(const DensityMatrix& rho) {
  const HermitianOperator pt = partial_transpose(rho.op());
  return is_psd(pt, psd_tolerance(pt));
}

HermitianOperator construct_witness(const DensityMatrix& rho) {
  const HermitianOperator pt = partial_transpose(rho.op());
  const EigenSystem sys = hermitian_eigensystem(pt);
  if (sys.values(0) >= -psd_tolerance(pt))
    throw std::invalid_argument(
        "construct_witness: state is PPT, no partial-transpose witness exists for it");
  return partial_transpose(projector(PureVector(rho.dims(), sys.vectors.col(0))));
}

DensityMatrix mix_preserving_detection(const HermitianOperator& w, const DensityMatrix& rho,
                                       const HermitianOperator& noise) {
  if (!(noise.dims() == rho.dims()))
    throw std::invalid_argument("mix_preserving_detection: dims mismatch");
  if (!detects(w, rho).detected)
    throw std::invalid_argument("mix_preserving_detection: state is not detected by W");
  if (!is_psd(noise, psd_tolerance(noise)))
    throw std::invalid_argument("mix_preserving_detection: admixture is not PSD");
  const double cross = hs_inner(w, noise);
  if (std::abs(cross) > detect_tol)
    throw std::invalid_argument("mix_preserving_detection: Tr(W·admixture) = " +
                                std::to_string(cross) + " is not zero within tolerance");
  Matrix m = rho.matrix() + noise.matrix();
  m /= m.trace().real();
  return DensityMatrix(HermitianOperator(rho.dims(), std::move(m)));
}

}  // namespace witkit
