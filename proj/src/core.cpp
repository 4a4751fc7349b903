// core.cpp — Bipartite operator types and the dense linear algebra behind them.

#include "witkit/core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>

namespace witkit {

namespace {

std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_dims(const HermitianOperator& a, const HermitianOperator& b,
                       const char* who) {
  if (!(a.dims() == b.dims()))
    throw std::invalid_argument(std::string(who) + ": operands live on different spaces");
}

}  // namespace

// ------------------------- value types -------------------------

HermitianOperator::HermitianOperator(BipartiteDims dims, Matrix entries)
    : dims_(dims), mat_(std::move(entries)) {
  const Eigen::Index d = dims_.total();
  if (mat_.rows() != d || mat_.cols() != d)
    throw std::invalid_argument("HermitianOperator: matrix is " + shape_string(mat_) +
                                " but dims require " + std::to_string(d) + "x" +
                                std::to_string(d));
  const double scale = 1.0 + mat_.cwiseAbs().maxCoeff();
  Eigen::Index wi = 0, wj = 0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j) {
      const double dev = std::abs(mat_(i, j) - std::conj(mat_(j, i)));
      if (dev > worst) {
        worst = dev;
        wi = i;
        wj = j;
      }
    }
  if (worst > hermiticity_tol * scale)
    throw std::invalid_argument(
        "HermitianOperator: not Hermitian, worst entry pair (" + std::to_string(wi) + "," +
        std::to_string(wj) + ") vs (" + std::to_string(wj) + "," + std::to_string(wi) +
        ") deviates by " + std::to_string(worst));
  const Matrix adj = mat_.adjoint();
  mat_ = 0.5 * (mat_ + adj);
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dims(a, b, "operator+");
  return {a.dims(), a.matrix() + b.matrix()};
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dims(a, b, "operator-");
  return {a.dims(), a.matrix() - b.matrix()};
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  return {a.dims(), s * a.matrix()};
}

PureVector::PureVector(BipartiteDims dims, Vector amplitudes)
    : dims_(dims), amps_(std::move(amplitudes)) {
  if (amps_.size() != dims_.total())
    throw std::invalid_argument("PureVector: length " + std::to_string(amps_.size()) +
                                " does not match dims total " +
                                std::to_string(dims_.total()));
  if (std::abs(amps_.norm() - 1.0) > unit_norm_tol)
    throw std::invalid_argument("PureVector: norm deviates from 1 by more than " +
                                std::to_string(unit_norm_tol));
}

ProductVector::ProductVector(Vector left, Vector right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (left_.size() < 2 || right_.size() < 2)
    throw std::invalid_argument("ProductVector: both factors need dimension >= 2");
  if (std::abs(left_.norm() - 1.0) > unit_norm_tol ||
      std::abs(right_.norm() - 1.0) > unit_norm_tol)
    throw std::invalid_argument("ProductVector: factors must be unit vectors");
}

BipartiteDims ProductVector::dims() const {
  return {static_cast<int>(left_.size()), static_cast<int>(right_.size())};
}

PureVector ProductVector::joint() const {
  return {dims(), tensor_product(left_, right_)};
}

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
  const double tr = op_.matrix().trace().real();
  if (std::abs(tr - 1.0) > trace_tol)
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                std::to_string(std::abs(tr - 1.0)));
  if (!is_psd(op_, psd_tolerance(op_)))
    throw std::invalid_argument("DensityMatrix: matrix has a negative eigenvalue beyond tolerance");
}

DensityMatrix DensityMatrix::from_pure(const PureVector& psi) {
  Matrix m = psi.amps() * psi.amps().adjoint();
  const double tr = m.trace().real();
  m /= tr;  // norm is 1 within unit_norm_tol; exact unit trace keeps the invariant
  return DensityMatrix(HermitianOperator(psi.dims(), std::move(m)));
}

// ------------------------- operations -------------------------

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
  return out;
}

Vector tensor_product(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

HermitianOperator tensor_product(const BipartiteDims& dims, const Matrix& a, const Matrix& b) {
  if (a.rows() != dims.d1 || a.cols() != dims.d1 || b.rows() != dims.d2 || b.cols() != dims.d2)
    throw std::invalid_argument("tensor_product: factor shapes " + shape_string(a) + ", " +
                                shape_string(b) + " do not match dims (" +
                                std::to_string(dims.d1) + "," + std::to_string(dims.d2) + ")");
  return {dims, tensor_product(a, b)};
}

HermitianOperator partial_transpose(const HermitianOperator& a) {
  const int d1 = a.dims().d1;
  const int d2 = a.dims().d2;
  Matrix out(a.dim(), a.dim());
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d1; ++k)
      out.block(i * d2, k * d2, d2, d2) =
          a.matrix().block(i * d2, k * d2, d2, d2).transpose();
  return {a.dims(), std::move(out)};
}

EigenSystem hermitian_eigensystem(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigensystem: eigensolver did not converge");
  EigenSystem sys{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < sys.vectors.cols(); ++c) {
    auto col = sys.vectors.col(c);
    const double peak = col.cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      const double mag = std::abs(col(r));
      if (mag > 1e-12 * peak) {
        col *= std::conj(col(r)) / mag;
        break;
      }
    }
  }
  return sys;
}

double min_eigenvalue(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("min_eigenvalue: eigensolver did not converge");
  return solver.eigenvalues()(0);
}

double spectral_radius(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectral_radius: eigensolver did not converge");
  return std::max(std::abs(solver.eigenvalues()(0)),
                  std::abs(solver.eigenvalues()(solver.eigenvalues().size() - 1)));
}

bool is_psd(const HermitianOperator& a, double tol) {
  return min_eigenvalue(a) >= -tol;
}

double psd_tolerance(const HermitianOperator& a) {
  return psd_rel_tol * (1.0 + spectral_radius(a));
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dims(a, b, "hs_inner");
  const Cplx s = a.matrix().cwiseProduct(b.matrix().transpose()).sum();
  const double scale = 1.0 + a.matrix().norm() * b.matrix().norm();
  if (std::abs(s.imag()) > 1e-12 * scale)
    throw std::runtime_error("hs_inner: imaginary residue " + std::to_string(s.imag()) +
                             " exceeds tolerance");
  return s.real();
}

double frobenius_norm(const HermitianOperator& a) { return a.matrix().norm(); }

HermitianOperator range_projector(const HermitianOperator& a, double rank_tol) {
  const EigenSystem sys = hermitian_eigensystem(a);
  const double radius =
      std::max(std::abs(sys.values(0)), std::abs(sys.values(sys.values.size() - 1)));
  Matrix p = Matrix::Zero(a.dim(), a.dim());
  for (Eigen::Index k = 0; k < sys.values.size(); ++k)
    if (std::abs(sys.values(k)) > rank_tol * radius)
      p += sys.vectors.col(k) * sys.vectors.col(k).adjoint();
  return {a.dims(), std::move(p)};
}

HermitianOperator identity_operator(const BipartiteDims& dims) {
  return {dims, Matrix::Identity(dims.total(), dims.total())};
}

HermitianOperator projector(const PureVector& psi) {
  return {psi.dims(), psi.amps() * psi.amps().adjoint()};
}

double product_expectation(const HermitianOperator& a, const ProductVector& p) {
  if (!(p.dims() == a.dims()))
    throw std::invalid_argument("product_expectation: vector does not match operator dims");
  const Vector joint = tensor_product(p.left(), p.right());
  const Cplx v = joint.adjoint() * a.matrix() * joint;
  return v.real();
}

}  // namespace witkit
