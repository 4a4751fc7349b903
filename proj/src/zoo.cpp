// zoo.cpp — Named states, canonical witnesses, seeded random objects.

#include "witkit/zoo.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>

namespace witkit::zoo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

Seed derive_seed(Seed master, std::uint64_t counter) {
  return splitmix64(master + 0x9E3779B97F4A7C15ull * (counter + 1));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  have_spare_ = true;
  return r * std::cos(th);
}

Cplx Rng::gaussian_complex() {
  const double re = gaussian();
  const double im = gaussian();
  return {re, im};
}

Vector Rng::gaussian_vector(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = gaussian_complex();
  return v;
}

PureVector bell_state(BellLabel label) {
  const BipartiteDims dims(2, 2);
  Vector v = Vector::Zero(4);
  const double s = 1.0 / std::numbers::sqrt2;
  switch (label) {
    case BellLabel::phi_plus:
      v(0) = s;
      v(3) = s;
      break;
    case BellLabel::phi_minus:
      v(0) = s;
      v(3) = -s;
      break;
    case BellLabel::psi_plus:
      v(1) = s;
      v(2) = s;
      break;
    case BellLabel::psi_minus:
      v(1) = s;
      v(2) = -s;
      break;
  }
  return {dims, std::move(v)};
}

HermitianOperator swap_operator(int n) {
  if (n < 2) throw std::invalid_argument("swap_operator: need n >= 2");
  const BipartiteDims dims(n, n);
  Matrix v = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v(i * n + j, j * n + i) = 1.0;
  return {dims, std::move(v)};
}

DensityMatrix werner_state(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("werner_state: p must lie in [0, 1]");
  const PureVector psi = bell_state(BellLabel::psi_minus);
  Matrix m = p * (psi.amps() * psi.amps().adjoint()) +
             (1.0 - p) * 0.25 * Matrix::Identity(4, 4);
  return DensityMatrix(HermitianOperator(psi.dims(), std::move(m)));
}

HermitianOperator pt_witness(const PureVector& e) {
  const int d1 = e.dims().d1;
  const int d2 = e.dims().d2;
  Matrix reshaped(d1, d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) reshaped(i, j) = e.amps()(i * d2 + j);
  Eigen::JacobiSVD<Matrix> svd(reshaped);
  if (svd.singularValues().size() < 2 || svd.singularValues()(1) <= 1e-9)
    throw std::invalid_argument("pt_witness: vector has Schmidt rank < 2 (product vector)");
  return partial_transpose(projector(e));
}

HermitianOperator shifted_witness(const HermitianOperator& w, double a,
                                  const HermitianOperator& d) {
  if (a <= 0.0) throw std::invalid_argument("shifted_witness: a must be positive");
  if (!is_psd(d, psd_tolerance(d)))
    throw std::invalid_argument("shifted_witness: shift D is not PSD");
  HermitianOperator out = a * w + d;
  if (is_psd(out, psd_tolerance(out)))
    throw std::invalid_argument("shifted_witness: a·W + D is PSD, no longer a witness");
  return out;
}

DensityMatrix random_density(const BipartiteDims& dims, Seed seed) {
  Rng rng(seed);
  const int d = dims.total();
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.gaussian_complex();
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(HermitianOperator(dims, std::move(m)));
}

PureVector random_pure(const BipartiteDims& dims, Seed seed) {
  Rng rng(seed);
  Vector v = rng.gaussian_vector(dims.total());
  v.normalize();
  return {dims, std::move(v)};
}

ProductVector random_product(const BipartiteDims& dims, Seed seed) {
  Rng rng(seed);
  Vector l = rng.gaussian_vector(dims.d1);
  Vector r = rng.gaussian_vector(dims.d2);
  l.normalize();
  r.normalize();
  return {std::move(l), std::move(r)};
}

}  // namespace witkit::zoo
