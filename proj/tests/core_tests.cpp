#include <doctest.h>

#include "test_support.hpp"
#include "witkit/core.hpp"
#include "witkit/zoo.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

using namespace witkit;
using testsupport::near;
using testsupport::random_hermitian;

namespace {

const BipartiteDims qubits{2, 2};

// Independent index-permutation route for the second-factor transpose.
Matrix pt_oracle(const Matrix& m, int d1, int d2) {
  Matrix out(d1 * d2, d1 * d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d1; ++k)
        for (int l = 0; l < d2; ++l) out(i * d2 + j, k * d2 + l) = m(i * d2 + l, k * d2 + j);
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

HermitianOperator phi_plus_projector() {
  return projector(zoo::bell_state(zoo::BellLabel::phi_plus));
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("dims reject one-dimensional factors") {
  CHECK_THROWS_AS(BipartiteDims(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(BipartiteDims(2, 0), std::invalid_argument);
  CHECK(BipartiteDims(2, 3).total() == 6);
}

TEST_CASE("construction symmetrizes small deviations and rejects large ones") {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 1) = Cplx(0.5, 1e-13);
  m(1, 0) = Cplx(0.5, 0.0);
  const HermitianOperator a(qubits, m);
  CHECK(a.matrix()(0, 1) == std::conj(a.matrix()(1, 0)));

  Matrix bad = Matrix::Zero(4, 4);
  bad(0, 1) = 0.7;
  bad(1, 0) = 0.5;
  CHECK_THROWS_WITH_AS(HermitianOperator(qubits, bad),
                       doctest::Contains("worst entry pair"), std::invalid_argument);
}

TEST_CASE("vector types validate norms and shapes") {
  Vector v(4);
  v << 1, 1, 0, 0;
  CHECK_THROWS_AS(PureVector(qubits, v), std::invalid_argument);

  Vector l(2), r(2);
  l << 1, 0;
  r << 0, 1;
  const ProductVector p(l, r);
  CHECK((p.joint().amps() - tensor_product(l, r)).norm() == 0.0);

  Vector big(2);
  big << 2, 0;
  CHECK_THROWS_AS(ProductVector(big, r), std::invalid_argument);
}

TEST_CASE("density matrices reject bad traces and negative eigenvalues") {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 0.45;
  m(1, 1) = 0.45;
  CHECK_THROWS_WITH_AS(DensityMatrix(HermitianOperator(qubits, m)), doctest::Contains("trace"),
                       std::invalid_argument);

  Matrix neg = Matrix::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(HermitianOperator(qubits, neg)), std::invalid_argument);

  const DensityMatrix pure = DensityMatrix::from_pure(zoo::bell_state(zoo::BellLabel::phi_plus));
  CHECK(near(pure.matrix().trace().real(), 1.0, 1e-12));
}

TEST_CASE("tensor product bookkeeping") {
  const Matrix i2 = Matrix::Identity(2, 2);
  CHECK(max_abs_diff(tensor_product(i2, i2), Matrix::Identity(4, 4)) == 0.0);

  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  Matrix expect = Matrix::Zero(4, 4);
  expect(1, 1) = 1;  // |0⟩|1⟩ ↦ index 0·2+1
  CHECK(max_abs_diff(tensor_product(qubits, p0, p1).matrix(), expect) == 0.0);

  Matrix sz = Matrix::Zero(2, 2);
  sz(0, 0) = 1;
  sz(1, 1) = -1;
  const HermitianOperator zi = tensor_product(qubits, sz, i2);
  Vector e01 = Vector::Unit(4, 1), e10 = Vector::Unit(4, 2);
  CHECK((zi.matrix() * e01 - e01).norm() == 0.0);
  CHECK((zi.matrix() * e10 + e10).norm() == 0.0);

  CHECK_THROWS_AS(tensor_product(qubits, Matrix::Identity(3, 3), i2), std::invalid_argument);
}

TEST_CASE("partial transpose matches the four-loop oracle and its algebraic laws") {
  const BipartiteDims all_dims[] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
  int counter = 0;
  for (const auto& dims : all_dims) {
    for (int rep = 0; rep < 25; ++rep) {
      const HermitianOperator a = random_hermitian(dims, 100 + counter);
      const HermitianOperator b = random_hermitian(dims, 200 + counter);
      ++counter;

      const HermitianOperator ta = partial_transpose(a);
      CHECK(max_abs_diff(ta.matrix(), pt_oracle(a.matrix(), dims.d1, dims.d2)) == 0.0);

      // involution is an exact entry permutation
      CHECK(max_abs_diff(partial_transpose(ta).matrix(), a.matrix()) == 0.0);

      CHECK(near(ta.matrix().trace().real(), a.matrix().trace().real(), 1e-12));

      const HermitianOperator lin = partial_transpose(0.3 * a + (-1.7) * b);
      const HermitianOperator lin2 = 0.3 * ta + (-1.7) * partial_transpose(b);
      CHECK(max_abs_diff(lin.matrix(), lin2.matrix()) <= 1e-12);

      CHECK(near(hs_inner(ta, b), hs_inner(a, partial_transpose(b)), 1e-10));
    }
  }
}

TEST_CASE("partial transpose of the maximally entangled projector") {
  const HermitianOperator t = partial_transpose(phi_plus_projector());
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = expect(3, 3) = 0.5;  // |00⟩⟨00| + |11⟩⟨11|
  expect(1, 2) = expect(2, 1) = 0.5;  // |01⟩⟨10| + |10⟩⟨01|
  CHECK(max_abs_diff(t.matrix(), expect) <= 1e-15);

  // swap = 2·(partial transpose of that projector)
  CHECK(max_abs_diff(partial_transpose(zoo::swap_operator(2)).matrix(),
                     (2.0 * phi_plus_projector()).matrix()) <= 1e-15);
}

TEST_CASE("eigensystem: examples, reconstruction, orthonormality, determinism") {
  const HermitianOperator id4 = identity_operator(qubits);
  const EigenSystem es_id = hermitian_eigensystem(id4);
  for (int k = 0; k < 4; ++k) CHECK(near(es_id.values(k), 1.0, 1e-14));

  const EigenSystem es_swap = hermitian_eigensystem(zoo::swap_operator(2));
  CHECK(near(es_swap.values(0), -1.0, 1e-12));
  for (int k = 1; k < 4; ++k) CHECK(near(es_swap.values(k), 1.0, 1e-12));
  const Vector psi_minus = zoo::bell_state(zoo::BellLabel::psi_minus).amps();
  CHECK(near(std::abs(psi_minus.dot(es_swap.vectors.col(0))), 1.0, 1e-9));
  // fixed-phase convention: first significant component is real positive
  CHECK(es_swap.vectors.col(0)(1).real() > 0.0);
  CHECK(near(es_swap.vectors.col(0)(1).imag(), 0.0, 1e-12));

  Matrix diag = Matrix::Zero(4, 4);
  diag(0, 0) = 3;
  diag(1, 1) = -2;
  diag(2, 2) = 0.5;
  const EigenSystem es_diag = hermitian_eigensystem(HermitianOperator(qubits, diag));
  CHECK(near(es_diag.values(0), -2.0, 1e-12));
  CHECK(near(es_diag.values(1), 0.0, 1e-12));
  CHECK(near(es_diag.values(2), 0.5, 1e-12));
  CHECK(near(es_diag.values(3), 3.0, 1e-12));

  const BipartiteDims sizes[] = {{2, 2}, {2, 3}, {3, 3}};
  for (const auto& dims : sizes) {
    const int d = dims.total();
    for (int rep = 0; rep < 100; ++rep) {
      const HermitianOperator a = random_hermitian(dims, 4000 + 100 * d + rep);
      const EigenSystem es = hermitian_eigensystem(a);
      for (int k = 0; k + 1 < d; ++k) CHECK(es.values(k) <= es.values(k + 1));
      const Matrix recon =
          es.vectors * es.values.cast<Cplx>().asDiagonal() * es.vectors.adjoint();
      CHECK((recon - a.matrix()).norm() <= 1e-9 * (1.0 + spectral_radius(a)));
      CHECK(max_abs_diff(es.vectors.adjoint() * es.vectors, Matrix::Identity(d, d)) <= 1e-9);
    }
  }

  // identical input, identical output, bit for bit
  const HermitianOperator probe = random_hermitian({3, 3}, 77);
  const EigenSystem one = hermitian_eigensystem(probe);
  const EigenSystem two = hermitian_eigensystem(probe);
  CHECK((one.values - two.values).norm() == 0.0);
  CHECK((one.vectors - two.vectors).norm() == 0.0);
}

TEST_CASE("psd tests") {
  CHECK(is_psd(identity_operator(qubits), 0.0));
  CHECK_FALSE(is_psd(zoo::swap_operator(2), 1e-9));
  const HermitianOperator t = partial_transpose(phi_plus_projector());
  CHECK_FALSE(is_psd(t, 1e-9));
  CHECK(near(min_eigenvalue(t), -0.5, 1e-12));
  CHECK(near(spectral_radius(zoo::swap_operator(2)), 1.0, 1e-12));
}

TEST_CASE("hilbert-schmidt pairing") {
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix rho = zoo::random_density(qubits, 900 + rep);
    CHECK(near(hs_inner(identity_operator(qubits), rho.op()), 1.0, 1e-12));
  }

  const HermitianOperator w = zoo::pt_witness(zoo::bell_state(zoo::BellLabel::psi_minus));
  const HermitianOperator p = phi_plus_projector();
  CHECK(near(hs_inner(w, p), -0.5, 1e-12));
  // independent route: direct 4×4 multiplication
  CHECK(near((w.matrix() * p.matrix()).trace().real(), -0.5, 1e-12));

  for (int rep = 0; rep < 20; ++rep) {
    const HermitianOperator a = random_hermitian(qubits, 1500 + rep);
    const HermitianOperator b = random_hermitian(qubits, 1600 + rep);
    CHECK(near(hs_inner(a, b), hs_inner(b, a), 1e-10));
  }

  CHECK_THROWS_AS(hs_inner(random_hermitian({2, 2}, 1), random_hermitian({2, 3}, 2)),
                  std::invalid_argument);
}

TEST_CASE("range projector") {
  CHECK(max_abs_diff(range_projector(identity_operator(qubits)).matrix(),
                     Matrix::Identity(4, 4)) <= 1e-12);
  const HermitianOperator p = phi_plus_projector();
  CHECK(max_abs_diff(range_projector(p).matrix(), p.matrix()) <= 1e-12);

  Matrix diag = Matrix::Zero(4, 4);
  diag(0, 0) = 5;
  diag(1, 1) = 1e-14;
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 1;
  CHECK(max_abs_diff(range_projector(HermitianOperator(qubits, diag), 1e-7).matrix(), expect) <=
        1e-12);

  for (int rep = 0; rep < 10; ++rep) {
    const Matrix pr = range_projector(random_hermitian({2, 3}, 2100 + rep)).matrix();
    CHECK(max_abs_diff(pr * pr, pr) <= 1e-10);
  }
}

TEST_CASE("swap defining identity on random product vectors") {
  for (int n = 2; n <= 3; ++n) {
    const HermitianOperator v = zoo::swap_operator(n);
    for (int rep = 0; rep < 100; ++rep) {
      const ProductVector p = zoo::random_product({n, n}, 3000 + 100 * n + rep);
      const Cplx overlap = p.left().dot(p.right());
      CHECK(near(product_expectation(v, p), std::norm(overlap), 1e-10));
    }
  }
}

}  // TEST_SUITE
