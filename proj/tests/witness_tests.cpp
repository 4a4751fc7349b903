#include <doctest.h>

#include "test_support.hpp"
#include "witkit/core.hpp"
#include "witkit/witness.hpp"
#include "witkit/zoo.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace witkit;
using testsupport::near;
using testsupport::sampled_product_min;

namespace {

const BipartiteDims qubits{2, 2};

PureVector schmidt_pair(double theta) {
  Vector amps = Vector::Zero(4);
  amps(0) = std::cos(theta);
  amps(3) = std::sin(theta);
  return {qubits, amps};
}

HermitianOperator basis_projector(int index) {
  return projector(PureVector(qubits, Vector::Unit(4, index)));
}

// The witness fixtures the engine-level properties quantify over.
std::vector<HermitianOperator> witness_fixtures() {
  std::vector<HermitianOperator> out;
  out.push_back(zoo::swap_operator(2));
  out.push_back(zoo::swap_operator(3));
  for (auto label : {zoo::BellLabel::phi_plus, zoo::BellLabel::phi_minus,
                     zoo::BellLabel::psi_plus, zoo::BellLabel::psi_minus})
    out.push_back(zoo::pt_witness(zoo::bell_state(label)));
  out.push_back(zoo::pt_witness(schmidt_pair(M_PI / 6.0)));
  out.push_back(zoo::shifted_witness(zoo::pt_witness(zoo::bell_state(zoo::BellLabel::phi_plus)),
                                     1.0, 0.25 * identity_operator(qubits)));
  return out;
}

}  // namespace

TEST_SUITE("witness-engine") {

TEST_CASE("product minimization examples") {
  const SeeSawResult swap_min = min_product_expectation(zoo::swap_operator(2));
  CHECK(std::abs(swap_min.value) <= 1e-9);

  const SeeSawResult id_min = min_product_expectation(identity_operator(qubits));
  CHECK(near(id_min.value, 1.0, 1e-12));

  const SeeSawResult ptw_min =
      min_product_expectation(zoo::pt_witness(zoo::bell_state(zoo::BellLabel::psi_minus)));
  CHECK(std::abs(ptw_min.value) <= 1e-9);

  SeeSawOptions bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(min_product_expectation(identity_operator(qubits), bad),
                  std::invalid_argument);
}

TEST_CASE("see-saw value is genuine, monotone, and at least as good as brute sampling") {
  int counter = 0;
  for (const HermitianOperator& w : witness_fixtures()) {
    SeeSawOptions opts;
    opts.record_trace = true;
    const SeeSawResult r = min_product_expectation(w, opts);

    // the value is the expectation at the reported argument
    CHECK(near(product_expectation(w, r.argument), r.value, 1e-12));

    // each half-sweep is an exact single-factor minimization
    for (size_t k = 0; k + 1 < r.trace.size(); ++k) CHECK(r.trace[k + 1] <= r.trace[k] + 1e-12);

    // a million random product states never do better than the see-saw
    CHECK(r.value <= sampled_product_min(w, 1000000, 600 + counter) + 1e-7);

    // all fixtures are block positive, so nothing sits below zero
    CHECK(r.value >= -1e-9);
    ++counter;
  }
}

TEST_CASE("certification verdicts") {
  const WitnessCertificate swap_cert = certify_witness(zoo::swap_operator(2));
  CHECK(swap_cert.verdict == WitnessVerdict::witness);
  CHECK(std::abs(swap_cert.min_product) <= 1e-9);
  CHECK(near(swap_cert.min_eigenvalue, -1.0, 1e-9));

  CHECK(certify_witness(identity_operator(qubits)).verdict == WitnessVerdict::psd_not_witness);

  const WitnessCertificate neg = certify_witness(-1.0 * basis_projector(0));
  CHECK(neg.verdict == WitnessVerdict::violates_separable_positivity);
  CHECK(neg.min_product < -sep_tol);
  // the refutation is checkable: the reported product state goes negative
  CHECK(product_expectation(-1.0 * basis_projector(0), neg.min_product_arg) < -sep_tol);
  CHECK(near(std::abs(neg.min_product_arg.joint().amps()(0)), 1.0, 1e-6));

  // every certified witness has a strictly positive separable expectation
  for (const HermitianOperator& w : witness_fixtures()) {
    const WitnessCertificate cert = certify_witness(w);
    CHECK(cert.verdict == WitnessVerdict::witness);
    CHECK(cert.max_product > 1e-9);
  }
}

TEST_CASE("detection margins") {
  const HermitianOperator w_plus = zoo::pt_witness(zoo::bell_state(zoo::BellLabel::phi_plus));
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    const DetectionReport rep = detects(w_plus, zoo::werner_state(p));
    CHECK(near(rep.margin, (1.0 - 3.0 * p) / 4.0, 1e-10));
    CHECK(rep.detected == (rep.margin < -detect_tol));
  }

  const HermitianOperator w_minus = zoo::pt_witness(zoo::bell_state(zoo::BellLabel::psi_minus));
  const DensityMatrix phi_plus = DensityMatrix::from_pure(zoo::bell_state(zoo::BellLabel::phi_plus));
  CHECK(near(detects(w_minus, phi_plus).margin, -0.5, 1e-12));
  CHECK(detects(w_minus, phi_plus).detected);

  // a sampled separable mixture is never detected
  for (const HermitianOperator& w : witness_fixtures()) {
    if (w.dims() != qubits) continue;
    Matrix mix = Matrix::Zero(4, 4);
    for (int k = 0; k < 10; ++k)
      mix += 0.1 * projector(zoo::random_product(qubits, 700 + k).joint()).matrix();
    CHECK(detects(w, DensityMatrix(HermitianOperator(qubits, mix))).margin >= -1e-9);
  }
}

TEST_CASE("detection is linear in the state") {
  const HermitianOperator w = zoo::pt_witness(zoo::bell_state(zoo::BellLabel::psi_minus));
  zoo::Rng rng(81);
  for (int rep = 0; rep < 20; ++rep) {
    const DensityMatrix r1 = zoo::random_density(qubits, 800 + rep);
    const DensityMatrix r2 = zoo::random_density(qubits, 850 + rep);
    const double alpha = rng.uniform();
    const DensityMatrix blend(alpha * r1.op() + (1.0 - alpha) * r2.op());
    const double lhs = detects(w, blend).margin;
    const double rhs = alpha * detects(w, r1).margin + (1.0 - alpha) * detects(w, r2).margin;
    CHECK(near(lhs, rhs, 1e-12));
  }
}

TEST_CASE("construction from an npt state") {
  const DensityMatrix phi_plus = DensityMatrix::from_pure(zoo::bell_state(zoo::BellLabel::phi_plus));
  const HermitianOperator w = construct_witness(phi_plus);
  const HermitianOperator expect = zoo::pt_witness(zoo::bell_state(zoo::BellLabel::psi_minus));
  CHECK((w.matrix() - expect.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(near(detects(w, phi_plus).margin, -0.5, 1e-12));

  const HermitianOperator w_half = construct_witness(zoo::werner_state(0.5));
  const HermitianOperator expect_half = zoo::pt_witness(zoo::bell_state(zoo::BellLabel::phi_plus));
  CHECK((w_half.matrix() - expect_half.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(near(detects(w_half, zoo::werner_state(0.5)).margin, -0.125, 1e-12));

  CHECK_THROWS_WITH_AS(construct_witness(zoo::werner_state(0.2)), doctest::Contains("PPT"),
                       std::invalid_argument);
}

TEST_CASE("ppt test") {
  CHECK(is_ppt(zoo::werner_state(1.0 / 3.0)));
  CHECK_FALSE(is_ppt(DensityMatrix::from_pure(zoo::bell_state(zoo::BellLabel::psi_minus))));
  CHECK(is_ppt(DensityMatrix(basis_projector(1))));
}

TEST_CASE("mixing with a zero-expectation positive operator preserves detection") {
  const HermitianOperator w = zoo::pt_witness(zoo::bell_state(zoo::BellLabel::psi_minus));
  const DensityMatrix rho = DensityMatrix::from_pure(zoo::bell_state(zoo::BellLabel::phi_plus));

  const HermitianOperator zero(qubits, Matrix::Zero(4, 4));
  const DensityMatrix same = mix_preserving_detection(w, rho, zero);
  CHECK((same.matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);

  // ⟨00|W|00⟩ = ⟨11|W|11⟩ = 0, so this admixture costs no margin beyond scale
  const HermitianOperator noise = basis_projector(0) + basis_projector(3);
  CHECK(std::abs(hs_inner(w, noise)) <= detect_tol);
  const DensityMatrix mixed = mix_preserving_detection(w, rho, noise);
  CHECK(near(detects(w, mixed).margin, -0.5 / 3.0, 1e-12));
  CHECK(detects(w, mixed).detected);

  CHECK_THROWS_AS(mix_preserving_detection(w, rho, 0.6 * basis_projector(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(mix_preserving_detection(w, rho, -1.0 * basis_projector(0)),
                  std::invalid_argument);
  const DensityMatrix undetected(0.25 * identity_operator(qubits));
  CHECK_THROWS_AS(mix_preserving_detection(w, undetected, zero), std::invalid_argument);
}

TEST_CASE("500 seeded npt states: construction always certifies") {
  int found = 0;
  zoo::Seed seed = 0;
  while (found < 500) {
    const DensityMatrix rho = zoo::random_density(qubits, ++seed);
    if (is_ppt(rho)) continue;
    ++found;
    const HermitianOperator w = construct_witness(rho);
    const WitnessCertificate cert = certify_witness(w);
    CHECK(cert.verdict == WitnessVerdict::witness);
    const double lmin = min_eigenvalue(partial_transpose(rho.op()));
    CHECK(near(detects(w, rho).margin, lmin, 1e-10));
  }
}

TEST_CASE("pt witnesses never detect ppt states") {
  std::vector<HermitianOperator> witnesses;
  for (auto label : {zoo::BellLabel::phi_plus, zoo::BellLabel::phi_minus,
                     zoo::BellLabel::psi_plus, zoo::BellLabel::psi_minus})
    witnesses.push_back(zoo::pt_witness(zoo::bell_state(label)));
  witnesses.push_back(zoo::pt_witness(schmidt_pair(M_PI / 6.0)));

  int found = 0;
  zoo::Seed seed = 100000;
  while (found < 1000) {
    const DensityMatrix rho = zoo::random_density(qubits, ++seed);
    if (!is_ppt(rho)) continue;
    ++found;
    for (const auto& w : witnesses) CHECK(detects(w, rho).margin >= -1e-9);
  }
}

}  // TEST_SUITE
