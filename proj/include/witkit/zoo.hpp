// zoo.hpp — Named states and witnesses plus seeded random generators.

#pragma once

#include "witkit/core.hpp"

#include <cstdint>
#include <random>

namespace witkit::zoo {

using Seed = std::uint64_t;

// Deterministic stream splitter: the k-th derived seed of a master seed.
// Used wherever a batch of restarts or samples needs independent streams.
Seed derive_seed(Seed master, std::uint64_t counter);

// Gaussian source on top of std::mt19937_64. The engine is fully specified
// by the standard; uniforms (53-bit) and normals (Box–Muller) are derived
// in-house so identical seeds give identical streams on any platform.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  double uniform();   // [0, 1)
  double gaussian();  // standard normal
  Cplx gaussian_complex();
  Vector gaussian_vector(int n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

enum class BellLabel { phi_plus, phi_minus, psi_plus, psi_minus };

// The four Bell vectors on (2,2), e.g. phi_plus = (|00⟩ + |11⟩)/√2.
PureVector bell_state(BellLabel label);

// Swap V = Σ_{ij} |i⟩⟨j| ⊗ |j⟩⟨i| on (n,n); spectrum {-1, +1}, and
// ⟨ψ⊗φ|V|ψ⊗φ⟩ = |⟨ψ|φ⟩|². Equals n·T₂(Q) for Q the projector onto
// (1/√n)Σ|ii⟩.
HermitianOperator swap_operator(int n);

// p·|ψ−⟩⟨ψ−| + (1−p)·I/4 on (2,2), p ∈ [0,1]. The second-factor transpose
// has minimum eigenvalue (1−3p)/4, so positivity under it fails exactly for
// p > 1/3. The state is unique up to local unitaries.
DensityMatrix werner_state(double p);

// T₂(|e⟩⟨e|) for an entangled |e⟩: the canonical decomposable witness.
// Requires Schmidt rank ≥ 2, checked via singular values of the d1×d2
// reshaping at tolerance 1e-9.
HermitianOperator pt_witness(const PureVector& e);

// a·W + D for a > 0 and PSD D. Throws if D fails its PSD check or if the
// sum turns out PSD (no longer a witness candidate).
HermitianOperator shifted_witness(const HermitianOperator& w, double a,
                                  const HermitianOperator& d);

// Ginibre density G·G†/Tr(G·G†), G square complex Gaussian.
DensityMatrix random_density(const BipartiteDims& dims, Seed seed);

PureVector random_pure(const BipartiteDims& dims, Seed seed);
ProductVector random_product(const BipartiteDims& dims, Seed seed);

}  // namespace witkit::zoo
