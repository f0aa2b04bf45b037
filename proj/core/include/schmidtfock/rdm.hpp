#pragma once

#include "schmidtfock/fock.hpp"
#include "schmidtfock/numerics.hpp"
#include "schmidtfock/states.hpp"

namespace schmidtfock {

/// rho_{alpha alpha'} = <C_alpha'^dagger C_alpha> over the full M-particle
/// basis. The same matrix represents the M-body density operator
/// sum rho_{a a'} C_a^dagger|0><0|C_a'. Raw trace is C(N,M); normalized
/// trace is 1.
struct ReducedDensityMatrix {
  FockBasis basis;
  int source_particles = 0;  // N
  Matrix matrix;
  bool normalized = false;

  [[nodiscard]] int particles() const noexcept { return basis.particles(); }
  [[nodiscard]] double trace() const { return matrix.trace().real(); }
  [[nodiscard]] Spectrum spectrum() const { return hermitian_eigen(matrix).spectrum; }
};

/// Gamma^(M) Gamma^(M)dagger; 0 < M <= N.
ReducedDensityMatrix rdm(const PureState& state, int M);

/// Divides a raw matrix by C(N,M); normalized input is returned unchanged.
ReducedDensityMatrix normalized(const ReducedDensityMatrix& rho);

/// prod_i C(n_i, m_i) over every alpha <= beta with |alpha| = M, descending.
std::vector<double> fock_rdm_spectrum(const OccupationVector& beta, int M);

/// rho^(L) from rho^(M) for L <= M: C(N-L, N-M)^{-1} Tr[rho^(M) C_g'^dagger C_g].
/// Result is raw.
ReducedDensityMatrix reduce(const ReducedDensityMatrix& rho, int L);

/// S of the normalized L-body spectrum (computed on the smaller of L, N-L).
double entanglement_entropy(const PureState& state, int L, const EntropyKind& kind);

/// Normalized spectrum of a PSD matrix: eigenvalues / trace, floor-checked.
Spectrum normalized_spectrum(const Matrix& psd);

}  // namespace schmidtfock
