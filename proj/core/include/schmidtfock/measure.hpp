#pragma once

#include <string>
#include <vector>

#include "schmidtfock/blocks.hpp"
#include "schmidtfock/numerics.hpp"
#include "schmidtfock/states.hpp"

namespace schmidtfock {

struct MeasurementBranch {
  std::string label;
  double probability = 0.0;
  PureState post_state;
};

/// Post-selected outcomes of a measurement that keeps M = survivors particles.
/// Branches with p < 1e-14 are dropped.
struct MeasurementEnsemble {
  int survivors = 0;
  std::vector<MeasurementBranch> branches;
  /// || sum_b M_b^dagger M_b |Psi> - |Psi> ||, computed explicitly.
  double completeness_residual = 0.0;
  [[nodiscard]] double total_probability() const;
};

/// Kraus operators C(N,M)^{-1/2} C_beta over (N-M)-particle configurations
/// beta; branches ordered by the canonical rank of beta.
MeasurementEnsemble annihilation_measurement(const PureState& state, int survivors);

/// Kraus operators built from the normal operators B_nu of the
/// (M, N-M) decomposition; post-states are A_nu^dagger|0>.
MeasurementEnsemble normal_measurement(const PureState& state, int survivors);

/// Average of normalized L-body spectra over branches, sorted and zero-padded.
Spectrum average_spectrum(const MeasurementEnsemble& ensemble, int L);

/// max |rho^(L)_n - sum_b p_b rho^(L)_{b n}| over an annihilation measurement.
double verify_mixture_identity(const PureState& state, int survivors, int L);

struct MajorizationReport {
  bool holds = false;         // margin >= -1e-10
  double min_margin = 0.0;    // min_k (Q_k - P_k), P = original, Q = branch average
  std::string entropy_name;
  double entropy_before = 0.0;
  double entropy_after = 0.0;  // sum_b p_b S_b
  bool entropy_holds = false;  // before >= after - 1e-9
};

MajorizationReport check_majorization(const PureState& state, int survivors, int L,
                                      const EntropyKind& kind = EntropyKind::von_neumann());

struct TransferBranch {
  double probability = 0.0;
  Spectrum spectrum;  // normalized M-body spectrum at the target subspace
  double entropy = 0.0;
  PureState post_state;
};

struct TransferReport {
  std::vector<TransferBranch> branches;
  Spectrum initial_spectrum;  // normalized M-body spectrum of the input
  double initial_entropy = 0.0;
  double average_entropy = 0.0;
  double majorization_margin = 0.0;  // of initial below the branch average
  bool entropy_bound_holds = false;  // initial >= average - 1e-9
  bool majorization_holds = false;   // margin >= -1e-10
  double completeness_residual = 0.0;  // max |sum T^dagger T - 1|
};

/// M-particle configurations inside `subspace`, canonical over its modes.
/// This is the row/column order of transfer matrices.
std::vector<OccupationVector> subspace_configurations(Statistics statistics,
                                                      const ModeSubspace& subspace, int M);

/// Moves M particles from `source` (where the state lives) to the empty,
/// disjoint `target` with operators T_r: rows indexed by
/// subspace_configurations(target, M), columns by subspace_configurations(source, M).
TransferReport particle_transfer(const PureState& state, const ModeSubspace& source,
                                 const ModeSubspace& target, int M,
                                 const std::vector<Matrix>& transfers,
                                 const EntropyKind& kind = EntropyKind::von_neumann());

}  // namespace schmidtfock
