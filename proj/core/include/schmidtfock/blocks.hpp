#pragma once

#include <optional>
#include <vector>

#include "schmidtfock/bipartite.hpp"
#include "schmidtfock/fock.hpp"
#include "schmidtfock/numerics.hpp"
#include "schmidtfock/states.hpp"

namespace schmidtfock {

/// A proper nonempty subset S of the d modes; the complement is implied.
class ModeSubspace {
 public:
  /// Sorts and deduplicates; throws unless S is nonempty and strictly smaller than d.
  ModeSubspace(std::vector<int> members, int d);
  /// Modes 0..k-1.
  static ModeSubspace leading(int k, int d);

  [[nodiscard]] const std::vector<int>& members() const noexcept { return members_; }
  [[nodiscard]] std::vector<int> complement_members() const;
  [[nodiscard]] ModeSubspace complement() const { return ModeSubspace(complement_members(), d_); }
  [[nodiscard]] int modes() const noexcept { return d_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(members_.size()); }
  [[nodiscard]] bool contains(int mode) const;

 private:
  std::vector<int> members_;
  int d_ = 0;
};

/// Particle count in S shared by every amplitude above `tolerance`, or nullopt.
std::optional<int> sector_number(const PureState& state, const ModeSubspace& S,
                                 double tolerance = tol::construction);

/// The (m, l) block of rho^(M) for a state with definite N_S.
struct SectorBlock {
  int m = 0;  // particles in S
  int l = 0;  // particles in the complement
  std::vector<OccupationVector> basis;  // (S part, complement part) lexicographic
  Matrix matrix;
  /// C(N_S, m) * C(N_Sbar, l).
  double expected_trace = 0.0;
};

/// Blocks for max(0, M - N_Sbar) <= m <= min(M, N_S); throws InvalidArgument
/// when the state does not conserve N_S.
std::vector<SectorBlock> blocked_rdm(const PureState& state, const ModeSubspace& S, int M,
                                     double sector_tolerance = tol::construction);

/// A single (m, l) block of rho^(m+l).
SectorBlock sector_block(const PureState& state, const ModeSubspace& S, int m, int l,
                         double sector_tolerance = tol::construction);

/// Gamma^(m,l): rows are the (m, l) sector basis, prefactor C(N_S,m) C(N_Sbar,l).
GammaMatrix sector_gamma(const PureState& state, const ModeSubspace& S, int m, int l,
                         double sector_tolerance = tol::construction);

/// sum_{nu<k} A_nu^dagger A_nu |Psi> over eigenvectors of a block, divided by
/// the sector prefactor; all block eigenvectors when k is absent.
FockVector sector_expansion_sum(const PureState& state, const ModeSubspace& S, int m, int l,
                                std::optional<std::size_t> k = {},
                                double sector_tolerance = tol::construction);

/// Normalized sector_expansion_sum; k = 0 throws.
PureState sector_reconstruct(const PureState& state, const ModeSubspace& S, int m, int l,
                             std::optional<std::size_t> k = {},
                             double sector_tolerance = tol::construction);

/// S of the normalized N_S-body local density in S.
double bipartite_entanglement(const PureState& state, const ModeSubspace& S,
                              const EntropyKind& kind,
                              double sector_tolerance = tol::construction);

/// Bijection k <-> kbar between a subspace S and its complement.
class ModePairing {
 public:
  /// unbarred[i] is paired with barred[i]; together they must cover all d
  /// modes exactly once.
  ModePairing(std::vector<int> unbarred, std::vector<int> barred, int d);
  /// k <-> n + k for k = 0..n-1.
  static ModePairing standard(int n);

  [[nodiscard]] const std::vector<int>& unbarred() const noexcept { return unbarred_; }
  [[nodiscard]] const std::vector<int>& barred() const noexcept { return barred_; }
  [[nodiscard]] int pairs() const noexcept { return static_cast<int>(unbarred_.size()); }
  [[nodiscard]] int modes() const noexcept { return d_; }
  [[nodiscard]] ModeSubspace subspace() const { return ModeSubspace(unbarred_, d_); }
  /// The two-particle configuration with one particle in k and one in kbar.
  [[nodiscard]] OccupationVector pair_occupation(Statistics statistics, int pair) const;

 private:
  std::vector<int> unbarred_;
  std::vector<int> barred_;
  int d_ = 0;
};

struct CollectivePairBlock {
  /// entry (p, q) = <C_q^dagger C_p>, C_p the annihilation product of pair p
  /// (c_pbar c_p when pbar > p).
  Matrix matrix;
  Spectrum spectrum;
  [[nodiscard]] double dominant() const { return spectrum.max(); }
};

CollectivePairBlock collective_pair_block(const PureState& state, const ModePairing& pairing);

/// mu^{-1} sum_{nu<k} A_nu^dagger A_nu |Psi> over the collective block, where
/// mu is the pair-number eigenvalue; fermions only. Throws InvalidArgument
/// when the state is not a pair-number eigenstate within 1e-9.
FockVector pair_expansion_sum(const PureState& state, const ModePairing& pairing,
                              std::optional<std::size_t> k = {});
PureState pair_expansion(const PureState& state, const ModePairing& pairing,
                         std::optional<std::size_t> k = {});

}  // namespace schmidtfock
