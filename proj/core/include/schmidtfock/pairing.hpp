#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schmidtfock/blocks.hpp"
#include "schmidtfock/fock.hpp"
#include "schmidtfock/numerics.hpp"
#include "schmidtfock/states.hpp"

namespace schmidtfock {

/// n pair levels (k, kbar) over d = 2n modes, with kbar = n + k, holding
/// m pairs. Level energies are epsilon * (k + 1 - (n + 1) / 2).
struct PairingModel {
  Statistics statistics = Statistics::fermion;
  int n = 1;
  int m = 0;
  double epsilon = 1.0;
  RealMatrix coupling;  // n x n, symmetric, nonnegative

  static PairingModel uniform(Statistics statistics, int n, int m, double epsilon, double G);
  [[nodiscard]] double level_energy(int k) const;
  /// Throws InvalidArgument when the invariants fail.
  void validate() const;
};

/// Coefficients over pair configurations (m_1..m_n), sum m_k = m.
struct PairAmplitudes {
  FockBasis basis;  // n modes, m particles, same statistics
  Vector amplitudes;

  [[nodiscard]] Statistics statistics() const noexcept { return basis.statistics(); }
  [[nodiscard]] int pair_levels() const noexcept { return basis.modes(); }
  [[nodiscard]] int pairs() const noexcept { return basis.particles(); }
};

FockBasis paired_basis(Statistics statistics, int n, int m);

/// Fock configuration and sign of prod_k (c_k^dagger c_kbar^dagger)^{m_k} / m_k! |0>.
struct PairedFockState {
  OccupationVector occupation;  // 2n modes
  double sign = 1.0;
};
PairedFockState embed_pair_configuration(const OccupationVector& pair_occupation);

/// sum_alpha Gamma_alpha |m_1..m_n> over 2n modes (N = 2m).
PureState embed_paired_state(const PairAmplitudes& pa);

/// Matrix of H in paired_basis, assembled by applying every term of H to each
/// embedded configuration. Real symmetric.
RealMatrix pairing_hamiltonian(const PairingModel& model);

struct GroundState {
  double energy = 0.0;
  PairAmplitudes state;
};
/// Lowest eigenpair; the largest-magnitude amplitude is made positive.
GroundState ground_state(const PairingModel& model);

PairAmplitudes uniform_paired_state(Statistics statistics, int n, int m);

/// Amplitudes prod_k sigma_k^{m_k}, normalized. sigma >= 0 with sum sigma^2 = 1
/// (within 1e-10).
PairAmplitudes projected_bcs_state(Statistics statistics, const std::vector<double>& sigma, int m);

/// <Psi| A^dagger A |Psi> with A^dagger = sum_k w_k c_k^dagger c_kbar^dagger.
double pair_operator_expectation(const PureState& state, const std::vector<double>& weights);

/// m +- (m-1) sum_k w_k^2 <n_k> for a state built with the same weights.
double pair_expectation_formula(const PureState& state, const std::vector<double>& weights);

struct DominanceReport {
  double lambda1 = 0.0;  // largest eigenvalue of the (1,1) block of rho^(2)
  double lower = 0.0;
  double upper = 0.0;  // +inf for bosons
  bool holds = false;  // within 1e-9
};
/// Bosons: lambda1 >= m(1 + (m-1)/n). Fermions: 1 <= lambda1 <= m(1 - (m-1)/n).
DominanceReport dominance_bounds(const PairAmplitudes& pa);

/// Observables per grid point.
enum class Observable { spectrum1, spectrum2_blocks, entropy_increments, block_entropies, overlaps };
Observable parse_observable(std::string_view name);

struct SweepOptions {
  std::vector<double> g_grid;
  std::vector<Observable> observables;
  std::vector<std::size_t> overlap_terms{1};
  int jobs = 1;
};

/// 60 log-spaced points in [1e-2, 1e2] preceded by g = 0.
std::vector<double> default_g_grid();
/// "default", "log:a:b:count" (optionally "+0"), or a comma list.
std::vector<double> parse_g_grid(std::string_view spec);

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  [[nodiscard]] std::size_t column(std::string_view name) const;
  /// Header line plus rows, 12 significant digits, comma separated.
  [[nodiscard]] std::string to_csv() const;
  [[nodiscard]] std::string to_json() const;
};

/// Per-point data derived from a ground state.
struct PairedObservables {
  double g = 0.0;
  double energy = 0.0;
  std::vector<double> lambda1;        // rho^(1) block in S
  std::vector<double> lambda2_s;      // rho^(2) block (2,0)
  std::vector<double> lambda2_ssbar;  // rho^(2) block (1,1)
  std::vector<double> lambda2_c;      // collective pair block
  double s1 = 0.0, s2_s = 0.0, s2_ssbar = 0.0, s2_c = 0.0;  // normalized-block entropies
  std::vector<double> overlaps;       // |<Psi|Psi_k>| per requested k
};

/// Overlaps use the pair expansion for fermions and the (1,1) sector
/// expansion for bosons.
PairedObservables analyze_ground_state(const PairingModel& model, const GroundState& gs,
                                       const std::vector<std::size_t>& overlap_terms,
                                       bool want_spectra, bool want_entropies);

/// At each g the coupling shape (normalized to unit maximum; uniform when
/// empty) is scaled to g * epsilon.
SweepTable sweep(const PairingModel& model, const SweepOptions& options);

}  // namespace schmidtfock
