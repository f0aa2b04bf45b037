#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "schmidtfock/blocks.hpp"
#include "schmidtfock/fock.hpp"
#include "schmidtfock/pairing.hpp"
#include "schmidtfock/states.hpp"

namespace schmidtfock {

/// Seeded generator; identical seeds give identical streams on one build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream for (seed, a, b, c), e.g. suite / statistics / instance.
  static Rng derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

  double normal();
  Complex complex_normal();  // E|z|^2 = 1
  double uniform();          // [0, 1)
  int uniform_int(int lo, int hi);  // inclusive
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Complex-Gaussian amplitudes over the full basis, normalized.
PureState random_state(Statistics statistics, int d, int N, Rng& rng);

/// Complex-Gaussian amplitudes over configurations with exactly N_S
/// particles in S, normalized.
PureState random_sector_state(Statistics statistics, const ModeSubspace& S, int N_S, int N, Rng& rng);

/// Uniformly drawn basis configuration.
OccupationVector random_occupation(Statistics statistics, int d, int N, Rng& rng);

/// Haar-distributed via QR of a complex Gaussian matrix.
Matrix random_unitary(int d, Rng& rng);
Matrix random_hermitian(int d, Rng& rng);

/// `count` rows x cols matrices T_r with sum_r T_r^dagger T_r = 1, the row
/// blocks of an isometry. Requires count * rows >= cols.
std::vector<Matrix> random_kraus_family(int rows, int cols, int count, Rng& rng);

/// Positive weights with sum sigma^2 = 1.
std::vector<double> random_bcs_weights(int n, Rng& rng);

/// Pair amplitudes drawn like random_state over paired_basis.
PairAmplitudes random_pair_amplitudes(Statistics statistics, int n, int m, Rng& rng);

}  // namespace schmidtfock
