#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "schmidtfock/fock.hpp"
#include "schmidtfock/numerics.hpp"
#include "schmidtfock/states.hpp"

namespace schmidtfock {

/// Gamma_{alpha beta} = <0| C_beta C_alpha |Psi>. Rows are M-particle
/// configurations; columns are the (N-M)-particle configurations that occur
/// in some row, in ascending canonical rank.
struct GammaMatrix {
  Statistics statistics = Statistics::boson;
  int modes = 0;
  int particles = 0;  // N
  int removed = 0;    // M
  FockSpace row_space;
  std::vector<std::uint64_t> row_keys;  // rank of each row in row_space
  FockSpace column_space;
  std::vector<std::uint64_t> column_keys;
  Matrix entries;
  /// |Psi> = prefactor^{-1} sum Gamma_{ab} C_a^dagger C_b^dagger |0>;
  /// C(N,M) for the full matrix.
  double prefactor = 1.0;

  [[nodiscard]] OccupationVector row_occupation(std::size_t i) const {
    return row_space.unrank(row_keys[i]);
  }
  [[nodiscard]] OccupationVector column_occupation(std::size_t j) const {
    return column_space.unrank(column_keys[j]);
  }
};

/// 1 <= M <= N.
GammaMatrix build_gamma(const PureState& state, int M);

struct SchmidtDecomposition {
  Statistics statistics = Statistics::boson;
  int modes = 0;
  int particles = 0;
  int removed = 0;
  double prefactor = 1.0;
  FockSpace row_space;
  std::vector<std::uint64_t> row_keys;
  FockSpace column_space;
  std::vector<std::uint64_t> column_keys;
  Spectrum sigma;        // every singular value, descending
  std::size_t rank = 0;  // count of sigma > 1e-10 * sigma_max
  Matrix left;           // rows x rank, columns define A_nu^dagger
  Matrix right;          // columns x rank; B_nu^dagger = sum_b conj(V_b nu) C_b^dagger
};

SchmidtDecomposition schmidt_decompose(const GammaMatrix& gamma);

/// prefactor^{-1} sum_{nu<k} sigma_nu A_nu^dagger B_nu^dagger |0>, unnormalized.
FockVector expansion_sum(const SchmidtDecomposition& schmidt, std::optional<std::size_t> k = {});

/// Normalized expansion_sum. k = 0 or k > rank throws.
PureState reconstruct(const SchmidtDecomposition& schmidt, std::optional<std::size_t> k = {});

/// <a|b>.
Complex overlap(const PureState& a, const PureState& b);

enum class Side { left, right };

/// A_nu^dagger|0> (left) or B_nu^dagger|0> (right); nu is 0-based, nu < rank.
PureState normal_mode_state(const SchmidtDecomposition& schmidt, std::size_t nu, Side side);

/// A_nu |Psi> with A_nu = sum_a conj(U_a nu) C_a.
FockVector apply_normal_annihilator(const SchmidtDecomposition& schmidt, std::size_t nu,
                                    const PureState& state);

}  // namespace schmidtfock
