#pragma once

// Sparse construction of Gamma rows: every (alpha, beta) split of every
// nonzero amplitude, with the annihilation matrix element folded in.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "schmidtfock/fock.hpp"
#include "schmidtfock/numerics.hpp"
#include "schmidtfock/states.hpp"

namespace schmidtfock::detail {

/// Row labels of a Gamma matrix: either every M-particle configuration
/// (canonical order) or the (m, l) sector of a mode subspace S, ordered as
/// lexicographic pairs (S part, complement part).
class SectorLayout {
 public:
  /// With enforce_cap false the layout is never materialized, only indexed.
  static SectorLayout full(Statistics statistics, int d, int particles, bool enforce_cap = true);
  /// `subspace` sorted, nonempty, strictly inside 0..d-1.
  static SectorLayout sector(Statistics statistics, int d, std::vector<int> subspace, int m,
                             int l);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] int particles() const noexcept { return m_ + l_; }
  [[nodiscard]] int modes() const noexcept { return d_; }
  [[nodiscard]] Statistics statistics() const noexcept { return statistics_; }
  [[nodiscard]] const FockSpace& space() const noexcept { return row_space_; }

  /// Row of a full-length configuration belonging to this layout.
  [[nodiscard]] std::size_t index(std::span<const int> alpha) const;
  [[nodiscard]] OccupationVector occupation(std::size_t row) const;
  [[nodiscard]] std::vector<OccupationVector> occupations() const;
  /// Rank of row `row` in the M-particle space over all d modes.
  [[nodiscard]] std::uint64_t key(std::size_t row) const;

  /// Calls visit(row, alpha) for every sub-configuration alpha <= occ in this
  /// layout. `alpha` is only valid during the call.
  void for_each_sub(std::span<const int> occ,
                    const std::function<void(std::size_t, std::span<const int>)>& visit) const;

 private:
  Statistics statistics_ = Statistics::boson;
  int d_ = 0;
  int m_ = 0;
  int l_ = 0;
  std::vector<char> in_s_;           // per mode
  std::vector<int> s_modes_, c_modes_;
  std::optional<FockSpace> s_space_, c_space_;
  FockSpace row_space_;
  std::size_t size_ = 0;
};

struct Triplet {
  std::uint64_t row = 0;
  std::uint64_t column = 0;  // rank in the remnant space
  Complex value;
};

struct RowSet {
  FockSpace remnant_space;
  std::vector<Triplet> triplets;  // sorted by (column, row)
};

/// Gamma_{alpha beta} = <beta| C_alpha |state> for alpha in `layout`.
RowSet annihilation_rows(const FockVector& state, const SectorLayout& layout);

/// Gamma Gamma^dagger (rows x rows).
Matrix gram(const RowSet& rows, std::size_t row_count);

/// Dense Gamma restricted to occupied columns; returns the ascending column keys.
Matrix dense_gamma(const RowSet& rows, std::size_t row_count,
                   std::vector<std::uint64_t>& column_keys);

/// sum_alpha weights_alpha C_alpha |state> as a vector over the remnant space.
FockVector combine_rows(const RowSet& rows, const Vector& weights);

/// sum_alpha weights_alpha C_alpha^dagger |remnant>.
FockVector create_rows(const SectorLayout& layout, const Vector& weights,
                       const FockVector& remnant);

}  // namespace schmidtfock::detail
