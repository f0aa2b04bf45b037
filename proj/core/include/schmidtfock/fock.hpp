#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace schmidtfock {

enum class Statistics { boson, fermion };

std::string_view to_string(Statistics statistics);
/// Accepts "boson"/"bosons"/"b" and "fermion"/"fermions"/"f".
Statistics parse_statistics(std::string_view text);

/// Sign of the exchange relation: +1 for bosons, -1 for fermions.
inline int exchange_sign(Statistics s) { return s == Statistics::boson ? 1 : -1; }

/// C(n, k); zero when k < 0 or k > n. Throws ResourceError on uint64 overflow.
std::uint64_t binomial(long long n, long long k);

/// Number of M-particle configurations over d modes.
std::uint64_t basis_dimension(Statistics statistics, int d, int particles);

/// Largest basis that enumerate_basis will materialize. 10^6 unless the
/// environment variable SCHMIDTFOCK_BASIS_CAP holds a positive integer.
std::size_t default_basis_cap();

/// Particle counts per mode (modes are 0-based).
class OccupationVector {
 public:
  OccupationVector() = default;
  /// Throws InvalidArgument for empty, negative, or (fermion) >1 entries.
  OccupationVector(Statistics statistics, std::vector<int> occupations);
  static OccupationVector vacuum(Statistics statistics, int d);

  [[nodiscard]] Statistics statistics() const noexcept { return statistics_; }
  [[nodiscard]] int modes() const noexcept { return static_cast<int>(occ_.size()); }
  [[nodiscard]] int total() const noexcept { return total_; }
  [[nodiscard]] int operator[](int mode) const { return occ_[static_cast<std::size_t>(mode)]; }
  [[nodiscard]] const std::vector<int>& occupations() const noexcept { return occ_; }
  /// Bit i set iff mode i is occupied; only meaningful for fermions with d <= 64.
  [[nodiscard]] std::uint64_t mask() const noexcept { return mask_; }
  /// "(1,0,2)".
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const OccupationVector& a, const OccupationVector& b) {
    return a.statistics_ == b.statistics_ && a.occ_ == b.occ_;
  }

 private:
  Statistics statistics_ = Statistics::boson;
  std::vector<int> occ_;
  int total_ = 0;
  std::uint64_t mask_ = 0;
};

/// True when `a` precedes `b` in canonical order (descending occupancy of
/// mode 0 first, then mode 1, ...).
bool canonical_less(const OccupationVector& a, const OccupationVector& b);

/// The implicit space of all N-particle configurations over d modes with
/// a combinatorial rank in canonical order. Copies share one count table.
class FockSpace {
 public:
  FockSpace() = default;
  FockSpace(Statistics statistics, int d, int particles);

  [[nodiscard]] Statistics statistics() const noexcept { return statistics_; }
  [[nodiscard]] int modes() const noexcept { return d_; }
  [[nodiscard]] int particles() const noexcept { return n_; }
  [[nodiscard]] std::uint64_t dimension() const noexcept { return dimension_; }

  /// Position of `occupations` in canonical order. Throws InvalidArgument if
  /// the configuration does not belong to this space.
  [[nodiscard]] std::uint64_t rank(std::span<const int> occupations) const;
  [[nodiscard]] std::uint64_t rank(const OccupationVector& occupation) const;
  [[nodiscard]] OccupationVector unrank(std::uint64_t index) const;
  /// Writes the configuration into `out` (size d) without allocating.
  void unrank_into(std::uint64_t index, std::span<int> out) const;

  /// Count of configurations of `particles` over the trailing `modes` modes.
  [[nodiscard]] std::uint64_t count(int modes, int particles) const noexcept {
    return table_[static_cast<std::size_t>(modes) * static_cast<std::size_t>(n_ + 1) +
                  static_cast<std::size_t>(particles)];
  }

  friend bool operator==(const FockSpace& a, const FockSpace& b) {
    return a.statistics_ == b.statistics_ && a.d_ == b.d_ && a.n_ == b.n_;
  }

 private:
  Statistics statistics_ = Statistics::boson;
  int d_ = 0;
  int n_ = 0;
  std::uint64_t dimension_ = 0;
  std::shared_ptr<const std::vector<std::uint64_t>> table_holder_;
  const std::uint64_t* table_ = nullptr;
};

/// Materialized canonical list of a FockSpace; index_of(x) == space.rank(x).
class FockBasis {
 public:
  FockBasis() = default;

  [[nodiscard]] const FockSpace& space() const noexcept { return space_; }
  [[nodiscard]] Statistics statistics() const noexcept { return space_.statistics(); }
  [[nodiscard]] int modes() const noexcept { return space_.modes(); }
  [[nodiscard]] int particles() const noexcept { return space_.particles(); }
  [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
  [[nodiscard]] bool empty() const noexcept { return states_.empty(); }
  [[nodiscard]] const OccupationVector& operator[](std::size_t i) const { return states_[i]; }
  [[nodiscard]] const std::vector<OccupationVector>& states() const noexcept { return states_; }
  [[nodiscard]] std::size_t index_of(const OccupationVector& occupation) const;

  [[nodiscard]] auto begin() const noexcept { return states_.begin(); }
  [[nodiscard]] auto end() const noexcept { return states_.end(); }

  friend bool operator==(const FockBasis& a, const FockBasis& b) { return a.space_ == b.space_; }

 private:
  friend FockBasis enumerate_basis(Statistics, int, int, std::size_t);
  FockSpace space_;
  std::vector<OccupationVector> states_;
};

/// All M-particle configurations over d modes in canonical order. Throws
/// ResourceError when the dimension exceeds `cap`.
FockBasis enumerate_basis(Statistics statistics, int d, int particles,
                          std::size_t cap = default_basis_cap());

struct MergedOccupation {
  OccupationVector occupation;
  double coefficient = 0.0;
};

/// C_alpha^dagger C_beta^dagger |0> = coefficient * |alpha + beta>, or nullopt
/// when the product vanishes (a fermion mode occupied twice).
std::optional<MergedOccupation> merge_occupations(const OccupationVector& alpha,
                                                  const OccupationVector& beta);

/// Raw-array form of merge_occupations' coefficient; assumes compatible input
/// and no double fermion occupancy.
double merge_coefficient(Statistics statistics, std::span<const int> alpha,
                         std::span<const int> beta);

}  // namespace schmidtfock
