#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "schmidtfock/fock.hpp"
#include "schmidtfock/numerics.hpp"

namespace schmidtfock {

/// Sparse complex vector over a FockSpace, keyed by canonical rank. Entries
/// are sorted by key and unique; exact zeros are omitted. Intermediate
/// vectors (Gamma rows, measurement branches) are FockVectors and carry no
/// normalization guarantee.
class FockVector {
 public:
  struct Entry {
    std::uint64_t key = 0;
    Complex value;
  };

  FockVector() = default;
  explicit FockVector(FockSpace space) : space_(std::move(space)) {}
  /// Duplicated keys are summed.
  FockVector(FockSpace space, std::vector<Entry> entries);

  static FockVector basis_state(const OccupationVector& occupation, Complex value = 1.0);
  /// `amplitudes` indexed like `basis`.
  static FockVector from_dense(const FockBasis& basis, const Vector& amplitudes);

  [[nodiscard]] const FockSpace& space() const noexcept { return space_; }
  [[nodiscard]] Statistics statistics() const noexcept { return space_.statistics(); }
  [[nodiscard]] int modes() const noexcept { return space_.modes(); }
  [[nodiscard]] int particles() const noexcept { return space_.particles(); }
  [[nodiscard]] std::span<const Entry> entries() const noexcept { return entries_; }
  [[nodiscard]] std::size_t nonzeros() const noexcept { return entries_.size(); }

  [[nodiscard]] Complex amplitude(const OccupationVector& occupation) const;
  [[nodiscard]] Complex amplitude_at(std::uint64_t key) const;
  [[nodiscard]] double squared_norm() const;
  [[nodiscard]] double norm() const;
  /// <this|other>; spaces must agree.
  [[nodiscard]] Complex dot(const FockVector& other) const;
  [[nodiscard]] Vector to_dense(const FockBasis& basis) const;

  FockVector& operator*=(Complex factor);
  friend FockVector operator+(const FockVector& a, const FockVector& b);
  friend FockVector operator-(const FockVector& a, const FockVector& b);
  friend FockVector operator*(Complex factor, FockVector v) { return v *= factor; }

 private:
  FockSpace space_;
  std::vector<Entry> entries_;
};

/// Hash-map accumulator producing a FockVector.
class FockAccumulator {
 public:
  explicit FockAccumulator(FockSpace space) : space_(std::move(space)) {}
  void add(std::uint64_t key, Complex value) { map_[key] += value; }
  void add(std::span<const int> occupations, Complex value) { add(space_.rank(occupations), value); }
  void add(const FockVector& v, Complex factor = 1.0);
  [[nodiscard]] const FockSpace& space() const noexcept { return space_; }
  [[nodiscard]] FockVector finish() const;

 private:
  FockSpace space_;
  std::unordered_map<std::uint64_t, Complex> map_;
};

/// Unit-norm N-particle state (within 1e-10).
class PureState {
 public:
  PureState() = default;

  [[nodiscard]] const FockVector& vector() const noexcept { return vector_; }
  [[nodiscard]] const FockSpace& space() const noexcept { return vector_.space(); }
  [[nodiscard]] Statistics statistics() const noexcept { return vector_.statistics(); }
  [[nodiscard]] int modes() const noexcept { return vector_.modes(); }
  [[nodiscard]] int particles() const noexcept { return vector_.particles(); }
  [[nodiscard]] std::span<const FockVector::Entry> entries() const noexcept {
    return vector_.entries();
  }
  [[nodiscard]] Complex amplitude(const OccupationVector& occupation) const {
    return vector_.amplitude(occupation);
  }
  [[nodiscard]] Vector to_dense(const FockBasis& basis) const { return vector_.to_dense(basis); }

 private:
  friend PureState make_state(FockVector amplitudes, bool normalize);
  FockVector vector_;
};

/// Throws InvalidArgument on zero norm, or when `normalize` is false and the
/// input is not unit norm within 1e-10.
PureState make_state(FockVector amplitudes, bool normalize = true);
PureState make_state(const FockBasis& basis, const Vector& amplitudes, bool normalize = true);

/// In-place single ladder steps on a raw configuration; return the matrix
/// element, or nullopt when the result vanishes (occupation left unchanged).
std::optional<double> annihilate_in_place(Statistics statistics, std::span<int> occupations,
                                          int mode);
std::optional<double> create_in_place(Statistics statistics, std::span<int> occupations, int mode);

FockVector apply_annihilator(const FockVector& v, int mode);
FockVector apply_creator(const FockVector& v, int mode);
/// C_alpha |v>, with C_alpha = prod_i c_i^{a_i} / sqrt(a_i!) (adjoint of the
/// ascending creation string).
FockVector apply_annihilation_product(const FockVector& v, const OccupationVector& alpha);
/// C_alpha^dagger |v>.
FockVector apply_creation_product(const FockVector& v, const OccupationVector& alpha);
/// sum_{alpha,beta} left_alpha right_beta C_alpha^dagger C_beta^dagger |0>.
FockVector compose_product_state(const FockVector& left, const FockVector& right);

/// d x d unitary acting on creation operators as c_i^dagger -> sum_k U_ki c_k^dagger.
class SpUnitary {
 public:
  /// Throws InvalidArgument if U^dagger U deviates from 1 by more than 1e-10.
  explicit SpUnitary(Matrix matrix);
  /// exp(-i h) for Hermitian h.
  static SpUnitary from_generator(const Matrix& h);

  [[nodiscard]] const Matrix& matrix() const noexcept { return u_; }
  [[nodiscard]] int modes() const noexcept { return static_cast<int>(u_.rows()); }

 private:
  Matrix u_;
};

FockVector apply_sp_unitary(const FockVector& v, const SpUnitary& u);
PureState apply_sp_unitary(const PureState& state, const SpUnitary& u);

}  // namespace schmidtfock
