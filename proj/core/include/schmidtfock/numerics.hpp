#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace schmidtfock {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Tolerance ledger shared by every module.
namespace tol {
inline constexpr double construction = 1e-12;   // exact-by-construction checks
inline constexpr double identity = 1e-10;       // algebraic identities, unit norms
inline constexpr double decomposition = 1e-9;   // eigen/SVD residuals
inline constexpr double spectrum = 1e-8;        // spectra compared across routes
inline constexpr double eigenvalue_floor = -1e-9;
inline constexpr double majorization_slack = 1e-10;
inline constexpr double rank_relative = 1e-10;  // sigma > rank_relative * sigma_max
inline constexpr double branch_cutoff = 1e-14;  // measurement branches below are dropped
}  // namespace tol

/// Real values sorted in descending order.
struct Spectrum {
  std::vector<double> values;
  double tolerance = tol::spectrum;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] double sum() const noexcept;
  [[nodiscard]] double max() const noexcept { return values.empty() ? 0.0 : values.front(); }
  /// Values strictly above `threshold`.
  [[nodiscard]] std::vector<double> above(double threshold) const;
};

struct EigenDecomposition {
  Spectrum spectrum;
  Matrix vectors;  // column j belongs to spectrum.values[j]
};

struct SingularValueDecomposition {
  Matrix u;
  Spectrum sigma;
  Matrix v;  // A = U diag(sigma) V^dagger
};

/// Hermitian eigendecomposition, eigenvalues descending.
///
/// Degenerate eigenvalues are ordered by the row index of the dominant
/// component of their eigenvector, and every eigenvector is rephased so that
/// its dominant component is real positive. Throws NumericalError when the
/// input is not Hermitian within 1e-9 (relative to its largest entry).
EigenDecomposition hermitian_eigen(const Matrix& matrix);

/// Thin SVD with descending singular values and the same tie/phase rule as
/// hermitian_eigen applied to the left vectors.
SingularValueDecomposition svd(const Matrix& matrix);

/// Lowest eigenpair of a real symmetric matrix (dense LAPACK, selected pair).
struct LowestEigenpair {
  double value = 0.0;
  RealVector vector;
};
LowestEigenpair lowest_eigenpair(const RealMatrix& matrix);

/// Entropy functional selector. Von Neumann uses log base 2.
class EntropyKind {
 public:
  enum class Tag { von_neumann, linear, trace_form };

  static EntropyKind von_neumann() { return EntropyKind(Tag::von_neumann, {}, "von_neumann"); }
  static EntropyKind linear() { return EntropyKind(Tag::linear, {}, "linear"); }
  /// S_f = sum_i f(p_i); f is expected concave with f(0) = f(1) = 0.
  static EntropyKind trace_form(std::function<double(double)> f, std::string name = "trace_form") {
    return EntropyKind(Tag::trace_form, std::move(f), std::move(name));
  }
  /// "von_neumann" / "vn" / "linear"; throws InvalidArgument otherwise.
  static EntropyKind parse(std::string_view name);

  [[nodiscard]] Tag tag() const noexcept { return tag_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] double term(double p) const;

 private:
  EntropyKind(Tag tag, std::function<double(double)> f, std::string name)
      : tag_(tag), f_(std::move(f)), name_(std::move(name)) {}

  Tag tag_;
  std::function<double(double)> f_;
  std::string name_;
};

/// Entropy of a probability list (must sum to 1 within 1e-6). Entries in
/// [-1e-9, 0) are clamped to zero; anything more negative throws.
double entropy(std::span<const double> probabilities, const EntropyKind& kind);
double entropy(const Spectrum& probabilities, const EntropyKind& kind);

enum class MajorizationRelation { equal, majorized_by, majorizes, incomparable };
std::string_view to_string(MajorizationRelation relation);

struct MajorizationResult {
  /// `majorized_by` means p ≺ q (every partial sum of p is below that of q).
  MajorizationRelation relation = MajorizationRelation::equal;
  /// min_k (Q_k - P_k) over partial sums; >= -slack iff p ≺ q.
  double margin_p_below_q = 0.0;
  /// min_k (P_k - Q_k); >= -slack iff q ≺ p.
  double margin_q_below_p = 0.0;
};

/// Compares descending partial sums of two spectra with equal totals
/// (within 1e-8). The shorter list is zero padded.
MajorizationResult majorization_compare(const Spectrum& p, const Spectrum& q,
                                        double slack = tol::majorization_slack);

/// Sorts values descending (copy).
Spectrum make_spectrum(std::vector<double> values, double tolerance = tol::spectrum);

/// Max |A_ij - conj(A_ji)|.
double hermiticity_defect(const Matrix& matrix);

}  // namespace schmidtfock
