#include "schmidtfock/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <lapacke.h>

#include "schmidtfock/errors.hpp"

namespace schmidtfock {

double Spectrum::sum() const noexcept {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

std::vector<double> Spectrum::above(double threshold) const {
  std::vector<double> out;
  for (double v : values) {
    if (v > threshold) out.push_back(v);
  }
  return out;
}

Spectrum make_spectrum(std::vector<double> values, double tolerance) {
  std::sort(values.begin(), values.end(), std::greater<>());
  return Spectrum{std::move(values), tolerance};
}

double hermiticity_defect(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols()) return std::numeric_limits<double>::infinity();
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

Eigen::Index dominant_row(const Matrix& vectors, Eigen::Index column) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    const double a = std::abs(vectors(i, column));
    if (a > best_abs + 1e-12) {
      best_abs = a;
      best = i;
    }
  }
  return best;
}

// Orders columns by value (descending), breaks ties within `tie_tolerance`
// by dominant row, and rephases so the dominant component is real positive.
// The same column permutation and phases are applied to `partner` if given.
void canonicalize(std::vector<double>& values, Matrix& vectors, Matrix* partner,
                  double tie_tolerance) {
  const auto n = static_cast<Eigen::Index>(values.size());
  std::vector<Eigen::Index> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values[a] > values[b]; });

  // Group near-equal values, then sort each group by dominant row.
  std::vector<Eigen::Index> dominant(values.size());
  for (Eigen::Index j = 0; j < n; ++j) dominant[j] = dominant_row(vectors, j);
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() &&
           std::abs(values[order[end]] - values[order[start]]) <= tie_tolerance) {
      ++end;
    }
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                     order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](Eigen::Index a, Eigen::Index b) { return dominant[a] < dominant[b]; });
    start = end;
  }

  std::vector<double> sorted_values(values.size());
  Matrix sorted(vectors.rows(), vectors.cols());
  Matrix sorted_partner;
  if (partner != nullptr) sorted_partner.resize(partner->rows(), partner->cols());
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    sorted_values[static_cast<std::size_t>(j)] = values[static_cast<std::size_t>(src)];
    const Complex pivot = vectors(dominant[static_cast<std::size_t>(src)], src);
    const Complex phase = std::abs(pivot) > 0.0 ? std::conj(pivot) / std::abs(pivot) : Complex(1.0);
    sorted.col(j) = vectors.col(src) * phase;
    if (partner != nullptr) sorted_partner.col(j) = partner->col(src) * phase;
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted);
  if (partner != nullptr) *partner = std::move(sorted_partner);
}

}  // namespace

EigenDecomposition hermitian_eigen(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw InvalidArgument("hermitian_eigen: matrix is not square");
  }
  if (matrix.size() == 0) return {};
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if (hermiticity_defect(matrix) > tol::decomposition * scale) {
    throw NumericalError("hermitian_eigen: matrix is not Hermitian within tolerance");
  }
  const Matrix symmetric = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eigen: eigensolver did not converge");
  }
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  Matrix vectors = solver.eigenvectors();
  canonicalize(values, vectors, nullptr, tol::spectrum * scale);
  return {Spectrum{std::move(values), tol::spectrum}, std::move(vectors)};
}

SingularValueDecomposition svd(const Matrix& matrix) {
  if (matrix.size() == 0) return {};
  if (!matrix.allFinite()) throw InvalidArgument("svd: matrix has non-finite entries");
  Eigen::BDCSVD<Matrix> solver(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) throw NumericalError("svd: decomposition failed");
  const auto& s = solver.singularValues();
  std::vector<double> values(s.data(), s.data() + s.size());
  Matrix u = solver.matrixU();
  Matrix v = solver.matrixV();
  const double scale = std::max(1.0, values.empty() ? 0.0 : values.front());
  canonicalize(values, u, &v, tol::spectrum * scale);
  return {std::move(u), Spectrum{std::move(values), tol::spectrum}, std::move(v)};
}

LowestEigenpair lowest_eigenpair(const RealMatrix& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw InvalidArgument("lowest_eigenpair: matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > tol::decomposition * scale) {
    throw NumericalError("lowest_eigenpair: matrix is not symmetric within tolerance");
  }
  const auto n = static_cast<lapack_int>(matrix.rows());
  RealMatrix work = 0.5 * (matrix + matrix.transpose());
  std::vector<double> w(static_cast<std::size_t>(n));
  RealVector z(n);
  std::vector<lapack_int> support(2);
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, work.data(), n, 0.0, 0.0, 1, 1, 0.0,
                     &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != 1) {
    throw NumericalError("lowest_eigenpair: LAPACK dsyevr failed");
  }
  return {w[0], std::move(z)};
}

EntropyKind EntropyKind::parse(std::string_view name) {
  if (name == "von_neumann" || name == "vn" || name == "vonneumann") return von_neumann();
  if (name == "linear") return linear();
  throw InvalidArgument("unknown entropy kind: " + std::string(name));
}

double EntropyKind::term(double p) const {
  switch (tag_) {
    case Tag::von_neumann:
      return p > 0.0 ? -p * std::log2(p) : 0.0;
    case Tag::linear:
      return p - p * p;
    case Tag::trace_form:
      return f_(p);
  }
  return 0.0;
}

double entropy(std::span<const double> probabilities, const EntropyKind& kind) {
  double total = 0.0;
  for (double p : probabilities) {
    if (p < tol::eigenvalue_floor) {
      throw NumericalError("entropy: negative probability below floor");
    }
    total += std::max(p, 0.0);
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw InvalidArgument("entropy: probabilities do not sum to 1");
  }
  double s = 0.0;
  for (double p : probabilities) s += kind.term(std::max(p, 0.0));
  return s;
}

double entropy(const Spectrum& probabilities, const EntropyKind& kind) {
  return entropy(std::span<const double>(probabilities.values), kind);
}

std::string_view to_string(MajorizationRelation relation) {
  switch (relation) {
    case MajorizationRelation::equal: return "equal";
    case MajorizationRelation::majorized_by: return "majorized_by";
    case MajorizationRelation::majorizes: return "majorizes";
    case MajorizationRelation::incomparable: return "incomparable";
  }
  return "unknown";
}

MajorizationResult majorization_compare(const Spectrum& p, const Spectrum& q, double slack) {
  if (std::abs(p.sum() - q.sum()) > tol::spectrum) {
    throw InvalidArgument("majorization_compare: totals differ");
  }
  std::vector<double> a = p.values;
  std::vector<double> b = q.values;
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  const std::size_t n = std::max(a.size(), b.size());
  a.resize(n, 0.0);
  b.resize(n, 0.0);
  MajorizationResult result;
  result.margin_p_below_q = n == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  result.margin_q_below_p = result.margin_p_below_q;
  double pa = 0.0;
  double qb = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    pa += a[k];
    qb += b[k];
    result.margin_p_below_q = std::min(result.margin_p_below_q, qb - pa);
    result.margin_q_below_p = std::min(result.margin_q_below_p, pa - qb);
  }
  const bool p_below = result.margin_p_below_q >= -slack;
  const bool q_below = result.margin_q_below_p >= -slack;
  if (p_below && q_below) {
    result.relation = MajorizationRelation::equal;
  } else if (p_below) {
    result.relation = MajorizationRelation::majorized_by;
  } else if (q_below) {
    result.relation = MajorizationRelation::majorizes;
  } else {
    result.relation = MajorizationRelation::incomparable;
  }
  return result;
}

}  // namespace schmidtfock
