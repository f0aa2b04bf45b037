#include "schmidtfock/random.hpp"

#include <cmath>

#include "schmidtfock/errors.hpp"

namespace schmidtfock {

Rng Rng::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::vector<std::uint32_t> words;
  for (std::uint64_t x : {seed, a, b, c}) {
    words.push_back(static_cast<std::uint32_t>(x));
    words.push_back(static_cast<std::uint32_t>(x >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return Rng((static_cast<std::uint64_t>(out[1]) << 32) | out[0]);
}

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) throw InvalidArgument("empty integer range");
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

PureState random_state(Statistics statistics, int d, int N, Rng& rng) {
  const FockBasis basis = enumerate_basis(statistics, d, N);
  if (basis.size() == 0) throw InvalidArgument("empty basis for a random state");
  Vector a(static_cast<Eigen::Index>(basis.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = rng.complex_normal();
  return make_state(basis, a, true);
}

PureState random_sector_state(Statistics statistics, const ModeSubspace& S, int N_S, int N, Rng& rng) {
  const FockBasis basis = enumerate_basis(statistics, S.modes(), N);
  std::vector<FockVector::Entry> entries;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    int inside = 0;
    for (int k : S.members()) inside += basis[i][k];
    if (inside == N_S) entries.push_back({i, rng.complex_normal()});
  }
  if (entries.empty()) throw InvalidArgument("no configurations in the requested sector");
  return make_state(FockVector(basis.space(), std::move(entries)), true);
}

OccupationVector random_occupation(Statistics statistics, int d, int N, Rng& rng) {
  const FockSpace space(statistics, d, N);
  const std::uint64_t dim = space.dimension();
  if (dim == 0) throw InvalidArgument("empty basis for a random occupation");
  const auto index = std::uniform_int_distribution<std::uint64_t>(0, dim - 1)(rng.engine());
  return space.unrank(index);
}

namespace {

Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  }
  return g;
}

// Thin Q with R's diagonal made real positive, so the result is unique.
Matrix thin_q(const Matrix& g) {
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
  const Matrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    const Complex diag = r(j, j);
    if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

}  // namespace

Matrix random_unitary(int d, Rng& rng) {
  if (d < 1) throw InvalidArgument("unitary dimension must be positive");
  return thin_q(gaussian_matrix(d, d, rng));
}

Matrix random_hermitian(int d, Rng& rng) {
  const Matrix g = gaussian_matrix(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

std::vector<Matrix> random_kraus_family(int rows, int cols, int count, Rng& rng) {
  if (rows < 1 || cols < 1 || count < 1) throw InvalidArgument("Kraus family shape must be positive");
  if (static_cast<long long>(rows) * count < cols) {
    throw InvalidArgument("Kraus family needs count * rows >= cols");
  }
  const Matrix q = thin_q(gaussian_matrix(rows * count, cols, rng));
  std::vector<Matrix> family;
  for (int r = 0; r < count; ++r) family.push_back(q.middleRows(static_cast<Eigen::Index>(r) * rows, rows));
  return family;
}

std::vector<double> random_bcs_weights(int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("BCS weights need n >= 1");
  std::vector<double> sigma(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& s : sigma) {
    do {
      s = std::abs(rng.normal());
    } while (s < 1e-3);
    total += s * s;
  }
  for (auto& s : sigma) s /= std::sqrt(total);
  return sigma;
}

PairAmplitudes random_pair_amplitudes(Statistics statistics, int n, int m, Rng& rng) {
  PairAmplitudes pa;
  pa.basis = paired_basis(statistics, n, m);
  pa.amplitudes.resize(static_cast<Eigen::Index>(pa.basis.size()));
  for (Eigen::Index i = 0; i < pa.amplitudes.size(); ++i) pa.amplitudes[i] = rng.complex_normal();
  pa.amplitudes.normalize();
  return pa;
}

}  // namespace schmidtfock
