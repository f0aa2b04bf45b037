#include "schmidtfock/rdm.hpp"

#include <algorithm>

#include "annihilation_rows.hpp"
#include "schmidtfock/errors.hpp"

namespace schmidtfock {

ReducedDensityMatrix rdm(const PureState& state, int M) {
  const int N = state.particles();
  if (M < 1 || M > N) throw InvalidArgument("rdm: need 0 < M <= N");
  const auto layout = detail::SectorLayout::full(state.statistics(), state.modes(), M);
  const auto rows = detail::annihilation_rows(state.vector(), layout);
  ReducedDensityMatrix out;
  out.basis = enumerate_basis(state.statistics(), state.modes(), M);
  out.source_particles = N;
  out.matrix = detail::gram(rows, layout.size());
  return out;
}

ReducedDensityMatrix normalized(const ReducedDensityMatrix& rho) {
  if (rho.normalized) return rho;
  ReducedDensityMatrix out = rho;
  out.matrix /= static_cast<double>(binomial(rho.source_particles, rho.particles()));
  out.normalized = true;
  return out;
}

std::vector<double> fock_rdm_spectrum(const OccupationVector& beta, int M) {
  if (M < 0 || M > beta.total()) throw InvalidArgument("fock_rdm_spectrum: need M <= N");
  std::vector<double> values;
  if (M == 0) return {1.0};
  const auto layout = detail::SectorLayout::full(beta.statistics(), beta.modes(), M);
  layout.for_each_sub(beta.occupations(), [&](std::size_t, std::span<const int> alpha) {
    double v = 1.0;
    for (int i = 0; i < beta.modes(); ++i) {
      v *= static_cast<double>(binomial(beta[i], alpha[static_cast<std::size_t>(i)]));
    }
    values.push_back(v);
  });
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

ReducedDensityMatrix reduce(const ReducedDensityMatrix& rho, int L) {
  const int M = rho.particles();
  const int N = rho.source_particles;
  if (L > M) throw InvalidArgument("reduce: L must not exceed M");
  if (L < 1) throw InvalidArgument("reduce: L must be positive");
  Matrix raw = rho.matrix;
  if (rho.normalized) raw *= static_cast<double>(binomial(N, M));
  ReducedDensityMatrix out;
  out.basis = enumerate_basis(rho.basis.statistics(), rho.basis.modes(), L);
  out.source_particles = N;
  if (L == M) {
    out.matrix = raw;
    return out;
  }
  const Statistics st = rho.basis.statistics();
  const auto layout = detail::SectorLayout::full(st, rho.basis.modes(), L);
  const FockSpace delta_space(st, rho.basis.modes(), M - L);
  struct Split {
    std::uint64_t delta;
    std::size_t gamma;
    std::size_t alpha;
    double coefficient;
  };
  std::vector<Split> splits;
  std::vector<int> delta(static_cast<std::size_t>(rho.basis.modes()));
  for (std::size_t a = 0; a < rho.basis.size(); ++a) {
    const auto& occ = rho.basis[a].occupations();
    layout.for_each_sub(occ, [&](std::size_t g, std::span<const int> gamma) {
      for (std::size_t i = 0; i < occ.size(); ++i) delta[i] = occ[i] - gamma[i];
      splits.push_back({delta_space.rank(delta), g, a, merge_coefficient(st, gamma, delta)});
    });
  }
  std::sort(splits.begin(), splits.end(),
            [](const Split& x, const Split& y) { return x.delta < y.delta; });
  const auto n = static_cast<Eigen::Index>(layout.size());
  out.matrix = Matrix::Zero(n, n);
  std::size_t start = 0;
  while (start < splits.size()) {
    std::size_t end = start;
    while (end < splits.size() && splits[end].delta == splits[start].delta) ++end;
    for (std::size_t i = start; i < end; ++i) {
      for (std::size_t j = start; j < end; ++j) {
        out.matrix(static_cast<Eigen::Index>(splits[i].gamma),
                   static_cast<Eigen::Index>(splits[j].gamma)) +=
            splits[i].coefficient * splits[j].coefficient *
            raw(static_cast<Eigen::Index>(splits[i].alpha), static_cast<Eigen::Index>(splits[j].alpha));
      }
    }
    start = end;
  }
  out.matrix /= static_cast<double>(binomial(N - L, N - M));
  return out;
}

Spectrum normalized_spectrum(const Matrix& psd) {
  Spectrum s = hermitian_eigen(psd).spectrum;
  const double trace = psd.trace().real();
  if (!(trace > 0.0)) throw NumericalError("normalized_spectrum: non-positive trace");
  const double scale = std::max(1.0, trace);
  for (double& v : s.values) {
    v /= trace;
    if (v < tol::eigenvalue_floor * scale / trace) {
      throw NumericalError("density matrix has an eigenvalue below the floor");
    }
    v = std::max(v, 0.0);
  }
  return s;
}

double entanglement_entropy(const PureState& state, int L, const EntropyKind& kind) {
  const int N = state.particles();
  if (L < 1 || L > N - 1) {
    if (L == N && N > 0) return 0.0;
    throw InvalidArgument("entanglement_entropy: need 1 <= L <= N-1");
  }
  const int side = std::min(L, N - L);
  return entropy(normalized_spectrum(rdm(state, side).matrix), kind);
}

}  // namespace schmidtfock
