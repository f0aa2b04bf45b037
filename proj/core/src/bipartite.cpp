#include "schmidtfock/bipartite.hpp"

#include <cmath>

#include "annihilation_rows.hpp"
#include "schmidtfock/errors.hpp"

namespace schmidtfock {

GammaMatrix build_gamma(const PureState& state, int M) {
  const int N = state.particles();
  if (M < 1 || M > N) throw InvalidArgument("build_gamma: need 1 <= M <= N");
  const auto layout = detail::SectorLayout::full(state.statistics(), state.modes(), M);
  const auto rows = detail::annihilation_rows(state.vector(), layout);
  GammaMatrix g;
  g.statistics = state.statistics();
  g.modes = state.modes();
  g.particles = N;
  g.removed = M;
  g.row_space = layout.space();
  g.row_keys.resize(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) g.row_keys[i] = i;
  g.column_space = rows.remnant_space;
  g.entries = detail::dense_gamma(rows, layout.size(), g.column_keys);
  g.prefactor = static_cast<double>(binomial(N, M));
  return g;
}

SchmidtDecomposition schmidt_decompose(const GammaMatrix& gamma) {
  SchmidtDecomposition s;
  s.statistics = gamma.statistics;
  s.modes = gamma.modes;
  s.particles = gamma.particles;
  s.removed = gamma.removed;
  s.prefactor = gamma.prefactor;
  s.row_space = gamma.row_space;
  s.row_keys = gamma.row_keys;
  s.column_space = gamma.column_space;
  s.column_keys = gamma.column_keys;
  if (gamma.entries.size() == 0) {
    s.sigma = Spectrum{{}, tol::spectrum};
    return s;
  }
  SingularValueDecomposition d = svd(gamma.entries);
  const double cutoff = tol::rank_relative * d.sigma.max();
  for (double v : d.sigma.values) {
    if (v > cutoff) ++s.rank;
  }
  const auto r = static_cast<Eigen::Index>(s.rank);
  s.left = d.u.leftCols(r);
  s.right = d.v.leftCols(r);
  s.sigma = std::move(d.sigma);
  return s;
}

namespace {

FockVector column_vector(const FockSpace& space, const std::vector<std::uint64_t>& keys,
                         const Vector& coefficients, bool conjugate) {
  std::vector<FockVector::Entry> entries;
  entries.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const Complex c = coefficients[static_cast<Eigen::Index>(i)];
    entries.push_back({keys[i], conjugate ? std::conj(c) : c});
  }
  return FockVector(space, std::move(entries));
}

}  // namespace

FockVector expansion_sum(const SchmidtDecomposition& schmidt, std::optional<std::size_t> k) {
  const std::size_t terms = k.value_or(schmidt.rank);
  if (terms == 0) throw InvalidArgument("expansion needs at least one term");
  if (terms > schmidt.rank) throw InvalidArgument("truncation exceeds Schmidt rank");
  FockAccumulator acc(FockSpace(schmidt.statistics, schmidt.modes, schmidt.particles));
  for (std::size_t nu = 0; nu < terms; ++nu) {
    const auto col = static_cast<Eigen::Index>(nu);
    const FockVector a = column_vector(schmidt.row_space, schmidt.row_keys, schmidt.left.col(col), false);
    const FockVector b =
        column_vector(schmidt.column_space, schmidt.column_keys, schmidt.right.col(col), true);
    acc.add(compose_product_state(a, b), schmidt.sigma.values[nu] / schmidt.prefactor);
  }
  return acc.finish();
}

PureState reconstruct(const SchmidtDecomposition& schmidt, std::optional<std::size_t> k) {
  return make_state(expansion_sum(schmidt, k), true);
}

Complex overlap(const PureState& a, const PureState& b) {
  if (!(a.space() == b.space())) throw InvalidArgument("overlap: states live in different spaces");
  return a.vector().dot(b.vector());
}

PureState normal_mode_state(const SchmidtDecomposition& schmidt, std::size_t nu, Side side) {
  if (nu >= schmidt.rank) throw InvalidArgument("normal mode index out of range");
  const auto col = static_cast<Eigen::Index>(nu);
  if (side == Side::left) {
    return make_state(column_vector(schmidt.row_space, schmidt.row_keys, schmidt.left.col(col), false),
                      true);
  }
  return make_state(
      column_vector(schmidt.column_space, schmidt.column_keys, schmidt.right.col(col), true), true);
}

FockVector apply_normal_annihilator(const SchmidtDecomposition& schmidt, std::size_t nu,
                                    const PureState& state) {
  if (nu >= schmidt.rank) throw InvalidArgument("normal mode index out of range");
  FockAccumulator acc(schmidt.column_space);
  for (std::size_t i = 0; i < schmidt.row_keys.size(); ++i) {
    const Complex w = std::conj(schmidt.left(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(nu)));
    if (w == Complex(0.0)) continue;
    acc.add(apply_annihilation_product(state.vector(), schmidt.row_space.unrank(schmidt.row_keys[i])), w);
  }
  return acc.finish();
}

}  // namespace schmidtfock
