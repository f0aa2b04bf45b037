#include "schmidtfock/blocks.hpp"

#include <algorithm>
#include <cmath>

#include "annihilation_rows.hpp"
#include "schmidtfock/errors.hpp"
#include "schmidtfock/rdm.hpp"

namespace schmidtfock {

ModeSubspace::ModeSubspace(std::vector<int> members, int d) : members_(std::move(members)), d_(d) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty()) throw InvalidArgument("mode subspace must be nonempty");
  if (members_.front() < 0 || members_.back() >= d) {
    throw InvalidArgument("mode subspace member out of range");
  }
  if (static_cast<int>(members_.size()) >= d) {
    throw InvalidArgument("mode subspace must be a proper subset of the modes");
  }
}

ModeSubspace ModeSubspace::leading(int k, int d) {
  std::vector<int> m(static_cast<std::size_t>(std::max(k, 0)));
  for (int i = 0; i < k; ++i) m[static_cast<std::size_t>(i)] = i;
  return ModeSubspace(std::move(m), d);
}

std::vector<int> ModeSubspace::complement_members() const {
  std::vector<int> out;
  for (int i = 0; i < d_; ++i) {
    if (!contains(i)) out.push_back(i);
  }
  return out;
}

bool ModeSubspace::contains(int mode) const {
  return std::binary_search(members_.begin(), members_.end(), mode);
}

namespace {

void check_subspace(const PureState& state, const ModeSubspace& S) {
  if (S.modes() != state.modes()) throw InvalidArgument("subspace and state mode counts differ");
}

int require_sector(const PureState& state, const ModeSubspace& S, double tolerance) {
  const auto ns = sector_number(state, S, tolerance);
  if (!ns) throw InvalidArgument("state does not have a definite particle number in S");
  return *ns;
}

detail::SectorLayout layout_for(const PureState& state, const ModeSubspace& S, int m, int l) {
  return detail::SectorLayout::sector(state.statistics(), state.modes(), S.members(), m, l);
}

double sector_prefactor(int ns, int nc, int m, int l) {
  return static_cast<double>(binomial(ns, m)) * static_cast<double>(binomial(nc, l));
}

}  // namespace

std::optional<int> sector_number(const PureState& state, const ModeSubspace& S, double tolerance) {
  check_subspace(state, S);
  std::optional<int> found;
  std::vector<int> occ(static_cast<std::size_t>(state.modes()));
  for (const auto& e : state.entries()) {
    if (std::abs(e.value) <= tolerance) continue;
    state.space().unrank_into(e.key, occ);
    int ns = 0;
    for (int i : S.members()) ns += occ[static_cast<std::size_t>(i)];
    if (found && *found != ns) return std::nullopt;
    found = ns;
  }
  return found;
}

std::vector<SectorBlock> blocked_rdm(const PureState& state, const ModeSubspace& S, int M,
                                     double sector_tolerance) {
  check_subspace(state, S);
  const int N = state.particles();
  if (M < 1 || M > N) throw InvalidArgument("blocked_rdm: need 0 < M <= N");
  const int ns = require_sector(state, S, sector_tolerance);
  const int nc = N - ns;
  std::vector<SectorBlock> blocks;
  for (int m = std::min(M, ns); m >= std::max(0, M - nc); --m) {
    blocks.push_back(sector_block(state, S, m, M - m, sector_tolerance));
  }
  return blocks;
}

SectorBlock sector_block(const PureState& state, const ModeSubspace& S, int m, int l,
                         double sector_tolerance) {
  check_subspace(state, S);
  const int ns = require_sector(state, S, sector_tolerance);
  const int nc = state.particles() - ns;
  if (m < 0 || l < 0 || m + l < 1 || m > ns || l > nc) {
    throw InvalidArgument("sector_block: sector (m, l) is empty for this state");
  }
  const auto layout = layout_for(state, S, m, l);
  const auto rows = detail::annihilation_rows(state.vector(), layout);
  SectorBlock b;
  b.m = m;
  b.l = l;
  b.basis = layout.occupations();
  b.matrix = detail::gram(rows, layout.size());
  b.expected_trace = sector_prefactor(ns, nc, m, l);
  return b;
}

GammaMatrix sector_gamma(const PureState& state, const ModeSubspace& S, int m, int l,
                         double sector_tolerance) {
  check_subspace(state, S);
  const int ns = require_sector(state, S, sector_tolerance);
  const int nc = state.particles() - ns;
  const double prefactor = sector_prefactor(ns, nc, m, l);
  if (m < 0 || l < 0 || m + l < 1 || !(prefactor > 0.0)) {
    throw InvalidArgument("sector_gamma: sector (m, l) is empty for this state");
  }
  const auto layout = layout_for(state, S, m, l);
  const auto rows = detail::annihilation_rows(state.vector(), layout);
  GammaMatrix g;
  g.statistics = state.statistics();
  g.modes = state.modes();
  g.particles = state.particles();
  g.removed = m + l;
  g.row_space = layout.space();
  g.row_keys.resize(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) g.row_keys[i] = layout.key(i);
  g.column_space = rows.remnant_space;
  g.entries = detail::dense_gamma(rows, layout.size(), g.column_keys);
  g.prefactor = prefactor;
  return g;
}

namespace {

// sum_{nu<k} A_nu^dagger A_nu |Psi> for the eigenvectors of rows' Gram matrix.
FockVector gram_expansion(const detail::SectorLayout& layout, const detail::RowSet& rows,
                          std::optional<std::size_t> k) {
  const EigenDecomposition eig = hermitian_eigen(detail::gram(rows, layout.size()));
  const std::size_t terms = k.value_or(eig.spectrum.size());
  if (terms == 0) throw InvalidArgument("expansion needs at least one term");
  if (terms > eig.spectrum.size()) throw InvalidArgument("truncation exceeds block dimension");
  FockAccumulator acc(FockSpace(layout.statistics(), layout.modes(),
                                layout.particles() + rows.remnant_space.particles()));
  for (std::size_t nu = 0; nu < terms; ++nu) {
    const Vector u = eig.vectors.col(static_cast<Eigen::Index>(nu));
    const FockVector remnant = detail::combine_rows(rows, u.conjugate());
    if (remnant.nonzeros() == 0) continue;
    acc.add(detail::create_rows(layout, u, remnant));
  }
  return acc.finish();
}

}  // namespace

FockVector sector_expansion_sum(const PureState& state, const ModeSubspace& S, int m, int l,
                                std::optional<std::size_t> k, double sector_tolerance) {
  check_subspace(state, S);
  const int ns = require_sector(state, S, sector_tolerance);
  const double prefactor = sector_prefactor(ns, state.particles() - ns, m, l);
  if (m < 0 || l < 0 || m + l < 1 || !(prefactor > 0.0)) {
    throw InvalidArgument("sector expansion: sector (m, l) is empty for this state");
  }
  const auto layout = layout_for(state, S, m, l);
  const auto rows = detail::annihilation_rows(state.vector(), layout);
  FockVector sum = gram_expansion(layout, rows, k);
  sum *= Complex(1.0 / prefactor);
  return sum;
}

PureState sector_reconstruct(const PureState& state, const ModeSubspace& S, int m, int l,
                             std::optional<std::size_t> k, double sector_tolerance) {
  return make_state(sector_expansion_sum(state, S, m, l, k, sector_tolerance), true);
}

double bipartite_entanglement(const PureState& state, const ModeSubspace& S,
                              const EntropyKind& kind, double sector_tolerance) {
  check_subspace(state, S);
  const int ns = require_sector(state, S, sector_tolerance);
  if (ns == 0 || ns == state.particles()) return 0.0;
  const auto layout = layout_for(state, S, ns, 0);
  const auto rows = detail::annihilation_rows(state.vector(), layout);
  return entropy(normalized_spectrum(detail::gram(rows, layout.size())), kind);
}

ModePairing::ModePairing(std::vector<int> unbarred, std::vector<int> barred, int d)
    : unbarred_(std::move(unbarred)), barred_(std::move(barred)), d_(d) {
  if (unbarred_.size() != barred_.size() || unbarred_.empty()) {
    throw InvalidArgument("pairing map must pair equally many nonempty mode lists");
  }
  std::vector<int> seen(static_cast<std::size_t>(std::max(d, 0)), 0);
  for (const auto* list : {&unbarred_, &barred_}) {
    for (int k : *list) {
      if (k < 0 || k >= d) throw InvalidArgument("pairing map mode out of range");
      if (seen[static_cast<std::size_t>(k)]++) throw InvalidArgument("pairing map is not a bijection");
    }
  }
  if (2 * unbarred_.size() != static_cast<std::size_t>(d)) {
    throw InvalidArgument("pairing map must cover every mode");
  }
}

ModePairing ModePairing::standard(int n) {
  std::vector<int> u(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    u[static_cast<std::size_t>(k)] = k;
    b[static_cast<std::size_t>(k)] = n + k;
  }
  return ModePairing(std::move(u), std::move(b), 2 * n);
}

OccupationVector ModePairing::pair_occupation(Statistics statistics, int pair) const {
  std::vector<int> occ(static_cast<std::size_t>(d_), 0);
  occ[static_cast<std::size_t>(unbarred_[static_cast<std::size_t>(pair)])] = 1;
  occ[static_cast<std::size_t>(barred_[static_cast<std::size_t>(pair)])] = 1;
  return OccupationVector(statistics, std::move(occ));
}

namespace {

std::vector<FockVector> pair_rows(const PureState& state, const ModePairing& pairing) {
  if (pairing.modes() != state.modes()) throw InvalidArgument("pairing and state mode counts differ");
  if (state.particles() < 2) throw InvalidArgument("pair block needs at least two particles");
  std::vector<FockVector> rows;
  for (int p = 0; p < pairing.pairs(); ++p) {
    rows.push_back(apply_annihilation_product(state.vector(),
                                              pairing.pair_occupation(state.statistics(), p)));
  }
  return rows;
}

Matrix pair_gram(const std::vector<FockVector>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix rho(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      rho(p, q) = rows[static_cast<std::size_t>(q)].dot(rows[static_cast<std::size_t>(p)]);
    }
  }
  return rho;
}

}  // namespace

CollectivePairBlock collective_pair_block(const PureState& state, const ModePairing& pairing) {
  CollectivePairBlock out;
  out.matrix = pair_gram(pair_rows(state, pairing));
  out.spectrum = hermitian_eigen(out.matrix).spectrum;
  return out;
}

FockVector pair_expansion_sum(const PureState& state, const ModePairing& pairing,
                              std::optional<std::size_t> k) {
  if (state.statistics() != Statistics::fermion) {
    throw InvalidArgument("pair expansion is defined for fermions only");
  }
  const auto rows = pair_rows(state, pairing);
  std::vector<OccupationVector> pairs;
  for (int p = 0; p < pairing.pairs(); ++p) pairs.push_back(pairing.pair_occupation(state.statistics(), p));

  FockAccumulator np(state.space());
  for (std::size_t p = 0; p < rows.size(); ++p) np.add(apply_creation_product(rows[p], pairs[p]));
  const FockVector np_psi = np.finish();
  const double mu = state.vector().dot(np_psi).real();
  if (!(mu > 0.5) || (np_psi - Complex(mu) * state.vector()).norm() > tol::decomposition) {
    throw InvalidArgument("state is not an eigenstate of the pair-number operator");
  }

  const EigenDecomposition eig = hermitian_eigen(pair_gram(rows));
  const std::size_t terms = k.value_or(eig.spectrum.size());
  if (terms == 0) throw InvalidArgument("expansion needs at least one term");
  if (terms > eig.spectrum.size()) throw InvalidArgument("truncation exceeds pair count");
  FockAccumulator acc(state.space());
  for (std::size_t nu = 0; nu < terms; ++nu) {
    FockAccumulator remnant(rows.front().space());
    for (std::size_t p = 0; p < rows.size(); ++p) {
      remnant.add(rows[p], std::conj(eig.vectors(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(nu))));
    }
    const FockVector a_psi = remnant.finish();
    for (std::size_t p = 0; p < rows.size(); ++p) {
      acc.add(apply_creation_product(a_psi, pairs[p]),
              eig.vectors(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(nu)));
    }
  }
  FockVector sum = acc.finish();
  sum *= Complex(1.0 / mu);
  return sum;
}

PureState pair_expansion(const PureState& state, const ModePairing& pairing,
                         std::optional<std::size_t> k) {
  return make_state(pair_expansion_sum(state, pairing, k), true);
}

}  // namespace schmidtfock
