#include "schmidtfock/measure.hpp"

#include <algorithm>
#include <cmath>

#include "annihilation_rows.hpp"
#include "schmidtfock/bipartite.hpp"
#include "schmidtfock/errors.hpp"
#include "schmidtfock/rdm.hpp"

namespace schmidtfock {

double MeasurementEnsemble::total_probability() const {
  double s = 0.0;
  for (const auto& b : branches) s += b.probability;
  return s;
}

namespace {

void check_survivors(const PureState& state, int survivors) {
  if (survivors < 1 || survivors > state.particles() - 1) {
    throw InvalidArgument("measurement needs 1 <= survivors <= N-1");
  }
}

}  // namespace

MeasurementEnsemble annihilation_measurement(const PureState& state, int survivors) {
  check_survivors(state, survivors);
  const int N = state.particles();
  const int removed = N - survivors;
  const double norm = static_cast<double>(binomial(N, survivors));
  const auto layout = detail::SectorLayout::full(state.statistics(), state.modes(), removed, false);
  auto rows = detail::annihilation_rows(state.vector(), layout);
  std::stable_sort(rows.triplets.begin(), rows.triplets.end(),
                   [](const detail::Triplet& a, const detail::Triplet& b) { return a.row < b.row; });

  MeasurementEnsemble out;
  out.survivors = survivors;
  FockAccumulator completeness(state.space());
  const auto& t = rows.triplets;
  std::size_t start = 0;
  while (start < t.size()) {
    std::size_t end = start;
    std::vector<FockVector::Entry> entries;
    for (; end < t.size() && t[end].row == t[start].row; ++end) {
      entries.push_back({t[end].column, t[end].value});
    }
    const FockVector branch(rows.remnant_space, std::move(entries));
    const OccupationVector beta = layout.occupation(static_cast<std::size_t>(t[start].row));
    completeness.add(apply_creation_product(branch, beta), 1.0 / norm);
    const double p = branch.squared_norm() / norm;
    if (p >= tol::branch_cutoff) {
      out.branches.push_back({beta.to_string(), p, make_state(branch, true)});
    }
    start = end;
  }
  out.completeness_residual = (completeness.finish() - state.vector()).norm();
  return out;
}

MeasurementEnsemble normal_measurement(const PureState& state, int survivors) {
  check_survivors(state, survivors);
  const int N = state.particles();
  const double norm = static_cast<double>(binomial(N, survivors));
  const SchmidtDecomposition s = schmidt_decompose(build_gamma(state, survivors));
  MeasurementEnsemble out;
  out.survivors = survivors;
  FockAccumulator completeness(state.space());
  std::vector<OccupationVector> betas;
  std::vector<FockVector> c_beta;
  for (std::uint64_t key : s.column_keys) {
    betas.push_back(s.column_space.unrank(key));
    c_beta.push_back(apply_annihilation_product(state.vector(), betas.back()));
  }
  for (std::size_t nu = 0; nu < s.rank; ++nu) {
    // B_nu |Psi> with B_nu = sum_b V_{b nu} C_b.
    FockAccumulator b_psi(s.row_space);
    for (std::size_t j = 0; j < betas.size(); ++j) {
      b_psi.add(c_beta[j], s.right(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(nu)));
    }
    const FockVector branch = b_psi.finish();
    for (std::size_t j = 0; j < betas.size(); ++j) {
      completeness.add(apply_creation_product(branch, betas[j]),
                       std::conj(s.right(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(nu))) / norm);
    }
    const double p = branch.squared_norm() / norm;
    if (p >= tol::branch_cutoff) {
      out.branches.push_back({"nu=" + std::to_string(nu), p, make_state(branch, true)});
    }
  }
  out.completeness_residual = (completeness.finish() - state.vector()).norm();
  return out;
}

Spectrum average_spectrum(const MeasurementEnsemble& ensemble, int L) {
  std::vector<double> avg;
  for (const auto& b : ensemble.branches) {
    const Spectrum s = normalized_spectrum(rdm(b.post_state, L).matrix);
    if (s.values.size() > avg.size()) avg.resize(s.values.size(), 0.0);
    for (std::size_t i = 0; i < s.values.size(); ++i) avg[i] += b.probability * s.values[i];
  }
  return Spectrum{std::move(avg), tol::spectrum};
}

double verify_mixture_identity(const PureState& state, int survivors, int L) {
  if (L < 1 || L > survivors) throw InvalidArgument("mixture identity needs 1 <= L <= M");
  const MeasurementEnsemble e = annihilation_measurement(state, survivors);
  const Matrix original = normalized(rdm(state, L)).matrix;
  Matrix mixture = Matrix::Zero(original.rows(), original.cols());
  for (const auto& b : e.branches) mixture += b.probability * normalized(rdm(b.post_state, L)).matrix;
  return (original - mixture).cwiseAbs().maxCoeff();
}

MajorizationReport check_majorization(const PureState& state, int survivors, int L,
                                      const EntropyKind& kind) {
  if (L < 1 || L > survivors) throw InvalidArgument("majorization check needs 1 <= L <= M");
  const MeasurementEnsemble e = annihilation_measurement(state, survivors);
  const Spectrum before = normalized_spectrum(rdm(state, L).matrix);
  MajorizationReport r;
  r.entropy_name = kind.name();
  r.entropy_before = entropy(before, kind);
  std::vector<double> avg;
  double total = 0.0;
  for (const auto& b : e.branches) {
    const Spectrum s = normalized_spectrum(rdm(b.post_state, L).matrix);
    if (s.values.size() > avg.size()) avg.resize(s.values.size(), 0.0);
    for (std::size_t i = 0; i < s.values.size(); ++i) avg[i] += b.probability * s.values[i];
    r.entropy_after += b.probability * entropy(s, kind);
    total += b.probability;
  }
  // Dropped branches leave a deficit below 1e-14 per branch; rescale to unit mass.
  for (double& v : avg) v /= total;
  const MajorizationResult m = majorization_compare(before, Spectrum{avg, tol::spectrum});
  r.min_margin = m.margin_p_below_q;
  r.holds = r.min_margin >= -tol::majorization_slack;
  r.entropy_holds = r.entropy_before >= r.entropy_after - tol::decomposition;
  return r;
}

std::vector<OccupationVector> subspace_configurations(Statistics statistics,
                                                      const ModeSubspace& subspace, int M) {
  const FockBasis local = enumerate_basis(statistics, subspace.size(), M);
  std::vector<OccupationVector> out;
  out.reserve(local.size());
  for (const auto& occ : local) {
    std::vector<int> full(static_cast<std::size_t>(subspace.modes()), 0);
    for (int i = 0; i < subspace.size(); ++i) {
      full[static_cast<std::size_t>(subspace.members()[static_cast<std::size_t>(i)])] = occ[i];
    }
    out.emplace_back(statistics, std::move(full));
  }
  return out;
}

TransferReport particle_transfer(const PureState& state, const ModeSubspace& source,
                                 const ModeSubspace& target, int M,
                                 const std::vector<Matrix>& transfers, const EntropyKind& kind) {
  const int N = state.particles();
  if (M < 1 || M > N) throw InvalidArgument("transfer needs 1 <= M <= N");
  if (source.modes() != state.modes() || target.modes() != state.modes()) {
    throw InvalidArgument("transfer subspaces must match the state's mode count");
  }
  for (int k : target.members()) {
    if (source.contains(k)) throw InvalidArgument("source and target subspaces overlap");
  }
  if (sector_number(state, source) != N) {
    throw InvalidArgument("state is not supported on the source subspace");
  }
  if (transfers.empty()) throw InvalidArgument("transfer family is empty");

  const GammaMatrix gamma = sector_gamma(state, source, M, 0);
  const auto rows_t = static_cast<Eigen::Index>(basis_dimension(state.statistics(), target.size(), M));
  const Eigen::Index cols_s = gamma.entries.rows();
  Matrix completeness = Matrix::Zero(cols_s, cols_s);
  for (const Matrix& t : transfers) {
    if (t.rows() != rows_t || t.cols() != cols_s) {
      throw InvalidArgument("transfer matrix has the wrong shape");
    }
    completeness += t.adjoint() * t;
  }
  TransferReport r;
  r.completeness_residual =
      (completeness - Matrix::Identity(cols_s, cols_s)).cwiseAbs().maxCoeff();
  if (r.completeness_residual > tol::identity) {
    throw InvalidArgument("transfer family violates sum T^dagger T = 1");
  }

  const double cnm = static_cast<double>(binomial(N, M));
  r.initial_spectrum = normalized_spectrum(gamma.entries * gamma.entries.adjoint());
  r.initial_entropy = entropy(r.initial_spectrum, kind);

  const auto layout =
      detail::SectorLayout::sector(state.statistics(), state.modes(), target.members(), M, 0);
  std::vector<double> avg;
  for (const Matrix& t : transfers) {
    const Matrix g = t * gamma.entries / std::sqrt(cnm);
    const double p = g.squaredNorm();
    if (p < tol::branch_cutoff) continue;
    TransferBranch b;
    b.probability = p;
    b.spectrum = normalized_spectrum(g * g.adjoint());
    b.entropy = entropy(b.spectrum, kind);
    FockAccumulator acc(state.space());
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const FockVector remnant(gamma.column_space,
                               {FockVector::Entry{gamma.column_keys[static_cast<std::size_t>(j)], 1.0}});
      acc.add(detail::create_rows(layout, g.col(j), remnant));
    }
    b.post_state = make_state(acc.finish(), true);
    if (b.spectrum.values.size() > avg.size()) avg.resize(b.spectrum.values.size(), 0.0);
    for (std::size_t i = 0; i < b.spectrum.values.size(); ++i) avg[i] += p * b.spectrum.values[i];
    r.average_entropy += p * b.entropy;
    r.branches.push_back(std::move(b));
  }
  const MajorizationResult m = majorization_compare(r.initial_spectrum, Spectrum{avg, tol::spectrum});
  r.majorization_margin = m.margin_p_below_q;
  r.majorization_holds = r.majorization_margin >= -tol::majorization_slack;
  r.entropy_bound_holds = r.initial_entropy >= r.average_entropy - tol::decomposition;
  return r;
}

}  // namespace schmidtfock
