#include "annihilation_rows.hpp"

#include <algorithm>

#include "schmidtfock/errors.hpp"

namespace schmidtfock::detail {

SectorLayout SectorLayout::full(Statistics statistics, int d, int particles, bool enforce_cap) {
  SectorLayout layout;
  layout.statistics_ = statistics;
  layout.d_ = d;
  layout.m_ = particles;
  layout.l_ = 0;
  layout.in_s_.assign(static_cast<std::size_t>(d), 1);
  for (int i = 0; i < d; ++i) layout.s_modes_.push_back(i);
  layout.s_space_ = FockSpace(statistics, d, particles);
  layout.row_space_ = *layout.s_space_;
  const std::uint64_t dim = layout.row_space_.dimension();
  if (enforce_cap && dim > default_basis_cap()) {
    throw ResourceError("row basis of " + std::to_string(dim) + " configurations exceeds cap");
  }
  layout.size_ = static_cast<std::size_t>(dim);
  return layout;
}

SectorLayout SectorLayout::sector(Statistics statistics, int d, std::vector<int> subspace, int m,
                                  int l) {
  SectorLayout layout;
  layout.statistics_ = statistics;
  layout.d_ = d;
  layout.m_ = m;
  layout.l_ = l;
  layout.in_s_.assign(static_cast<std::size_t>(d), 0);
  for (int i : subspace) layout.in_s_[static_cast<std::size_t>(i)] = 1;
  for (int i = 0; i < d; ++i) {
    (layout.in_s_[static_cast<std::size_t>(i)] ? layout.s_modes_ : layout.c_modes_).push_back(i);
  }
  if (layout.s_modes_.empty() || layout.c_modes_.empty()) {
    throw InvalidArgument("sector layout needs a proper nonempty subspace");
  }
  layout.s_space_ = FockSpace(statistics, static_cast<int>(layout.s_modes_.size()), m);
  layout.c_space_ = FockSpace(statistics, static_cast<int>(layout.c_modes_.size()), l);
  layout.row_space_ = FockSpace(statistics, d, m + l);
  const std::uint64_t dim = layout.s_space_->dimension() * layout.c_space_->dimension();
  if (dim > default_basis_cap()) {
    throw ResourceError("sector basis of " + std::to_string(dim) + " configurations exceeds cap");
  }
  layout.size_ = static_cast<std::size_t>(dim);
  return layout;
}

std::size_t SectorLayout::index(std::span<const int> alpha) const {
  std::vector<int> s(s_modes_.size()), c(c_modes_.size());
  for (std::size_t i = 0; i < s_modes_.size(); ++i) s[i] = alpha[static_cast<std::size_t>(s_modes_[i])];
  if (!c_space_) return static_cast<std::size_t>(s_space_->rank(s));
  for (std::size_t i = 0; i < c_modes_.size(); ++i) c[i] = alpha[static_cast<std::size_t>(c_modes_[i])];
  return static_cast<std::size_t>(s_space_->rank(s) * c_space_->dimension() + c_space_->rank(c));
}

OccupationVector SectorLayout::occupation(std::size_t row) const {
  std::vector<int> occ(static_cast<std::size_t>(d_), 0);
  if (!c_space_) {
    s_space_->unrank_into(row, occ);
    return OccupationVector(statistics_, std::move(occ));
  }
  const std::uint64_t cd = c_space_->dimension();
  std::vector<int> s(s_modes_.size()), c(c_modes_.size());
  s_space_->unrank_into(row / cd, s);
  c_space_->unrank_into(row % cd, c);
  for (std::size_t i = 0; i < s.size(); ++i) occ[static_cast<std::size_t>(s_modes_[i])] = s[i];
  for (std::size_t i = 0; i < c.size(); ++i) occ[static_cast<std::size_t>(c_modes_[i])] = c[i];
  return OccupationVector(statistics_, std::move(occ));
}

std::vector<OccupationVector> SectorLayout::occupations() const {
  std::vector<OccupationVector> out;
  out.reserve(size_);
  for (std::size_t r = 0; r < size_; ++r) out.push_back(occupation(r));
  return out;
}

std::uint64_t SectorLayout::key(std::size_t row) const {
  if (!c_space_) return row;
  return row_space_.rank(occupation(row));
}

void SectorLayout::for_each_sub(
    std::span<const int> occ,
    const std::function<void(std::size_t, std::span<const int>)>& visit) const {
  std::vector<int> alpha(static_cast<std::size_t>(d_), 0);
  // Particles still to place in S and in its complement, per mode suffix.
  std::vector<int> s_avail(static_cast<std::size_t>(d_) + 1, 0), c_avail(s_avail);
  for (int i = d_ - 1; i >= 0; --i) {
    const auto ui = static_cast<std::size_t>(i);
    s_avail[ui] = s_avail[ui + 1] + (in_s_[ui] ? occ[ui] : 0);
    c_avail[ui] = c_avail[ui + 1] + (in_s_[ui] ? 0 : occ[ui]);
  }
  if (s_avail[0] < m_ || c_avail[0] < l_) return;
  const std::function<void(int, int, int)> recurse = [&](int i, int ms, int lc) {
    if (ms == 0 && lc == 0) {
      visit(index(alpha), alpha);
      return;
    }
    if (i == d_) return;
    const auto ui = static_cast<std::size_t>(i);
    if (s_avail[ui] < ms || c_avail[ui] < lc) return;
    int& need = in_s_[ui] ? ms : lc;
    const int top = std::min(occ[ui], need);
    for (int a = top; a >= 0; --a) {
      alpha[ui] = a;
      need -= a;
      recurse(i + 1, ms, lc);
      need += a;
    }
    alpha[ui] = 0;
  };
  recurse(0, m_, l_);
}

RowSet annihilation_rows(const FockVector& state, const SectorLayout& layout) {
  if (state.statistics() != layout.statistics() || state.modes() != layout.modes()) {
    throw InvalidArgument("Gamma rows: state and row layout disagree");
  }
  if (layout.particles() > state.particles()) {
    throw InvalidArgument("Gamma rows: more particles removed than present");
  }
  RowSet out{FockSpace(state.statistics(), state.modes(), state.particles() - layout.particles()),
             {}};
  std::vector<int> occ(static_cast<std::size_t>(state.modes()));
  std::vector<int> beta(occ.size());
  for (const auto& e : state.entries()) {
    state.space().unrank_into(e.key, occ);
    layout.for_each_sub(occ, [&](std::size_t row, std::span<const int> alpha) {
      for (std::size_t i = 0; i < occ.size(); ++i) beta[i] = occ[i] - alpha[i];
      const double c = merge_coefficient(state.statistics(), alpha, beta);
      out.triplets.push_back(
          {static_cast<std::uint64_t>(row), out.remnant_space.rank(beta), c * e.value});
    });
  }
  std::sort(out.triplets.begin(), out.triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.column != b.column ? a.column < b.column : a.row < b.row;
  });
  return out;
}

Matrix gram(const RowSet& rows, std::size_t row_count) {
  const auto n = static_cast<Eigen::Index>(row_count);
  Matrix rho = Matrix::Zero(n, n);
  const auto& t = rows.triplets;
  std::size_t start = 0;
  while (start < t.size()) {
    std::size_t end = start;
    while (end < t.size() && t[end].column == t[start].column) ++end;
    for (std::size_t a = start; a < end; ++a) {
      for (std::size_t b = start; b < end; ++b) {
        rho(t[a].row, t[b].row) += t[a].value * std::conj(t[b].value);
      }
    }
    start = end;
  }
  return rho;
}

Matrix dense_gamma(const RowSet& rows, std::size_t row_count,
                   std::vector<std::uint64_t>& column_keys) {
  column_keys.clear();
  for (const auto& t : rows.triplets) {
    if (column_keys.empty() || column_keys.back() != t.column) column_keys.push_back(t.column);
  }
  Matrix g = Matrix::Zero(static_cast<Eigen::Index>(row_count),
                          static_cast<Eigen::Index>(column_keys.size()));
  Eigen::Index col = -1;
  std::uint64_t last = 0;
  for (const auto& t : rows.triplets) {
    if (col < 0 || t.column != last) {
      ++col;
      last = t.column;
    }
    g(t.row, col) += t.value;
  }
  return g;
}

FockVector combine_rows(const RowSet& rows, const Vector& weights) {
  std::vector<FockVector::Entry> entries;
  const auto& t = rows.triplets;
  std::size_t start = 0;
  while (start < t.size()) {
    Complex s = 0.0;
    std::size_t end = start;
    for (; end < t.size() && t[end].column == t[start].column; ++end) {
      s += weights[t[end].row] * t[end].value;
    }
    if (s != Complex(0.0)) entries.push_back({t[start].column, s});
    start = end;
  }
  return FockVector(rows.remnant_space, std::move(entries));
}

FockVector create_rows(const SectorLayout& layout, const Vector& weights,
                       const FockVector& remnant) {
  const bool fermion = layout.statistics() == Statistics::fermion;
  FockAccumulator acc(FockSpace(layout.statistics(), layout.modes(),
                                layout.particles() + remnant.particles()));
  const auto d = static_cast<std::size_t>(layout.modes());
  std::vector<std::vector<int>> alphas;
  std::vector<Complex> w;
  for (std::size_t r = 0; r < layout.size(); ++r) {
    if (weights[static_cast<Eigen::Index>(r)] == Complex(0.0)) continue;
    alphas.push_back(layout.occupation(r).occupations());
    w.push_back(weights[static_cast<Eigen::Index>(r)]);
  }
  std::vector<int> beta(d), sum(d);
  for (const auto& e : remnant.entries()) {
    remnant.space().unrank_into(e.key, beta);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      bool blocked = false;
      for (std::size_t i = 0; i < d; ++i) {
        sum[i] = alphas[a][i] + beta[i];
        blocked = blocked || (fermion && sum[i] > 1);
      }
      if (blocked) continue;
      acc.add(sum, merge_coefficient(layout.statistics(), alphas[a], beta) * w[a] * e.value);
    }
  }
  return acc.finish();
}

}  // namespace schmidtfock::detail
