#include "schmidtfock/states.hpp"

#include <algorithm>
#include <cmath>

#include "schmidtfock/errors.hpp"

namespace schmidtfock {

FockVector::FockVector(FockSpace space, std::vector<Entry> entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (out > 0 && entries_[out - 1].key == entries_[i].key) {
      entries_[out - 1].value += entries_[i].value;
    } else {
      entries_[out++] = entries_[i];
    }
  }
  entries_.resize(out);
  std::erase_if(entries_, [](const Entry& e) { return e.value == Complex(0.0); });
  for (const Entry& e : entries_) {
    if (e.key >= space_.dimension()) throw InvalidArgument("FockVector: key out of range");
  }
}

FockVector FockVector::basis_state(const OccupationVector& occupation, Complex value) {
  FockSpace space(occupation.statistics(), occupation.modes(), occupation.total());
  return FockVector(space, {Entry{space.rank(occupation), value}});
}

FockVector FockVector::from_dense(const FockBasis& basis, const Vector& amplitudes) {
  if (static_cast<std::size_t>(amplitudes.size()) != basis.size()) {
    throw InvalidArgument("amplitude length does not match basis size");
  }
  std::vector<Entry> entries;
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
    if (amplitudes[i] != Complex(0.0)) {
      entries.push_back({static_cast<std::uint64_t>(i), amplitudes[i]});
    }
  }
  return FockVector(basis.space(), std::move(entries));
}

Complex FockVector::amplitude_at(std::uint64_t key) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                                   [](const Entry& e, std::uint64_t k) { return e.key < k; });
  return (it != entries_.end() && it->key == key) ? it->value : Complex(0.0);
}

Complex FockVector::amplitude(const OccupationVector& occupation) const {
  if (occupation.modes() != modes() || occupation.total() != particles() ||
      occupation.statistics() != statistics()) {
    return 0.0;
  }
  return amplitude_at(space_.rank(occupation));
}

double FockVector::squared_norm() const {
  double s = 0.0;
  for (const Entry& e : entries_) s += std::norm(e.value);
  return s;
}

double FockVector::norm() const { return std::sqrt(squared_norm()); }

Complex FockVector::dot(const FockVector& other) const {
  if (!(space_ == other.space_)) throw InvalidArgument("dot: Fock spaces differ");
  Complex s = 0.0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->key < b->key) {
      ++a;
    } else if (b->key < a->key) {
      ++b;
    } else {
      s += std::conj(a->value) * b->value;
      ++a;
      ++b;
    }
  }
  return s;
}

Vector FockVector::to_dense(const FockBasis& basis) const {
  if (!(basis.space() == space_)) throw InvalidArgument("to_dense: basis does not match space");
  Vector out = Vector::Zero(static_cast<Eigen::Index>(basis.size()));
  for (const Entry& e : entries_) out[static_cast<Eigen::Index>(e.key)] = e.value;
  return out;
}

FockVector& FockVector::operator*=(Complex factor) {
  for (Entry& e : entries_) e.value *= factor;
  if (factor == Complex(0.0)) entries_.clear();
  return *this;
}

FockVector operator+(const FockVector& a, const FockVector& b) {
  if (!(a.space_ == b.space_)) throw InvalidArgument("sum of vectors in different spaces");
  std::vector<FockVector::Entry> all(a.entries_.begin(), a.entries_.end());
  all.insert(all.end(), b.entries_.begin(), b.entries_.end());
  return FockVector(a.space_, std::move(all));
}

FockVector operator-(const FockVector& a, const FockVector& b) {
  return a + Complex(-1.0) * b;
}

void FockAccumulator::add(const FockVector& v, Complex factor) {
  if (!(v.space() == space_)) throw InvalidArgument("accumulator: space mismatch");
  for (const auto& e : v.entries()) map_[e.key] += factor * e.value;
}

FockVector FockAccumulator::finish() const {
  std::vector<FockVector::Entry> entries;
  entries.reserve(map_.size());
  for (const auto& [k, v] : map_) entries.push_back({k, v});
  return FockVector(space_, std::move(entries));
}

PureState make_state(FockVector amplitudes, bool normalize) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw InvalidArgument("make_state: zero vector has no state");
  if (normalize) {
    amplitudes *= Complex(1.0 / n);
  } else if (std::abs(n - 1.0) > tol::identity) {
    throw InvalidArgument("make_state: amplitudes are not unit norm");
  }
  PureState s;
  s.vector_ = std::move(amplitudes);
  return s;
}

PureState make_state(const FockBasis& basis, const Vector& amplitudes, bool normalize) {
  return make_state(FockVector::from_dense(basis, amplitudes), normalize);
}

std::optional<double> annihilate_in_place(Statistics statistics, std::span<int> occupations,
                                          int mode) {
  auto& n = occupations[static_cast<std::size_t>(mode)];
  if (n == 0) return std::nullopt;
  if (statistics == Statistics::boson) {
    const double c = std::sqrt(static_cast<double>(n));
    --n;
    return c;
  }
  int below = 0;
  for (int j = 0; j < mode; ++j) below += occupations[static_cast<std::size_t>(j)];
  n = 0;
  return (below % 2 == 0) ? 1.0 : -1.0;
}

std::optional<double> create_in_place(Statistics statistics, std::span<int> occupations, int mode) {
  auto& n = occupations[static_cast<std::size_t>(mode)];
  if (statistics == Statistics::boson) {
    ++n;
    return std::sqrt(static_cast<double>(n));
  }
  if (n == 1) return std::nullopt;
  int below = 0;
  for (int j = 0; j < mode; ++j) below += occupations[static_cast<std::size_t>(j)];
  n = 1;
  return (below % 2 == 0) ? 1.0 : -1.0;
}

namespace {

void check_mode(const FockVector& v, int mode) {
  if (mode < 0 || mode >= v.modes()) throw InvalidArgument("mode index out of range");
}

void check_compatible(const FockVector& v, const OccupationVector& alpha) {
  if (alpha.statistics() != v.statistics()) throw InvalidArgument("statistics mismatch");
  if (alpha.modes() != v.modes()) throw InvalidArgument("mode count mismatch");
}

}  // namespace

FockVector apply_annihilator(const FockVector& v, int mode) {
  check_mode(v, mode);
  if (v.particles() < 1) throw InvalidArgument("annihilator applied to the vacuum sector");
  FockSpace target(v.statistics(), v.modes(), v.particles() - 1);
  std::vector<int> occ(static_cast<std::size_t>(v.modes()));
  std::vector<FockVector::Entry> out;
  for (const auto& e : v.entries()) {
    v.space().unrank_into(e.key, occ);
    if (auto c = annihilate_in_place(v.statistics(), occ, mode)) {
      out.push_back({target.rank(occ), *c * e.value});
    }
  }
  return FockVector(target, std::move(out));
}

FockVector apply_creator(const FockVector& v, int mode) {
  check_mode(v, mode);
  FockSpace target(v.statistics(), v.modes(), v.particles() + 1);
  std::vector<int> occ(static_cast<std::size_t>(v.modes()));
  std::vector<FockVector::Entry> out;
  for (const auto& e : v.entries()) {
    v.space().unrank_into(e.key, occ);
    if (auto c = create_in_place(v.statistics(), occ, mode)) {
      out.push_back({target.rank(occ), *c * e.value});
    }
  }
  return FockVector(target, std::move(out));
}

FockVector apply_annihilation_product(const FockVector& v, const OccupationVector& alpha) {
  check_compatible(v, alpha);
  if (alpha.total() > v.particles()) {
    throw InvalidArgument("annihilation product removes more particles than present");
  }
  FockSpace target(v.statistics(), v.modes(), v.particles() - alpha.total());
  const auto& a = alpha.occupations();
  std::vector<int> occ(a.size());
  std::vector<FockVector::Entry> out;
  for (const auto& e : v.entries()) {
    v.space().unrank_into(e.key, occ);
    bool fits = true;
    for (std::size_t i = 0; i < a.size() && fits; ++i) {
      if (occ[i] < a[i]) fits = false;
      occ[i] -= a[i];
    }
    if (!fits) continue;
    out.push_back({target.rank(occ), merge_coefficient(v.statistics(), a, occ) * e.value});
  }
  return FockVector(target, std::move(out));
}

FockVector apply_creation_product(const FockVector& v, const OccupationVector& alpha) {
  check_compatible(v, alpha);
  FockSpace target(v.statistics(), v.modes(), v.particles() + alpha.total());
  const auto& a = alpha.occupations();
  std::vector<int> occ(a.size());
  std::vector<FockVector::Entry> out;
  for (const auto& e : v.entries()) {
    v.space().unrank_into(e.key, occ);
    bool blocked = false;
    if (v.statistics() == Statistics::fermion) {
      for (std::size_t i = 0; i < a.size(); ++i) blocked = blocked || (a[i] && occ[i]);
    }
    if (blocked) continue;
    const double c = merge_coefficient(v.statistics(), a, occ);
    for (std::size_t i = 0; i < a.size(); ++i) occ[i] += a[i];
    out.push_back({target.rank(occ), c * e.value});
  }
  return FockVector(target, std::move(out));
}

FockVector compose_product_state(const FockVector& left, const FockVector& right) {
  if (left.statistics() != right.statistics() || left.modes() != right.modes()) {
    throw InvalidArgument("compose_product_state: incompatible spaces");
  }
  const bool fermion = left.statistics() == Statistics::fermion;
  FockAccumulator acc(FockSpace(left.statistics(), left.modes(),
                                left.particles() + right.particles()));
  const auto d = static_cast<std::size_t>(left.modes());
  std::vector<int> a(d), b(d), sum(d);
  for (const auto& l : left.entries()) {
    left.space().unrank_into(l.key, a);
    for (const auto& r : right.entries()) {
      right.space().unrank_into(r.key, b);
      bool blocked = false;
      for (std::size_t i = 0; i < d; ++i) {
        sum[i] = a[i] + b[i];
        blocked = blocked || (fermion && sum[i] > 1);
      }
      if (blocked) continue;
      acc.add(sum, merge_coefficient(left.statistics(), a, b) * l.value * r.value);
    }
  }
  return acc.finish();
}

SpUnitary::SpUnitary(Matrix matrix) : u_(std::move(matrix)) {
  if (u_.rows() != u_.cols() || u_.rows() == 0) {
    throw InvalidArgument("SpUnitary: matrix must be square and non-empty");
  }
  const Matrix defect = u_.adjoint() * u_ - Matrix::Identity(u_.rows(), u_.cols());
  if (defect.cwiseAbs().maxCoeff() > tol::identity) {
    throw InvalidArgument("SpUnitary: matrix is not unitary within 1e-10");
  }
}

SpUnitary SpUnitary::from_generator(const Matrix& h) {
  const EigenDecomposition eig = hermitian_eigen(h);
  Vector phases(static_cast<Eigen::Index>(eig.spectrum.size()));
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases[i] = std::exp(Complex(0.0, -eig.spectrum.values[static_cast<std::size_t>(i)]));
  }
  return SpUnitary(eig.vectors * phases.asDiagonal() * eig.vectors.adjoint());
}

FockVector apply_sp_unitary(const FockVector& v, const SpUnitary& u) {
  if (u.modes() != v.modes()) throw InvalidArgument("SpUnitary mode count mismatch");
  const int d = v.modes();
  const Matrix& U = u.matrix();
  FockAccumulator total(v.space());
  std::vector<int> occ(static_cast<std::size_t>(d));
  for (const auto& e : v.entries()) {
    v.space().unrank_into(e.key, occ);
    // Build prod_i (sum_k U_ki c_k^dagger)^{n_i} / sqrt(n_i!) |0>, rightmost first.
    FockVector current = FockVector::basis_state(OccupationVector::vacuum(v.statistics(), d));
    for (int i = d - 1; i >= 0; --i) {
      for (int rep = 0; rep < occ[static_cast<std::size_t>(i)]; ++rep) {
        FockAccumulator next(FockSpace(v.statistics(), d, current.particles() + 1));
        for (int k = 0; k < d; ++k) {
          if (U(k, i) == Complex(0.0)) continue;
          next.add(apply_creator(current, k), U(k, i));
        }
        current = next.finish();
      }
      double factorial = 1.0;
      for (int r = 2; r <= occ[static_cast<std::size_t>(i)]; ++r) factorial *= r;
      current *= Complex(1.0 / std::sqrt(factorial));
    }
    total.add(current, e.value);
  }
  return total.finish();
}

PureState apply_sp_unitary(const PureState& state, const SpUnitary& u) {
  return make_state(apply_sp_unitary(state.vector(), u), false);
}

}  // namespace schmidtfock
