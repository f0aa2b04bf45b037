#include "schmidtfock/fock.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "schmidtfock/errors.hpp"

namespace schmidtfock {

std::string_view to_string(Statistics statistics) {
  return statistics == Statistics::boson ? "boson" : "fermion";
}

Statistics parse_statistics(std::string_view text) {
  if (text == "boson" || text == "bosons" || text == "b") return Statistics::boson;
  if (text == "fermion" || text == "fermions" || text == "f") return Statistics::fermion;
  throw InvalidArgument("unknown statistics: " + std::string(text));
}

std::uint64_t binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (long long i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is exact; divide out common factors first.
    const auto den = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(r, den);
    const std::uint64_t factor = static_cast<std::uint64_t>(n - k + i) / (den / g);
    if (__builtin_mul_overflow(r / g, factor, &r)) {
      throw ResourceError("binomial(" + std::to_string(n) + "," + std::to_string(k) +
                          ") overflows 64 bits");
    }
  }
  return r;
}

std::uint64_t basis_dimension(Statistics statistics, int d, int particles) {
  if (d < 1) throw InvalidArgument("basis_dimension: d must be >= 1");
  if (particles < 0) return 0;
  if (statistics == Statistics::boson) return binomial(d + particles - 1, particles);
  return binomial(d, particles);
}

std::size_t default_basis_cap() {
  constexpr std::size_t fallback = 1'000'000;
  const char* env = std::getenv("SCHMIDTFOCK_BASIS_CAP");
  if (env == nullptr) return fallback;
  std::size_t value = 0;
  const std::string_view text(env);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) return fallback;
  return value;
}

OccupationVector::OccupationVector(Statistics statistics, std::vector<int> occupations)
    : statistics_(statistics), occ_(std::move(occupations)) {
  if (occ_.empty()) throw InvalidArgument("occupation vector needs at least one mode");
  for (std::size_t i = 0; i < occ_.size(); ++i) {
    const int n = occ_[i];
    if (n < 0) throw InvalidArgument("negative occupation");
    if (statistics_ == Statistics::fermion) {
      if (n > 1) throw InvalidArgument("fermion occupation above 1");
      if (n == 1 && i < 64) mask_ |= std::uint64_t{1} << i;
    }
    total_ += n;
  }
}

OccupationVector OccupationVector::vacuum(Statistics statistics, int d) {
  return OccupationVector(statistics, std::vector<int>(static_cast<std::size_t>(d), 0));
}

std::string OccupationVector::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < occ_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(occ_[i]);
  }
  out += ')';
  return out;
}

bool canonical_less(const OccupationVector& a, const OccupationVector& b) {
  return std::lexicographical_compare(b.occupations().begin(), b.occupations().end(),
                                      a.occupations().begin(), a.occupations().end());
}

FockSpace::FockSpace(Statistics statistics, int d, int particles)
    : statistics_(statistics), d_(d), n_(particles) {
  if (d < 1) throw InvalidArgument("FockSpace: d must be >= 1");
  if (particles < 0) throw InvalidArgument("FockSpace: negative particle number");
  auto table = std::make_shared<std::vector<std::uint64_t>>(
      static_cast<std::size_t>(d + 1) * static_cast<std::size_t>(particles + 1), 0);
  const auto stride = static_cast<std::size_t>(particles + 1);
  (*table)[0] = 1;  // zero modes hold only the empty configuration
  for (int modes = 1; modes <= d; ++modes) {
    for (int p = 0; p <= particles; ++p) {
      (*table)[static_cast<std::size_t>(modes) * stride + static_cast<std::size_t>(p)] =
          statistics == Statistics::boson ? binomial(modes + p - 1, p) : binomial(modes, p);
    }
  }
  dimension_ = (*table)[static_cast<std::size_t>(d) * stride + static_cast<std::size_t>(particles)];
  table_ = table->data();
  table_holder_ = std::move(table);
}

std::uint64_t FockSpace::rank(std::span<const int> occupations) const {
  if (static_cast<int>(occupations.size()) != d_) {
    throw InvalidArgument("rank: occupation length does not match mode count");
  }
  const int cap = statistics_ == Statistics::fermion ? 1 : n_;
  std::uint64_t r = 0;
  int remaining = n_;
  for (int i = 0; i < d_; ++i) {
    const int ni = occupations[static_cast<std::size_t>(i)];
    if (ni < 0 || ni > cap || ni > remaining) {
      throw InvalidArgument("rank: configuration outside this Fock space");
    }
    // Configurations that put more particles in mode i come first.
    const int top = std::min(remaining, cap);
    for (int v = top; v > ni; --v) r += count(d_ - i - 1, remaining - v);
    remaining -= ni;
  }
  if (remaining != 0) throw InvalidArgument("rank: particle number mismatch");
  return r;
}

std::uint64_t FockSpace::rank(const OccupationVector& occupation) const {
  if (occupation.statistics() != statistics_) {
    throw InvalidArgument("rank: statistics mismatch");
  }
  return rank(std::span<const int>(occupation.occupations()));
}

void FockSpace::unrank_into(std::uint64_t index, std::span<int> out) const {
  if (index >= dimension_) throw InvalidArgument("unrank: index out of range");
  const int cap = statistics_ == Statistics::fermion ? 1 : n_;
  int remaining = n_;
  for (int i = 0; i < d_; ++i) {
    int chosen = 0;
    for (int v = std::min(remaining, cap); v >= 0; --v) {
      const std::uint64_t c = count(d_ - i - 1, remaining - v);
      if (index < c) {
        chosen = v;
        break;
      }
      index -= c;
    }
    out[static_cast<std::size_t>(i)] = chosen;
    remaining -= chosen;
  }
}

OccupationVector FockSpace::unrank(std::uint64_t index) const {
  std::vector<int> occ(static_cast<std::size_t>(d_));
  unrank_into(index, occ);
  return OccupationVector(statistics_, std::move(occ));
}

std::size_t FockBasis::index_of(const OccupationVector& occupation) const {
  if (occupation.modes() != space_.modes() || occupation.total() != space_.particles()) {
    throw InvalidArgument("index_of: occupation not in this basis");
  }
  return static_cast<std::size_t>(space_.rank(occupation));
}

FockBasis enumerate_basis(Statistics statistics, int d, int particles, std::size_t cap) {
  if (particles < 0) throw InvalidArgument("enumerate_basis: negative particle number");
  FockBasis basis;
  basis.space_ = FockSpace(statistics, d, particles);
  const std::uint64_t dim = basis.space_.dimension();
  if (dim > cap) {
    throw ResourceError("basis of " + std::to_string(dim) + " states exceeds cap of " +
                        std::to_string(cap));
  }
  basis.states_.reserve(static_cast<std::size_t>(dim));
  std::vector<int> occ(static_cast<std::size_t>(d));
  for (std::uint64_t i = 0; i < dim; ++i) {
    basis.space_.unrank_into(i, occ);
    basis.states_.emplace_back(statistics, occ);
  }
  return basis;
}

double merge_coefficient(Statistics statistics, std::span<const int> alpha,
                         std::span<const int> beta) {
  if (statistics == Statistics::boson) {
    double c = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] > 0 && beta[i] > 0) {
        c *= std::sqrt(static_cast<double>(binomial(alpha[i] + beta[i], alpha[i])));
      }
    }
    return c;
  }
  // Inversions between alpha's modes (listed first) and beta's modes.
  int inversions = 0;
  int alpha_above = 0;
  for (std::size_t i = alpha.size(); i-- > 0;) {
    if (beta[i] != 0) inversions += alpha_above;
    if (alpha[i] != 0) ++alpha_above;
  }
  return (inversions % 2 == 0) ? 1.0 : -1.0;
}

std::optional<MergedOccupation> merge_occupations(const OccupationVector& alpha,
                                                  const OccupationVector& beta) {
  if (alpha.statistics() != beta.statistics()) {
    throw InvalidArgument("merge_occupations: statistics mismatch");
  }
  if (alpha.modes() != beta.modes()) {
    throw InvalidArgument("merge_occupations: mode count mismatch");
  }
  std::vector<int> sum(static_cast<std::size_t>(alpha.modes()));
  for (int i = 0; i < alpha.modes(); ++i) {
    sum[static_cast<std::size_t>(i)] = alpha[i] + beta[i];
    if (alpha.statistics() == Statistics::fermion && sum[static_cast<std::size_t>(i)] > 1) {
      return std::nullopt;
    }
  }
  const double c = merge_coefficient(alpha.statistics(), alpha.occupations(), beta.occupations());
  return MergedOccupation{OccupationVector(alpha.statistics(), std::move(sum)), c};
}

}  // namespace schmidtfock
