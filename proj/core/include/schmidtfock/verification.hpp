#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace schmidtfock {

/// Outcome of an invariant suite over seeded random instances.
///
/// min_margin is the smallest headroom seen: tolerance minus deviation for
/// identities, value minus bound for inequalities (majorization suites report
/// the raw partial-sum margin, which may dip to -1e-10 and still pass).
struct VerificationReport {
  std::string check;
  std::uint64_t seed = 0;
  int instances = 0;  // per statistics
  std::vector<std::string> failures;
  double min_margin = 0.0;

  [[nodiscard]] bool passed() const noexcept { return failures.empty(); }
  [[nodiscard]] std::string to_json() const;
};

/// trace, isospectral, reconstruction, fock-spectra, operator-sum, unitary,
/// majorization, transfer, bounds, contraction.
const std::vector<std::string>& verification_suites();

/// Throws InvalidArgument for an unknown suite or instances < 1. The
/// contraction suite is exhaustive over its fixed (n, m) range and ignores
/// `instances` and `seed`.
VerificationReport run_suite(std::string_view name, int instances, std::uint64_t seed);

}  // namespace schmidtfock
