#pragma once

#include <string>
#include <string_view>

#include "schmidtfock/states.hpp"

namespace schmidtfock {

/// JSON state file:
///   { "statistics": "boson"|"fermion", "modes": d, "particles": N,
///     "amplitudes": [ { "occ": [n_1..n_d], "re": x, "im": y }, ... ] }
/// Unlisted configurations have amplitude 0; "im" may be omitted. Repeated
/// occupations are rejected, as are files listing more entries than the basis
/// cap (ResourceError). Malformed input raises InvalidArgument.
PureState parse_state(std::string_view json_text, bool normalize = true);
PureState read_state_file(const std::string& path, bool normalize = true);

/// Nonzero amplitudes in canonical order, full double precision.
std::string state_to_json(const PureState& state);
void write_state_file(const std::string& path, const PureState& state);

}  // namespace schmidtfock
