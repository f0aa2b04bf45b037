#include "schmidtfock/state_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "schmidtfock/errors.hpp"

namespace schmidtfock {

namespace {

using json = nlohmann::ordered_json;

const json& require(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidArgument(std::string("state file is missing \"") + key + "\"");
  return *it;
}

int require_int(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer()) throw InvalidArgument(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw InvalidArgument(std::string(what) + " must be a number");
  return v.get<double>();
}

}  // namespace

PureState parse_state(std::string_view json_text, bool normalize) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("state file must hold a JSON object");
  const json& st = require(j, "statistics");
  if (!st.is_string()) throw InvalidArgument("\"statistics\" must be a string");
  const Statistics statistics = parse_statistics(st.get<std::string>());
  const int d = require_int(j, "modes");
  const int N = require_int(j, "particles");
  if (d < 1 || N < 0) throw InvalidArgument("state file needs modes >= 1 and particles >= 0");
  const json& amps = require(j, "amplitudes");
  if (!amps.is_array()) throw InvalidArgument("\"amplitudes\" must be an array");
  const std::size_t cap = default_basis_cap();
  if (amps.size() > cap) {
    throw ResourceError("state file lists " + std::to_string(amps.size()) +
                        " amplitudes, above the basis cap of " + std::to_string(cap));
  }

  const FockSpace space(statistics, d, N);
  std::vector<FockVector::Entry> entries;
  std::unordered_set<std::uint64_t> seen;
  for (const json& a : amps) {
    if (!a.is_object()) throw InvalidArgument("each amplitude must be an object");
    const json& occ_json = require(a, "occ");
    if (!occ_json.is_array()) throw InvalidArgument("\"occ\" must be an array");
    std::vector<int> occ;
    for (const json& n : occ_json) {
      if (!n.is_number_integer()) throw InvalidArgument("occupations must be integers");
      occ.push_back(n.get<int>());
    }
    if (static_cast<int>(occ.size()) != d) {
      throw InvalidArgument("occupation length does not match \"modes\"");
    }
    const OccupationVector ov(statistics, occ);
    if (ov.total() != N) throw InvalidArgument("occupation " + ov.to_string() + " does not hold N particles");
    const std::uint64_t key = space.rank(ov);
    if (!seen.insert(key).second) throw InvalidArgument("occupation " + ov.to_string() + " listed twice");
    const double re = number(require(a, "re"), "\"re\"");
    const auto im_it = a.find("im");
    const double im = im_it == a.end() ? 0.0 : number(*im_it, "\"im\"");
    entries.push_back({key, Complex(re, im)});
  }
  return make_state(FockVector(space, std::move(entries)), normalize);
}

PureState read_state_file(const std::string& path, bool normalize) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open state file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_state(buffer.str(), normalize);
}

std::string state_to_json(const PureState& state) {
  json j;
  j["statistics"] = std::string(to_string(state.statistics()));
  j["modes"] = state.modes();
  j["particles"] = state.particles();
  json amps = json::array();
  for (const auto& e : state.entries()) {
    json a;
    a["occ"] = state.space().unrank(e.key).occupations();
    a["re"] = e.value.real();
    a["im"] = e.value.imag();
    amps.push_back(std::move(a));
  }
  j["amplitudes"] = std::move(amps);
  return j.dump(2) + "\n";
}

void write_state_file(const std::string& path, const PureState& state) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write state file: " + path);
  out << state_to_json(state);
}

}  // namespace schmidtfock
