#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>

#include "schmidtfock/errors.hpp"
#include "schmidtfock/random.hpp"
#include "schmidtfock/state_io.hpp"

using namespace schmidtfock;

TEST(StateIo, ParsesSchema) {
  const PureState s = parse_state(R"({"statistics":"fermion","modes":3,"particles":2,
    "amplitudes":[{"occ":[1,1,0],"re":1.0,"im":0.0},{"occ":[0,1,1],"re":0.0,"im":1.0}]})");
  EXPECT_EQ(s.statistics(), Statistics::fermion);
  EXPECT_EQ(s.modes(), 3);
  EXPECT_EQ(s.particles(), 2);
  EXPECT_NEAR(std::abs(s.amplitude(OccupationVector(Statistics::fermion, {0, 1, 1})) - Complex(0, 1 / std::sqrt(2.0))),
              0.0, 1e-15);
  EXPECT_EQ(s.amplitude(OccupationVector(Statistics::fermion, {1, 0, 1})), Complex(0.0));
}

TEST(StateIo, RoundTrip) {
  Rng rng(3);
  for (Statistics st : {Statistics::boson, Statistics::fermion}) {
    const PureState psi = random_state(st, 5, 3, rng);
    const PureState back = parse_state(state_to_json(psi), false);
    EXPECT_EQ((back.vector() - psi.vector()).norm(), 0.0);
    const std::string path = ::testing::TempDir() + "state_roundtrip.json";
    write_state_file(path, psi);
    EXPECT_EQ((read_state_file(path, false).vector() - psi.vector()).norm(), 0.0);
    std::remove(path.c_str());
  }
}

TEST(StateIo, RejectsMalformedInput) {
  EXPECT_THROW(parse_state("{"), InvalidArgument);
  EXPECT_THROW(parse_state(R"({"modes":2,"particles":1,"amplitudes":[]})"), InvalidArgument);
  EXPECT_THROW(parse_state(R"({"statistics":"anyon","modes":2,"particles":1,"amplitudes":[]})"), InvalidArgument);
  EXPECT_THROW(parse_state(R"({"statistics":"boson","modes":2,"particles":1,"amplitudes":[]})"), InvalidArgument);
  EXPECT_THROW(parse_state(R"({"statistics":"boson","modes":2,"particles":1,
    "amplitudes":[{"occ":[1,0,0],"re":1}]})"), InvalidArgument);
  EXPECT_THROW(parse_state(R"({"statistics":"boson","modes":2,"particles":1,
    "amplitudes":[{"occ":[2,0],"re":1}]})"), InvalidArgument);
  EXPECT_THROW(parse_state(R"({"statistics":"fermion","modes":2,"particles":2,
    "amplitudes":[{"occ":[2,0],"re":1}]})"), InvalidArgument);
  EXPECT_THROW(parse_state(R"({"statistics":"boson","modes":2,"particles":1,
    "amplitudes":[{"occ":[1,0],"re":1},{"occ":[1,0],"re":1}]})"), InvalidArgument);
  EXPECT_THROW(parse_state(R"({"statistics":"boson","modes":2,"particles":1,
    "amplitudes":[{"occ":[1,0],"re":"x"}]})"), InvalidArgument);
  EXPECT_THROW(parse_state(R"({"statistics":"boson","modes":2,"particles":1,
    "amplitudes":[{"occ":[1,0],"re":0.5}]})", false), InvalidArgument);
  EXPECT_THROW(read_state_file("/nonexistent/state.json"), InvalidArgument);
}

TEST(StateIo, RejectsFilesAboveTheCap) {
  const std::string text = R"({"statistics":"boson","modes":2,"particles":1,
    "amplitudes":[{"occ":[1,0],"re":1},{"occ":[0,1],"re":1}]})";
  ::setenv("SCHMIDTFOCK_BASIS_CAP", "1", 1);
  EXPECT_THROW(parse_state(text), ResourceError);
  ::unsetenv("SCHMIDTFOCK_BASIS_CAP");
  EXPECT_NO_THROW(parse_state(text));
}
