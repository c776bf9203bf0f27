#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace hetnet;
using testing_support::fixture;
using testing_support::load;

namespace {

std::string error_code_of(const std::string& path) {
  try {
    load_network(path);
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("ex51 parses into an axial network with five connections") {
  Network net = load("ex51.json");
  CHECK(net.n == 4);
  CHECK(net.mode == Mode::AC);
  CHECK(net.connections.size() == 5);
  CHECK(net.lambda(1, 4) == -3.0);
  CHECK(net.has_edge(1, 3));
  CHECK_FALSE(net.has_edge(3, 1));
  CHECK(net.find(1, 3)->dim == 2);
}

TEST_CASE("every good fixture round-trips through canonical serialization") {
  for (const char* f : {"ex51.json", "ex51_violating.json", "ex52.json", "ex53.json", "ex54.json", "ex55_y5.json",
                        "ex55_y6.json", "kirk_silber.json", "kirk_silber_incomplete.json"}) {
    CAPTURE(f);
    Network a = load(f);
    const std::string s = serialize(a);
    Network b = parse_network_text(s);
    CHECK(serialize(b) == s);
  }
}

TEST_CASE("EXTENDED fixtures keep off-axis nodes") {
  Network net = load("ex53.json");
  CHECK(net.mode == Mode::EXTENDED);
  CHECK(net.axis_of(5) == 0);
}

TEST_CASE("broken fixtures fail with the right code") {
  CHECK(error_code_of(fixture("broken/two_cycle.json")) == "InvariantError");
  CHECK(error_code_of(fixture("broken/same_axis.json")) == "InvariantError");
  CHECK(error_code_of(fixture("broken/bad_dim.json")) == "InvariantError");
  CHECK(error_code_of(fixture("broken/malformed.json")) == "ParseError");
  CHECK(error_code_of(fixture("broken/unknown_key.json")) == "SchemaError");
  CHECK(error_code_of(fixture("does_not_exist.json")) == "ParseError");
}

TEST_CASE("two-cycle message names both equilibria") {
  try {
    load_network(fixture("broken/two_cycle.json"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("between 1 and 2") != std::string::npos);
  }
}

TEST_CASE("unclean network still parses; cleanliness is a classifier concern") {
  CHECK_NOTHROW(load("broken/unclean.json"));
}

TEST_CASE("complementary subspace") {
  Connection c;
  c.from = 1;
  c.to = 2;
  c.subspace = {1, 2};
  CHECK(complementary_subspace(c, 4) == std::vector<int>{3, 4});
  c.subspace = {1, 2, 3};
  CHECK(complementary_subspace(c, 4) == std::vector<int>{4});
}

TEST_CASE("shuffled input canonicalizes to the same text") {
  nlohmann::json doc = testing_support::load_json("ex52.json");
  const std::string ref = serialize(parse_network(doc));
  std::reverse(doc["connections"].begin(), doc["connections"].end());
  std::reverse(doc["equilibria"].begin(), doc["equilibria"].end());
  CHECK(serialize(parse_network(doc)) == ref);
}
