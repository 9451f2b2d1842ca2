#include <doctest.h>

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "mealy/errors.hpp"
#include "mealy/fixtures.hpp"
#include "mealy/machine.hpp"
#include "oracle.hpp"

using namespace mealy;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("compact format is bit-exact for the listed encodings") {
  const std::map<std::string, std::string> listed = {
      {"lamplighter", "mealy 2 2 : 1/1 0/0 ; 0/0 1/1"},
      {"klein", "mealy 2 2 : 0/1 0/0 ; 0/0 0/1"},
      {"order6", "mealy 2 2 : 0/1 0/1 ; 1/1 0/0"},
      {"s_i2", "mealy 2 2 : 0/1 0/0 ; 1/1 0/1"},
      {"adding_machine", "mealy 2 2 : 1/1 0/0 ; 1/0 1/1"},
      {"grig_finite", "mealy 3 2 : 0/1 0/0 ; 0/0 0/1 ; 0/0 1/1"},
      {"aleshin", "mealy 3 2 : 2/1 1/0 ; 1/1 2/0 ; 0/0 0/1"},
      {"babyaleshin", "mealy 3 2 : 2/1 2/0 ; 0/0 1/1 ; 1/0 0/1"},
      {"grigorchuk", "mealy 5 2 : 4/1 4/0 ; 0/0 2/1 ; 0/0 3/1 ; 4/0 1/1 ; 4/0 4/1"},
      {"aleshin_finite", "mealy 2 3 : 1/1 1/2 1/0 ; 0/1 0/0 0/2"},
      {"s13597", "mealy 2 3 : 1/0 1/2 1/0 ; 1/1 1/0 0/2"},
      {"g16", "mealy 2 4 : 1/1 0/0 1/3 0/2 ; 0/3 1/0 0/1 1/2"},
  };
  for (const auto& [name, text] : listed) {
    CAPTURE(name);
    CHECK(to_compact(fixture(name)) == text);
    CHECK(parse_compact(text) == fixture(name));
  }
}

TEST_CASE("data files agree with the built-in fixtures") {
  for (const auto& [name, m] : oracle::all_fixtures()) {
    CAPTURE(name);
    const std::string text = slurp(std::string(MEALY_FIXTURE_DIR) + "/" + name + ".mealy");
    REQUIRE_FALSE(text.empty());
    CHECK(parse_machine(text) == m);
  }
}

TEST_CASE("round trips on fixtures and random machines") {
  std::vector<MealyMachine> ms;
  for (const auto& [name, m] : oracle::all_fixtures()) ms.push_back(m);
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 1000; ++k) ms.push_back(oracle::random_machine(1 + rng() % 6, 1 + rng() % 6, rng));
  for (const auto& m : ms) {
    CHECK(parse_compact(to_compact(m)) == m);
    CHECK(parse_json(to_json(m)) == m);
    CHECK(parse_machine(to_json(m)) == m);
    CHECK(parse_machine(to_compact(m)) == m);
  }
}

TEST_CASE("compact parser accepts comments and free whitespace") {
  const MealyMachine m = parse_compact("# lamplighter\nmealy 2 2 :\n  1/1 0/0 ;   # state a\n  0/0 1/1\n");
  CHECK(m == fixture("lamplighter"));
}

TEST_CASE("malformed input raises ParseError") {
  for (const char* bad : {"", "mealy", "mealy 2 2 : 1/1 0/0", "mealy 2 2 : 1/1 0/0 ; 0/0 1/1 ; 0/0 0/0",
                          "mealy 2 2 : 1/1 0/0 ; 0/0 1/x", "mealy 2 2 : 1/1 0/0 ; 0/0 2/1",
                          "mealy 0 1 :", "automaton 1 1 : 0/0", "mealy 1 1 : 0-0"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_compact(bad), ParseError);
  }
  for (const char* bad : {"{", "{\"format\":\"mealy\"}", "{\"format\":\"mealy\",\"states\":1,\"letters\":1,"
                                                         "\"delta\":[[1]],\"rho\":[[0]]}",
                          "[1,2]"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_json(bad), ParseError);
  }
}

TEST_CASE("fixture lookup") {
  CHECK_THROWS_AS(fixture("no_such_machine"), PreconditionError);
  CHECK_THROWS_AS(fixture("msharp_1_2"), PreconditionError);
  const auto& names = fixture_names();
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(fixture("klein").states() == 2);
  CHECK(fixture("klein").letters() == 2);
  CHECK(fixture("g16").states() == 2);
  CHECK(fixture("g16").letters() == 4);
  CHECK(fixture("order6").states() == 2);
  CHECK(fixture("msharp_3_2") == msharp(3, 2));
  CHECK(msharp(3, 2).letters() == 3);
  CHECK(msharp(3, 2).states() == 2);
}
