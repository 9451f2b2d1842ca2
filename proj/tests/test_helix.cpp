#include <doctest.h>

#include <map>

#include "mealy/census.hpp"
#include "mealy/errors.hpp"
#include "mealy/fixtures.hpp"
#include "mealy/helix.hpp"
#include "mealy/machine.hpp"
#include "mealy/semigroup.hpp"
#include "mealy/transform.hpp"
#include "oracle.hpp"

using namespace mealy;

namespace {

// Cycle lengths by walking the successor map directly.
std::vector<std::size_t> walk_cycles(const HelixGraph& h) {
  std::vector<char> seen(h.node_count(), 0);
  std::vector<std::size_t> lens;
  for (std::size_t s = 0; s < h.node_count(); ++s) {
    if (seen[s]) continue;
    std::size_t len = 0;
    for (std::uint64_t v = s; !seen[v]; v = h.successor[v]) {
      seen[v] = 1;
      ++len;
    }
    lens.push_back(len);
  }
  std::sort(lens.begin(), lens.end());
  return lens;
}

bool brute_permutation(const HelixGraph& h) {
  std::vector<std::size_t> indeg(h.node_count(), 0);
  for (auto s : h.successor) ++indeg[s];
  return std::all_of(indeg.begin(), indeg.end(), [](std::size_t d) { return d == 1; });
}

}  // namespace

TEST_CASE("helix graph of the lamplighter machine") {
  const HelixGraph h = helix_graph(fixture("lamplighter"), 1, 1);
  REQUIRE(h.node_count() == 4);
  // Node (x, i) has index 2x + i; a = 0, b = 1.
  CHECK(h.successor[1] == 0);  // (a,1) -> (a,0)
  CHECK(h.successor[2] == 0);  // (b,0) -> (a,0)
  CHECK(h.successor[0] == 3);  // (a,0) -> (b,1)
  CHECK(h.successor[3] == 3);  // (b,1) -> (b,1)
  CHECK_FALSE(is_union_of_cycles(h));
  CHECK_THROWS_AS(cycle_lengths(h), PreconditionError);
}

TEST_CASE("helix graph basics") {
  const HelixGraph t = helix_graph(MealyMachine::trivial(), 1, 1);
  CHECK(t.node_count() == 1);
  CHECK(t.successor[0] == 0);
  CHECK(is_union_of_cycles(t));
  CHECK(cycle_lengths(t) == std::vector<std::size_t>{1});
  CHECK(helix_graph(fixture("aleshin"), 2, 2).node_count() == 36);
  CHECK(is_union_of_cycles(helix_graph(fixture("aleshin"), 1, 1)));
  const HelixGraph m = helix_graph(fixture("msharp_2_2"), 1, 1);
  const auto lens = cycle_lengths(m);
  CHECK(std::accumulate(lens.begin(), lens.end(), std::size_t{0}) == 4);
  CHECK_THROWS_AS(helix_graph(fixture("g16"), 30, 30), LimitError);
}

TEST_CASE("encode and decode are inverse") {
  const HelixGraph h = helix_graph(fixture("aleshin"), 2, 3);
  for (std::uint64_t v = 0; v < h.node_count(); ++v) {
    const auto [xs, us] = h.decode(v);
    CHECK(xs.size() == 2);
    CHECK(us.size() == 3);
    CHECK(h.encode(xs, us) == v);
  }
}

TEST_CASE("helix successors agree with word execution and with the power automaton") {
  for (const auto& [name, m] : oracle::all_fixtures())
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t k = 1; k <= 3; ++k) {
        if (oracle::ipow(m.states(), n) * oracle::ipow(m.letters(), k) > 20000) continue;
        CAPTURE(name);
        const HelixGraph h = helix_graph(m, n, k);
        CHECK(h.successor == helix_graph(power(m, n, k), 1, 1).successor);
        for (std::uint64_t v = 0; v < h.node_count(); v += 7) {
          auto [xs, u] = h.decode(v);
          Word ends(n);
          for (std::size_t j = 0; j < n; ++j) {
            State e = 0;
            u = oracle::step_run(m, xs[j], u, &e);
            ends[j] = e;
          }
          CHECK(h.successor[v] == h.encode(ends, u));
        }
        CHECK(is_union_of_cycles(h) == brute_permutation(h));
        if (is_union_of_cycles(h)) CHECK(cycle_lengths(h) == walk_cycles(h));
      }
}

TEST_CASE("union of cycles propagates to all orders for (2,2) IR machines") {
  for (const auto& m : enumerate_classes(2, 2, Filter::all)) {
    if (!classify(m).ir || !is_union_of_cycles(helix_graph(m, 1, 1))) continue;
    for (std::size_t n = 1; n <= 12; ++n)
      for (std::size_t k = 1; n + k <= 12; ++k) CHECK(is_union_of_cycles(helix_graph(m, n, k)));
  }
}

TEST_CASE("cycle profiles") {
  const CycleProfile a = cycle_profile(fixture("aleshin"), 2, 2);
  CHECK(a.extended);
  CHECK(a.rows.size() == 4);
  for (const auto& r : a.rows) {
    CHECK(r.is_cycles);
    CHECK(std::accumulate(r.cycle_lengths.begin(), r.cycle_lengths.end(), std::size_t{0}) == r.nodes);
  }

  const CycleProfile l = cycle_profile(fixture("lamplighter"), 2, 2);
  CHECK_FALSE(l.extended);
  REQUIRE_FALSE(l.rows.empty());
  CHECK_FALSE(l.rows.front().is_cycles);

  const CycleProfile ms = cycle_profile(fixture("msharp_2_2"), 3, 3);
  CHECK(ms.extended);
  for (const auto& r : ms.rows) CHECK(r.is_cycles);

  CHECK_THROWS_AS(cycle_profile(fixture("order6"), 1, 1), PreconditionError);
  const std::string csv = to_csv(a);
  CHECK(csv.rfind("k,l,nodes,is_cycles,min_len,max_len,distinct_lens\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("cycle lengths of the g16 extension stay below the product of the two group orders") {
  const MealyMachine e = extend_ir(fixture("g16"));
  const auto ge = enumerate_order(e, Mode::group, 100000);
  const auto gd = enumerate_order(dual(e), Mode::group, 100000);
  REQUIRE(ge.finite());
  REQUIRE(gd.finite());
  const CycleProfile prof = cycle_profile(fixture("g16"), 3, 3);
  CHECK(prof.extended);
  for (const auto& r : prof.rows) CHECK(r.is_cycles);
  CHECK(prof.max_len() <= ge.order * gd.order);
}
