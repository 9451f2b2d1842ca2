#include <doctest.h>

#include <random>
#include <set>
#include <tuple>

#include "mealy/census.hpp"
#include "mealy/errors.hpp"
#include "mealy/fixtures.hpp"
#include "mealy/machine.hpp"
#include "mealy/semigroup.hpp"
#include "mealy/transform.hpp"
#include "oracle.hpp"

using namespace mealy;

namespace {

// (source, input, output, target)
using Transition = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t>;
using TransitionSet = std::set<Transition>;

TransitionSet transitions(const MealyMachine& m) {
  TransitionSet t;
  for (State x = 0; x < m.states(); ++x)
    for (Letter i = 0; i < m.letters(); ++i) t.emplace(x, i, m.out(x, i), m.next(x, i));
  return t;
}

TransitionSet set_dual(const TransitionSet& t) {
  TransitionSet out;
  for (auto [x, i, j, y] : t) out.emplace(i, x, y, j);
  return out;
}

TransitionSet set_inverse(const TransitionSet& t) {
  TransitionSet out;
  for (auto [x, i, j, y] : t) out.emplace(x, j, i, y);
  return out;
}

// Applies a word over {d, i}, rightmost first.
MealyMachine apply_ops(MealyMachine m, const std::string& ops) {
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) m = *it == 'd' ? dual(m) : inverse(m);
  return m;
}

TransitionSet apply_set_ops(TransitionSet t, const std::string& ops) {
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) t = *it == 'd' ? set_dual(t) : set_inverse(t);
  return t;
}

std::vector<MealyMachine> small_classes() {
  auto v = enumerate_classes(2, 2, Filter::all);
  auto w = enumerate_classes(2, 3, Filter::all);
  v.insert(v.end(), w.begin(), w.end());
  return v;
}

}  // namespace

TEST_CASE("dual is an involution and matches the second figure") {
  std::mt19937_64 rng(3);
  for (const auto& m : enumerate_classes(2, 2, Filter::all)) CHECK(dual(dual(m)) == m);
  for (int k = 0; k < 200; ++k) {
    const MealyMachine m = oracle::random_machine(3, 3, rng);
    CHECK(dual(dual(m)) == m);
  }
  CHECK(dual(fixture("lamplighter")) == parse_compact("mealy 2 2 : 1/1 0/0 ; 0/0 1/1"));
  const MealyMachine m = fixture("grig_finite");
  const MealyMachine d = dual(m);
  REQUIRE(d.states() == m.letters());
  REQUIRE(d.letters() == m.states());
  for (State x = 0; x < m.states(); ++x)
    for (Letter i = 0; i < m.letters(); ++i) {
      CHECK(d.next(i, x) == m.out(x, i));
      CHECK(d.out(i, x) == m.next(x, i));
    }
}

TEST_CASE("dual of klein generates a finite semigroup") {
  CHECK(enumerate_order(dual(fixture("klein")), Mode::semigroup, 10000).finite());
}

TEST_CASE("inverse") {
  CHECK(inverse(MealyMachine::trivial()) == MealyMachine::trivial());
  CHECK(classify(inverse(fixture("aleshin"))).reversible);
  CHECK_THROWS_AS(inverse(fixture("order6")), PreconditionError);
  std::mt19937_64 rng(5);
  for (const auto& m : enumerate_classes(2, 2, Filter::invertible)) CHECK(inverse(inverse(m)) == m);
  for (int k = 0; k < 200; ++k) {
    const MealyMachine m = oracle::random_invertible(3, 3, rng);
    const MealyMachine inv = inverse(m);
    CHECK(inverse(inv) == m);
    // ρ_x⁻¹ undoes ρ_x on every word of length 3.
    for (State x = 0; x < m.states(); ++x)
      for (const auto& w : oracle::words(3, 3)) CHECK(oracle::step_run(inv, x, oracle::step_run(m, x, w)) == w);
  }
}

TEST_CASE("transition-set calculus for the eight transforms") {
  const std::vector<std::string> words = {"d", "i", "di", "id", "did", "idi", "didi", "idid"};
  std::size_t checked = 0;
  for (const auto& m : small_classes()) {
    const TransitionSet t = transitions(m);
    for (const auto& w : words) {
      MealyMachine r = MealyMachine::trivial();
      try {
        r = apply_ops(m, w);
      } catch (const PreconditionError&) {
        continue;
      }
      CAPTURE(to_compact(m));
      CAPTURE(w);
      CHECK(transitions(r) == apply_set_ops(t, w));
      ++checked;
    }
    if (is_bireversible(m)) CHECK(apply_ops(m, "didi") == apply_ops(m, "idid"));
  }
  CHECK(checked > 0);
}

TEST_CASE("run") {
  const MealyMachine l = fixture("lamplighter");
  CHECK(run(l, 0, Word{}) == RunResult{{}, 0});
  CHECK(run(l, 0, Word{1, 1, 1, 1}) == RunResult{{0, 0, 0, 0}, 0});
  CHECK(run(fixture("grig_finite"), 0, Word{0, 1}) == RunResult{{1, 0}, 0});
  CHECK_THROWS_AS(run(l, 2, Word{0}), PreconditionError);
  CHECK_THROWS_AS(run(l, 0, Word{2}), PreconditionError);
}

TEST_CASE("run agrees with the letterwise recursion on every (2,2) class") {
  for (const auto& m : enumerate_classes(2, 2, Filter::all))
    for (State x = 0; x < 2; ++x)
      for (std::size_t n = 0; n <= 6; ++n)
        for (const auto& u : oracle::words(2, n)) {
          State end = 0;
          const Word out = oracle::step_run(m, x, u, &end);
          const RunResult r = run(m, x, u);
          CHECK(r.output_word == out);
          CHECK(r.end_state == end);
          // ρ_x(u·w) = ρ_x(u)·ρ_{δ_u(x)}(w) with |u| split at every point.
          for (std::size_t s = 0; s <= n; ++s) {
            const Word a(u.begin(), u.begin() + s), b(u.begin() + s, u.end());
            const RunResult ra = run(m, x, a), rb = run(m, ra.end_state, b);
            Word cat = ra.output_word;
            cat.insert(cat.end(), rb.output_word.begin(), rb.output_word.end());
            CHECK(cat == out);
          }
        }
}

TEST_CASE("power automata") {
  for (const auto& [name, m] : oracle::all_fixtures()) CHECK(power(m, 1, 1) == m);
  // aa, ab, ba, bb over single letters.
  CHECK(power(fixture("lamplighter"), 2, 1) == parse_compact("mealy 4 2 : 2/0 1/1 ; 3/1 0/0 ; 1/1 2/0 ; 0/0 3/1"));
  CHECK_THROWS_AS(power(fixture("lamplighter"), 0, 1), PreconditionError);
  CHECK_THROWS_AS(power(fixture("g16"), 20, 20), LimitError);
}

TEST_CASE("power automaton transitions agree with direct word execution") {
  for (const auto& [name, m] : oracle::all_fixtures()) {
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t k = 1; k <= 3; ++k) {
        if (oracle::ipow(m.states(), n) * oracle::ipow(m.letters(), k) > 20000) continue;
        CAPTURE(name);
        const MealyMachine pm = power(m, n, k);
        const auto xs_all = oracle::words(m.states(), n);
        const auto us_all = oracle::words(m.letters(), k);
        for (std::size_t xi = 0; xi < xs_all.size(); ++xi)
          for (std::size_t ui = 0; ui < us_all.size(); ++ui) {
            Word w = us_all[ui], ends(n);
            for (std::size_t j = 0; j < n; ++j) {
              State e = 0;
              w = oracle::step_run(m, xs_all[xi][j], w, &e);
              ends[j] = e;
            }
            CHECK(pm.out(static_cast<State>(xi), static_cast<Letter>(ui)) == word_index(w, m.letters()));
            CHECK(pm.next(static_cast<State>(xi), static_cast<Letter>(ui)) == word_index(ends, m.states()));
          }
      }
  }
}

TEST_CASE("word_index and index_word are inverse") {
  for (std::size_t idx = 0; idx < 81; ++idx) CHECK(word_index(index_word(idx, 4, 3), 3) == idx);
  CHECK(word_index(Word{1, 0}, 2) == 2);
}

TEST_CASE("extend_ir") {
  const MealyMachine g = fixture("g16");
  const MealyMachine e = extend_ir(g);
  CHECK(e.states() == 4);
  CHECK(e.letters() == 8);
  CHECK(classify(e).ir);

  const MealyMachine t = extend_ir(MealyMachine::trivial());
  CHECK(t.states() == 2);
  CHECK(t.letters() == 2);
  CHECK(enumerate_order(t, Mode::group, 1000).finite());

  for (const auto& m : small_classes()) {
    if (!is_bireversible(m)) continue;
    const MealyMachine x = extend_ir(m);
    CHECK(x.states() == 2 * m.states());
    CHECK(x.letters() == 2 * m.letters());
    CHECK(classify(x).ir);
  }
  CHECK_THROWS_AS(extend_ir(fixture("lamplighter")), PreconditionError);
  CHECK_THROWS_AS(extend_ir(fixture("order6")), PreconditionError);
}

TEST_CASE("disjoint union") {
  const MealyMachine k = fixture("klein");
  const MealyMachine kk = disjoint_union(k, k);
  CHECK(kk.states() == 4);
  for (State x = 0; x < 2; ++x) CHECK(pointed_element(kk, x) == pointed_element(kk, x + 2));
  CHECK_THROWS_AS(disjoint_union(k, fixture("g16")), PreconditionError);

  const MealyMachine ko = disjoint_union(k, fixture("order6"));
  const auto r = enumerate_order(ko, Mode::semigroup, 100000);
  CHECK(r.finite());
  CHECK(r.order >= 6);
}

TEST_CASE("sum components") {
  CHECK(sum_components(fixture("aleshin")).size() == 1);
  const auto comps = sum_components(disjoint_union(fixture("klein"), fixture("order6")));
  REQUIRE(comps.size() == 2);
  CHECK(is_isomorphic(comps[0], fixture("klein")));
  CHECK(is_isomorphic(comps[1], fixture("order6")));

  const auto dc = sum_components(dual(fixture("machine_c")));
  REQUIRE(dc.size() == 2);
  std::vector<std::size_t> sizes{dc[0].states(), dc[1].states()};
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 2});
  const MealyMachine& two = dc[0].states() == 2 ? dc[0] : dc[1];
  CHECK(is_isomorphic(two, dual(fixture("babyaleshin"))));
  const std::vector<State> open{0};
  CHECK_THROWS_AS(restrict_to(fixture("lamplighter"), open), PreconditionError);
}

TEST_CASE("sum components are the minimal closed summands (subset enumeration)") {
  for (auto [q, p] : {std::pair{2u, 2u}, {3u, 2u}, {2u, 3u}}) {
    for (std::size_t idx = 0; idx < oracle::raw_count(q, p); ++idx) {
      const MealyMachine m = oracle::raw_machine(q, p, idx);
      auto closed = [&](unsigned mask) {
        for (State x = 0; x < q; ++x)
          if (mask >> x & 1)
            for (Letter i = 0; i < p; ++i)
              if (!(mask >> m.next(x, i) & 1)) return false;
        return true;
      };
      const unsigned full = (1u << q) - 1;
      // Minimal non-empty summands: closed, complement closed, no proper such subset.
      std::set<unsigned> summands, minimal;
      for (unsigned s = 1; s <= full; ++s)
        if (closed(s) && closed(full & ~s)) summands.insert(s);
      for (unsigned s : summands) {
        bool is_min = true;
        for (unsigned t : summands)
          if (t != s && (t & s) == t) is_min = false;
        if (is_min) minimal.insert(s);
      }
      std::set<unsigned> got;
      for (const auto& comp : sum_component_states(m)) {
        unsigned mask = 0;
        for (State x : comp) mask |= 1u << x;
        got.insert(mask);
        CHECK(closed(mask));
      }
      CHECK(got == minimal);
    }
  }
}
