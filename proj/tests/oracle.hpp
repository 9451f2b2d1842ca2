#pragma once

// Brute-force reference implementations shared by the unit tests. They work
// directly on next()/out() and avoid the library code paths under test.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mealy/fixtures.hpp"
#include "mealy/machine.hpp"

namespace oracle {

using mealy::Letter;
using mealy::MealyMachine;
using mealy::State;
using mealy::Word;

inline std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

/// All words of length n over radix letters, lexicographic.
inline std::vector<Word> words(std::size_t radix, std::size_t n) {
  std::vector<Word> out;
  const std::size_t total = ipow(radix, n);
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Word w(n);
    std::size_t v = idx;
    for (std::size_t k = n; k-- > 0;) {
      w[k] = static_cast<std::uint32_t>(v % radix);
      v /= radix;
    }
    out.push_back(std::move(w));
  }
  return out;
}

/// Output of state x on w, one transition at a time.
inline Word step_run(const MealyMachine& m, State x, const Word& w, State* end = nullptr) {
  Word out;
  out.reserve(w.size());
  for (Letter i : w) {
    out.push_back(m.out(x, i));
    x = m.next(x, i);
  }
  if (end) *end = x;
  return out;
}

/// ρ_u(w): the states of u act one after the other, first state first.
inline Word produce(const MealyMachine& m, const Word& u, Word w) {
  for (State x : u) w = step_run(m, x, w);
  return w;
}

/// Function table of ρ_u on every word of length 1..max_len.
inline std::vector<Word> table(const MealyMachine& m, const Word& u, std::size_t max_len) {
  std::vector<Word> t;
  for (std::size_t n = 1; n <= max_len; ++n)
    for (const auto& w : words(m.letters(), n)) t.push_back(produce(m, u, w));
  return t;
}

/// Machine number `index` in the raw (delta, rho) table space.
inline MealyMachine raw_machine(std::size_t q, std::size_t p, std::size_t index) {
  std::vector<State> d(q * p);
  std::vector<Letter> r(q * p);
  for (std::size_t k = 0; k < q * p; ++k) {
    r[k] = static_cast<Letter>(index % p);
    index /= p;
  }
  for (std::size_t k = 0; k < q * p; ++k) {
    d[k] = static_cast<State>(index % q);
    index /= q;
  }
  return MealyMachine(q, p, std::move(d), std::move(r));
}

inline std::size_t raw_count(std::size_t q, std::size_t p) { return ipow(q, q * p) * ipow(p, q * p); }

inline MealyMachine random_machine(std::size_t q, std::size_t p, std::mt19937_64& rng) {
  std::vector<State> d(q * p);
  std::vector<Letter> r(q * p);
  for (auto& v : d) v = static_cast<State>(rng() % q);
  for (auto& v : r) v = static_cast<Letter>(rng() % p);
  return MealyMachine(q, p, std::move(d), std::move(r));
}

/// Random machine whose output rows are permutations.
inline MealyMachine random_invertible(std::size_t q, std::size_t p, std::mt19937_64& rng) {
  std::vector<State> d(q * p);
  std::vector<Letter> r;
  for (auto& v : d) v = static_cast<State>(rng() % q);
  for (std::size_t x = 0; x < q; ++x) {
    std::vector<Letter> row(p);
    std::iota(row.begin(), row.end(), 0u);
    std::shuffle(row.begin(), row.end(), rng);
    r.insert(r.end(), row.begin(), row.end());
  }
  return MealyMachine(q, p, std::move(d), std::move(r));
}

/// Isomorphism by trying every state and letter permutation.
inline bool brute_isomorphic(const MealyMachine& a, const MealyMachine& b) {
  if (a.states() != b.states() || a.letters() != b.letters()) return false;
  const std::size_t q = a.states(), p = a.letters();
  std::vector<State> sp(q);
  std::iota(sp.begin(), sp.end(), 0u);
  do {
    std::vector<Letter> lp(p);
    std::iota(lp.begin(), lp.end(), 0u);
    do {
      bool ok = true;
      for (State x = 0; x < q && ok; ++x)
        for (Letter i = 0; i < p && ok; ++i)
          ok = sp[a.next(x, i)] == b.next(sp[x], lp[i]) && lp[a.out(x, i)] == b.out(sp[x], lp[i]);
      if (ok) return true;
    } while (std::next_permutation(lp.begin(), lp.end()));
  } while (std::next_permutation(sp.begin(), sp.end()));
  return false;
}

/// Every fixture plus a few members of the M-sharp family.
inline std::vector<std::pair<std::string, MealyMachine>> all_fixtures() {
  std::vector<std::pair<std::string, MealyMachine>> out;
  for (const auto& n : mealy::fixture_names()) out.emplace_back(n, mealy::fixture(n));
  for (const char* n : {"msharp_2_2", "msharp_2_3", "msharp_3_2", "msharp_3_3"})
    out.emplace_back(n, mealy::fixture(n));
  return out;
}

}  // namespace oracle
