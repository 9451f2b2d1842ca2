#include "mealy/transform.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mealy/errors.hpp"

namespace mealy {

MealyMachine dual(const MealyMachine& m) {
  const std::size_t q = m.states(), p = m.letters();
  std::vector<State> delta(q * p);
  std::vector<Letter> rho(q * p);
  for (Letter i = 0; i < p; ++i)
    for (State x = 0; x < q; ++x) {
      delta[i * q + x] = m.out(x, i);
      rho[i * q + x] = m.next(x, i);
    }
  return MealyMachine(p, q, std::move(delta), std::move(rho));
}

MealyMachine inverse(const MealyMachine& m) {
  if (!is_invertible(m)) throw PreconditionError("inverse: machine is not invertible");
  const std::size_t q = m.states(), p = m.letters();
  std::vector<State> delta(q * p);
  std::vector<Letter> rho(q * p);
  for (State x = 0; x < q; ++x)
    for (Letter i = 0; i < p; ++i) {
      const Letter j = m.out(x, i);
      delta[x * p + j] = m.next(x, i);
      rho[x * p + j] = i;
    }
  return MealyMachine(q, p, std::move(delta), std::move(rho));
}

MealyMachine disjoint_union(const MealyMachine& m1, const MealyMachine& m2) {
  if (m1.letters() != m2.letters()) throw PreconditionError("disjoint_union: alphabets differ");
  const std::size_t q1 = m1.states();
  std::vector<State> delta(m1.delta_table().begin(), m1.delta_table().end());
  std::vector<Letter> rho(m1.rho_table().begin(), m1.rho_table().end());
  for (State t : m2.delta_table()) delta.push_back(static_cast<State>(t + q1));
  rho.insert(rho.end(), m2.rho_table().begin(), m2.rho_table().end());
  return MealyMachine(q1 + m2.states(), m1.letters(), std::move(delta), std::move(rho));
}

RunResult run(const MealyMachine& m, State x, std::span<const Letter> input) {
  if (x >= m.states()) throw PreconditionError("run: state out of range");
  RunResult r;
  r.output_word.reserve(input.size());
  for (Letter i : input) {
    if (i >= m.letters()) throw PreconditionError("run: letter out of range");
    r.output_word.push_back(m.out(x, i));
    x = m.next(x, i);
  }
  r.end_state = x;
  return r;
}

std::size_t word_index(std::span<const std::uint32_t> word, std::size_t radix) {
  std::size_t idx = 0;
  for (auto s : word) idx = idx * radix + s;
  return idx;
}

Word index_word(std::size_t index, std::size_t length, std::size_t radix) {
  Word w(length);
  for (std::size_t k = length; k-- > 0;) {
    w[k] = static_cast<std::uint32_t>(index % radix);
    index /= radix;
  }
  return w;
}

std::pair<Word, Word> run_word(const MealyMachine& m, std::span<const State> xs,
                               std::span<const Letter> u) {
  Word cur(u.begin(), u.end());
  Word ends;
  ends.reserve(xs.size());
  for (State x : xs) {
    RunResult r = run(m, x, cur);
    cur = std::move(r.output_word);
    ends.push_back(r.end_state);
  }
  return {std::move(cur), std::move(ends)};
}

namespace {

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t limit) {
  std::size_t v = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    if (v > limit / base) throw LimitError("power: size limit exceeded");
    v *= base;
  }
  return v;
}

}  // namespace

MealyMachine power(const MealyMachine& m, std::size_t n, std::size_t k) {
  if (n == 0 || k == 0) throw PreconditionError("power: orders must be positive");
  const std::size_t limit = size_limit();
  const std::size_t qn = checked_pow(m.states(), n, limit);
  const std::size_t pk = checked_pow(m.letters(), k, limit);
  if (qn > limit / pk) throw LimitError("power: size limit exceeded");
  std::vector<State> delta(qn * pk);
  std::vector<Letter> rho(qn * pk);
  for (std::size_t xi = 0; xi < qn; ++xi) {
    const Word xs = index_word(xi, n, m.states());
    for (std::size_t ui = 0; ui < pk; ++ui) {
      const Word u = index_word(ui, k, m.letters());
      auto [v, ys] = run_word(m, xs, u);
      delta[xi * pk + ui] = static_cast<State>(word_index(ys, m.states()));
      rho[xi * pk + ui] = static_cast<Letter>(word_index(v, m.letters()));
    }
  }
  return MealyMachine(qn, pk, std::move(delta), std::move(rho));
}

MealyMachine extend_ir(const MealyMachine& m) {
  if (!is_invertible(m) || !is_reversible(m))
    throw PreconditionError("extend_ir: machine is not invertible and reversible");
  const MealyMachine d = dual(m);
  const MealyMachine prime = dual(disjoint_union(d, inverse(d)));
  if (!is_invertible(prime))
    throw PreconditionError(
        "extend_ir: d(d(A) + d(A)^-1) is not invertible (machine is not bireversible)");
  return disjoint_union(prime, inverse(prime));
}

std::vector<std::vector<State>> sum_component_states(const MealyMachine& m) {
  const std::size_t q = m.states();
  std::vector<State> parent(q);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](State x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (State x = 0; x < q; ++x)
    for (Letter i = 0; i < m.letters(); ++i) {
      State a = find(x), b = find(m.next(x, i));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<std::vector<State>> comps;
  std::vector<std::size_t> comp_of_root(q, static_cast<std::size_t>(-1));
  for (State x = 0; x < q; ++x) {
    const State r = find(x);
    if (comp_of_root[r] == static_cast<std::size_t>(-1)) {
      comp_of_root[r] = comps.size();
      comps.emplace_back();
    }
    comps[comp_of_root[r]].push_back(x);
  }
  return comps;
}

MealyMachine restrict_to(const MealyMachine& m, std::span<const State> states) {
  const std::size_t p = m.letters();
  std::vector<std::int64_t> index(m.states(), -1);
  for (std::size_t k = 0; k < states.size(); ++k) index[states[k]] = static_cast<std::int64_t>(k);
  std::vector<State> delta;
  std::vector<Letter> rho;
  delta.reserve(states.size() * p);
  rho.reserve(states.size() * p);
  for (State x : states)
    for (Letter i = 0; i < p; ++i) {
      const std::int64_t t = index[m.next(x, i)];
      if (t < 0) throw PreconditionError("restrict_to: state set is not closed under transitions");
      delta.push_back(static_cast<State>(t));
      rho.push_back(m.out(x, i));
    }
  return MealyMachine(states.size(), p, std::move(delta), std::move(rho));
}

std::vector<MealyMachine> sum_components(const MealyMachine& m) {
  std::vector<MealyMachine> out;
  for (const auto& comp : sum_component_states(m)) out.push_back(restrict_to(m, comp));
  return out;
}

}  // namespace mealy
