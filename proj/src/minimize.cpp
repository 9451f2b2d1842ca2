#include "mealy/minimize.hpp"

#include <map>

#include "mealy/transform.hpp"

namespace mealy {

namespace {

// Relabels signature vectors to dense ids in order of first occurrence.
template <class Sig>
std::size_t assign_ids(const std::vector<Sig>& sigs, std::vector<std::size_t>& ids) {
  std::map<Sig, std::size_t> seen;
  ids.resize(sigs.size());
  for (std::size_t x = 0; x < sigs.size(); ++x) {
    auto [it, inserted] = seen.emplace(sigs[x], seen.size());
    ids[x] = it->second;
  }
  return seen.size();
}

}  // namespace

NerodePartition nerode_partition(const MealyMachine& m) {
  const std::size_t q = m.states(), p = m.letters();
  std::vector<std::vector<std::uint32_t>> sigs(q);
  for (State x = 0; x < q; ++x) {
    const auto row = m.rho_table().subspan(x * p, p);
    sigs[x].assign(row.begin(), row.end());
  }
  std::vector<std::size_t> cls;
  std::size_t count = assign_ids(sigs, cls);
  for (;;) {
    for (State x = 0; x < q; ++x) {
      sigs[x].assign(1, static_cast<std::uint32_t>(cls[x]));
      for (Letter i = 0; i < p; ++i) sigs[x].push_back(static_cast<std::uint32_t>(cls[m.next(x, i)]));
    }
    std::vector<std::size_t> refined;
    const std::size_t next_count = assign_ids(sigs, refined);
    cls.swap(refined);
    if (next_count == count) break;
    count = next_count;
  }
  NerodePartition part;
  part.class_of = std::move(cls);
  part.classes.resize(count);
  for (State x = 0; x < q; ++x) part.classes[part.class_of[x]].push_back(x);
  return part;
}

MealyMachine minimize(const MealyMachine& m) {
  const NerodePartition part = nerode_partition(m);
  const std::size_t n = part.classes.size(), p = m.letters();
  if (n == m.states()) return m;
  std::vector<State> delta(n * p);
  std::vector<Letter> rho(n * p);
  for (std::size_t c = 0; c < n; ++c) {
    const State x = part.classes[c].front();
    for (Letter i = 0; i < p; ++i) {
      delta[c * p + i] = static_cast<State>(part.class_of[m.next(x, i)]);
      rho[c * p + i] = m.out(x, i);
    }
  }
  return MealyMachine(n, p, std::move(delta), std::move(rho));
}

bool is_minimal(const MealyMachine& m) { return nerode_partition(m).classes.size() == m.states(); }

Reduction md_reduce(const MealyMachine& m, Side first) {
  Reduction r{m, {}};
  Side side = first;
  int stable = 0;  // consecutive sides found already minimal
  while (stable < 2) {
    const std::size_t q = r.machine.states(), p = r.machine.letters();
    if (side == Side::primal) {
      MealyMachine reduced = minimize(r.machine);
      if (reduced.states() < q) {
        r.trace.push_back({side, q, p, reduced.states(), p});
        r.machine = std::move(reduced);
        stable = 0;
      }
    } else {
      MealyMachine reduced = minimize(dual(r.machine));
      if (reduced.states() < p) {
        r.trace.push_back({side, q, p, q, reduced.states()});
        r.machine = dual(reduced);
        stable = 0;
      }
    }
    ++stable;
    side = side == Side::primal ? Side::dual : Side::primal;
  }
  return r;
}

bool is_md_trivial(const MealyMachine& m) {
  const Reduction r = md_reduce(m);
  return r.machine.states() == 1 && r.machine.letters() == 1;
}

std::string to_string(Side side) { return side == Side::primal ? "minimize-primal" : "minimize-dual"; }

}  // namespace mealy
