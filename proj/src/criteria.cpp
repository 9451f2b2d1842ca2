#include "mealy/criteria.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mealy/errors.hpp"
#include "mealy/helix.hpp"
#include "mealy/minimize.hpp"
#include "mealy/semigroup.hpp"
#include "mealy/transform.hpp"

namespace mealy {

std::string to_string(Decision d) {
  switch (d) {
    case Decision::finite: return "Finite";
    case Decision::infinite: return "Infinite";
    default: return "Unknown";
  }
}

namespace {

Verdict decided(Decision d, std::string rule, std::string note) {
  Verdict v;
  v.decision = d;
  v.trace.push_back({std::move(rule), "", 0, std::move(note)});
  return v;
}

Verdict unknown() { return {}; }

// reach[x][y]: y reachable from x by a path of length ≥ 0 in the digraph
// with arcs x -> succ(x).
template <class Succ>
std::vector<std::vector<char>> reachability(std::size_t q, Succ succ) {
  std::vector<std::vector<char>> reach(q, std::vector<char>(q, 0));
  for (std::size_t x = 0; x < q; ++x) {
    std::vector<std::size_t> stack{x};
    reach[x][x] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      succ(u, [&](std::size_t v) {
        if (!reach[x][v]) {
          reach[x][v] = 1;
          stack.push_back(v);
        }
      });
    }
  }
  return reach;
}

std::vector<std::vector<char>> delta_reachability(const MealyMachine& m) {
  return reachability(m.states(), [&](std::size_t u, auto&& visit) {
    for (Letter i = 0; i < m.letters(); ++i) visit(m.next(static_cast<State>(u), i));
  });
}

bool helix_is_cycles(const MealyMachine& m) { return is_union_of_cycles(helix_graph(m, 1, 1)); }

bool ir(const MealyMachine& m) { return is_invertible(m) && is_reversible(m); }

}  // namespace

// --- finite semigroups ------------------------------------------------------

bool is_associative(const SemigroupTable& s) {
  const auto n = static_cast<std::uint32_t>(s.n);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        if (s(s(a, b), c) != s(a, s(b, c))) return false;
  return true;
}

bool is_h_trivial(const SemigroupTable& s) {
  const auto n = static_cast<std::uint32_t>(s.n);
  // aS¹ and S¹a as membership vectors.
  std::vector<std::vector<char>> right(n, std::vector<char>(n, 0)), left = right;
  for (std::uint32_t a = 0; a < n; ++a) {
    right[a][a] = left[a][a] = 1;
    for (std::uint32_t x = 0; x < n; ++x) {
      right[a][s(a, x)] = 1;
      left[a][s(x, a)] = 1;
    }
  }
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = a + 1; b < n; ++b)
      if (right[a] == right[b] && left[a] == left[b]) return false;
  return true;
}

bool has_right_zero_pair(const SemigroupTable& s) {
  const auto n = static_cast<std::uint32_t>(s.n);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      if (a != b && s(a, a) == a && s(b, b) == b && s(a, b) == b && s(b, a) == a) return true;
  return false;
}

MealyMachine cayley_machine(const SemigroupTable& s) {
  std::vector<State> d(s.n * s.n);
  std::vector<Letter> r(s.n * s.n);
  for (std::uint32_t x = 0; x < s.n; ++x)
    for (std::uint32_t y = 0; y < s.n; ++y) d[x * s.n + y] = r[x * s.n + y] = s(x, y);
  return MealyMachine(s.n, s.n, std::move(d), std::move(r));
}

MealyMachine dual_cayley_machine(const SemigroupTable& s) {
  std::vector<State> d(s.n * s.n);
  std::vector<Letter> r(s.n * s.n);
  for (std::uint32_t x = 0; x < s.n; ++x)
    for (std::uint32_t y = 0; y < s.n; ++y) {
      d[x * s.n + y] = s(x, y);
      r[x * s.n + y] = s(y, x);
    }
  return MealyMachine(s.n, s.n, std::move(d), std::move(r));
}

namespace {

void find_cayley(const MealyMachine& m, bool inverted, std::vector<CayleyMatch>& out) {
  const std::size_t n = m.states();
  std::vector<std::uint32_t> psi(n), inv(n);
  std::iota(psi.begin(), psi.end(), 0u);
  bool found[2] = {false, false};
  do {
    for (std::uint32_t i = 0; i < n; ++i) inv[psi[i]] = i;
    SemigroupTable s{n, std::vector<std::uint32_t>(n * n)};
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b) s.mul[a * n + b] = m.next(a, inv[b]);
    bool fits[2] = {true, true};
    for (State x = 0; x < n; ++x)
      for (Letter i = 0; i < n; ++i) {
        const std::uint32_t image = psi[m.out(x, i)];
        if (image != m.next(x, i)) fits[0] = false;
        if (image != m.next(psi[i], inv[x])) fits[1] = false;
      }
    for (int k = 0; k < 2; ++k)
      if (fits[k] && !found[k] && is_associative(s)) {
        found[k] = true;
        out.push_back({k == 0 ? CayleyKind::cayley : CayleyKind::dual_cayley, inverted, s});
      }
  } while (!(found[0] && found[1]) && std::next_permutation(psi.begin(), psi.end()));
}

}  // namespace

std::vector<CayleyMatch> cayley_matches(const MealyMachine& m) {
  std::vector<CayleyMatch> out;
  if (m.states() != m.letters()) return out;
  find_cayley(m, false, out);
  if (is_invertible(m)) find_cayley(inverse(m), true, out);
  return out;
}

// --- base criteria ----------------------------------------------------------

std::vector<bool> identity_states(const MealyMachine& m) {
  const std::size_t q = m.states(), p = m.letters();
  std::vector<bool> id(q);
  for (State x = 0; x < q; ++x) {
    id[x] = true;
    for (Letter i = 0; i < p; ++i)
      if (m.out(x, i) != i) id[x] = false;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (State x = 0; x < q; ++x)
      if (id[x])
        for (Letter i = 0; i < p; ++i)
          if (!id[m.next(x, i)]) {
            id[x] = false;
            changed = true;
            break;
          }
  }
  return id;
}

std::vector<bool> bounded_states(const MealyMachine& m) {
  if (!is_invertible(m)) throw PreconditionError("bounded_states: machine is not invertible");
  const std::size_t q = m.states(), p = m.letters();
  const std::vector<bool> id = identity_states(m);
  // Non-identity digraph, arcs counted per letter.
  std::vector<std::vector<State>> succ(q);
  for (State x = 0; x < q; ++x)
    if (!id[x])
      for (Letter i = 0; i < p; ++i)
        if (!id[m.next(x, i)]) succ[x].push_back(m.next(x, i));
  const auto reach = reachability(q, [&](std::size_t u, auto&& visit) {
    for (State v : succ[u]) visit(v);
  });
  std::vector<char> cyclic(q, 0);
  for (State u = 0; u < q; ++u)
    for (State v : succ[u])
      if (reach[v][u]) cyclic[u] = 1;
  auto same_scc = [&](State a, State b) { return reach[a][b] && reach[b][a]; };

  // A cyclic vertex is good when exactly one of its arcs stays in its
  // component and no other cyclic component is reachable from it.
  std::vector<char> good(q, 1);
  for (State u = 0; u < q; ++u) {
    if (!cyclic[u]) continue;
    std::size_t inside = 0;
    for (State v : succ[u])
      if (same_scc(u, v)) ++inside;
    if (inside != 1) good[u] = 0;
    for (State v = 0; v < q; ++v)
      if (reach[u][v] && cyclic[v] && !same_scc(u, v)) good[u] = 0;
  }
  std::vector<bool> bounded(q, true);
  for (State x = 0; x < q; ++x) {
    if (id[x]) continue;
    for (State u = 0; u < q; ++u)
      if (reach[x][u] && cyclic[u] && !good[u]) bounded[x] = false;
  }
  return bounded;
}

Verdict md_trivial_criterion(const MealyMachine& m) {
  const Reduction r = md_reduce(m);
  if (r.machine.states() == 1 && r.machine.letters() == 1)
    return decided(Decision::finite, "md-trivial", std::to_string(r.trace.size()) + " reduction steps");
  return unknown();
}

Verdict cycles_criterion(const MealyMachine& m) {
  if (ir(m) && !helix_is_cycles(m))
    return decided(Decision::infinite, "cycles", "IR, helix(1,1) not a union of cycles");
  if (is_invertible(m)) {
    const MealyMachine mi = inverse(m);
    if (ir(mi) && !helix_is_cycles(mi))
      return decided(Decision::infinite, "cycles", "inverse is IR, its helix(1,1) not a union of cycles");
  }
  return unknown();
}

Verdict finitary_criterion(const MealyMachine& m) {
  const MealyMachine mm = minimize(m);
  const std::size_t q = mm.states();
  std::vector<bool> id(q);
  for (State x = 0; x < q; ++x) id[x] = is_identity(pointed_element(mm, x));
  // Kahn's algorithm on the non-identity subgraph.
  std::vector<std::size_t> indeg(q, 0);
  for (State x = 0; x < q; ++x)
    if (!id[x])
      for (Letter i = 0; i < mm.letters(); ++i)
        if (!id[mm.next(x, i)]) ++indeg[mm.next(x, i)];
  std::vector<State> ready;
  std::size_t live = 0;
  for (State x = 0; x < q; ++x)
    if (!id[x]) {
      ++live;
      if (indeg[x] == 0) ready.push_back(x);
    }
  std::size_t removed = 0;
  while (!ready.empty()) {
    const State x = ready.back();
    ready.pop_back();
    ++removed;
    for (Letter i = 0; i < mm.letters(); ++i) {
      const State y = mm.next(x, i);
      if (!id[y] && --indeg[y] == 0) ready.push_back(y);
    }
  }
  if (removed == live) return decided(Decision::finite, "finitary", "non-identity part is acyclic");
  return unknown();
}

Verdict sidki_criterion(const MealyMachine& m) {
  const MealyMachine mm = minimize(m);
  if (!is_invertible(mm)) return unknown();
  const std::vector<bool> id = identity_states(mm);
  const std::vector<bool> bounded = bounded_states(mm);
  const auto reach = delta_reachability(mm);
  for (State x = 0; x < mm.states(); ++x) {
    if (id[x] || !bounded[x]) continue;
    for (Letter i = 0; i < mm.letters(); ++i) {
      const State y = mm.next(x, i);
      if (mm.out(x, i) != i && reach[x][y] && reach[y][x]) {
        std::ostringstream note;
        note << "bounded state " << x << " has active arc " << i << '|' << mm.out(x, i) << " inside its component";
        return decided(Decision::infinite, "sidki", note.str());
      }
    }
  }
  return unknown();
}

Verdict limitary_cycles_criterion(const MealyMachine& m) {
  const std::size_t q = m.states(), p = m.letters();
  const auto reach = delta_reachability(m);
  std::vector<char> accessible(q, 0);
  for (State y = 0; y < q; ++y) {
    bool cyclic = false;
    for (Letter i = 0; i < p; ++i)
      if (reach[m.next(y, i)][y]) cyclic = true;
    if (!cyclic) continue;
    for (State x = 0; x < q; ++x)
      if (reach[y][x]) accessible[x] = 1;
  }
  for (State x = 0; x < q; ++x) {
    if (!accessible[x]) continue;
    for (Letter i = 1; i < p; ++i)
      if (m.next(x, i) != m.next(x, 0)) return unknown();
  }
  return decided(Decision::finite, "limitary", "no branching below cyclic states");
}

Verdict cayley_criterion(const MealyMachine& m) {
  const auto matches = cayley_matches(m);
  if (matches.empty()) return unknown();
  const CayleyMatch& c = matches.front();
  const bool h_trivial = is_h_trivial(c.semigroup);
  bool finite = h_trivial;
  std::string note = c.kind == CayleyKind::cayley ? "C(S)" : "C*(S)";
  if (c.inverted) note = "inverse of " + note;
  note += h_trivial ? ", S is H-trivial" : ", S is not H-trivial";
  if (c.kind == CayleyKind::dual_cayley && h_trivial && has_right_zero_pair(c.semigroup)) {
    finite = false;
    note += ", S has a right-zero pair";
  }
  return decided(finite ? Decision::finite : Decision::infinite, "cayley", note);
}

const std::vector<std::string>& base_criteria() {
  static const std::vector<std::string> names = {"md-trivial", "cycles", "finitary",
                                                 "sidki",      "limitary", "cayley"};
  return names;
}

Verdict run_criterion(const std::string& name, const MealyMachine& m) {
  if (name == "md-trivial") return md_trivial_criterion(m);
  if (name == "cycles") return cycles_criterion(m);
  if (name == "finitary") return finitary_criterion(m);
  if (name == "sidki") return sidki_criterion(m);
  if (name == "limitary") return limitary_cycles_criterion(m);
  if (name == "cayley") return cayley_criterion(m);
  throw PreconditionError("unknown criterion: " + name);
}

// --- decision pipeline -------------------------------------------------------

RuleSet RuleSet::none() {
  RuleSet r;
  r.md_trivial = r.cycles = r.finitary = r.sidki = r.limitary = r.cayley = r.reduce = r.sum = r.dual = false;
  return r;
}

RuleSet RuleSet::new_only() {
  RuleSet r = none();
  r.md_trivial = r.cycles = r.sum = r.dual = true;
  return r;
}

RuleSet RuleSet::parse(const std::string& list) {
  RuleSet r = none();
  std::stringstream in(list);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (name.empty()) continue;
    if (name == "all") {
      r = all();
    } else if (name == "new") {
      r.md_trivial = r.cycles = r.sum = r.dual = true;
    } else if (name == "previous") {
      r.finitary = r.sidki = r.limitary = r.cayley = true;
    } else if (name == "md-trivial") {
      r.md_trivial = true;
    } else if (name == "cycles") {
      r.cycles = true;
    } else if (name == "finitary") {
      r.finitary = true;
    } else if (name == "sidki") {
      r.sidki = true;
    } else if (name == "limitary") {
      r.limitary = true;
    } else if (name == "cayley") {
      r.cayley = true;
    } else if (name == "reduce") {
      r.reduce = true;
    } else if (name == "sum") {
      r.sum = true;
    } else if (name == "dual") {
      r.dual = true;
    } else {
      throw ParseError("unknown rule: " + name);
    }
  }
  return r;
}

bool RuleSet::enabled(const std::string& rule) const {
  if (rule == "md-trivial") return md_trivial;
  if (rule == "cycles") return cycles;
  if (rule == "finitary") return finitary;
  if (rule == "sidki") return sidki;
  if (rule == "limitary") return limitary;
  if (rule == "cayley") return cayley;
  if (rule == "reduce") return reduce;
  if (rule == "sum") return sum;
  if (rule == "dual") return dual;
  return false;
}

namespace {

std::string join_path(const std::string& segment, const std::string& rest) {
  return rest.empty() ? segment : segment + "/" + rest;
}

Verdict wrap(const Verdict& inner, const std::string& rule, const std::string& segment, std::size_t arg,
             std::string note) {
  Verdict v;
  v.decision = inner.decision;
  v.trace.push_back({rule, "", arg, std::move(note)});
  for (TraceStep s : inner.trace) {
    s.path = join_path(segment, s.path);
    v.trace.push_back(std::move(s));
  }
  return v;
}

class Deriver {
 public:
  explicit Deriver(const DecideConfig& c) : config_(c) {}

  std::vector<Verdict> collect(const MealyMachine& m, std::size_t depth) {
    const auto memo_key = std::make_pair(serialize(m), depth);
    if (auto it = memo_.find(memo_key); it != memo_.end()) return it->second;

    std::vector<Verdict> out;
    std::set<std::pair<std::string, Decision>> kept;
    auto keep = [&](Verdict v) {
      if (kept.emplace(v.trace.front().rule, v.decision).second) out.push_back(std::move(v));
    };
    for (const auto& name : base_criteria()) {
      if (!config_.rules.enabled(name)) continue;
      Verdict v = run_criterion(name, m);
      if (v.decided()) keep(std::move(v));
    }
    if (depth > 0) {
      if (config_.rules.reduce) {
        const Reduction r = md_reduce(m);
        if (r.machine.states() != m.states() || r.machine.letters() != m.letters()) {
          std::ostringstream note;
          note << m.states() << "x" << m.letters() << " -> " << r.machine.states() << "x" << r.machine.letters();
          for (const auto& v : collect(r.machine, depth - 1)) keep(wrap(v, "reduce", "md", 0, note.str()));
        }
      }
      if (config_.rules.sum) {
        const auto comps = sum_components(m);
        if (comps.size() > 1)
          for (std::size_t k = 0; k < comps.size(); ++k)
            for (const auto& v : collect(comps[k], depth - 1))
              if (v.decision == Decision::infinite)
                keep(wrap(v, "sum", "sum[" + std::to_string(k) + "]", k,
                          "component " + std::to_string(k) + " of " + std::to_string(comps.size())));
      }
      if (config_.rules.dual)
        for (const auto& v : collect(dual(m), depth - 1)) keep(wrap(v, "dual", "dual", 0, ""));
    }
    memo_.emplace(memo_key, out);
    return out;
  }

 private:
  const DecideConfig& config_;
  std::map<std::pair<std::string, std::size_t>, std::vector<Verdict>> memo_;
};

std::string describe(const Verdict& v) {
  std::string s = to_string(v.decision) + " via";
  for (const auto& step : v.trace) s += " " + step.rule + (step.path.empty() ? "" : "@" + step.path);
  return s;
}

}  // namespace

std::vector<Verdict> derivations(const MealyMachine& m, const DecideConfig& config) {
  Deriver d(config);
  std::vector<Verdict> out = d.collect(m, config.depth);
  if (config.budget > 0) {
    const EnumerationResult r = enumerate_order(m, Mode::semigroup, config.budget, config.jobs);
    if (r.finite()) {
      Verdict v;
      v.decision = Decision::finite;
      v.trace.push_back({"bfs", "", config.budget, "order " + std::to_string(r.order)});
      v.order = r.order;
      out.push_back(std::move(v));
    }
  }
  const Verdict* fin = nullptr;
  const Verdict* inf = nullptr;
  for (const auto& v : out) {
    if (v.decision == Decision::finite && !fin) fin = &v;
    if (v.decision == Decision::infinite && !inf) inf = &v;
  }
  if (fin && inf)
    throw InternalError("contradictory derivations: " + describe(*fin) + " / " + describe(*inf) + " on " +
                        to_compact(m));
  return out;
}

Verdict decide(const MealyMachine& m, const DecideConfig& config) {
  auto all = derivations(m, config);
  if (all.empty()) return unknown();
  return all.front();
}

Decision replay(const MealyMachine& m, const Verdict& v) {
  MealyMachine cur = m;
  bool infinite_only = false;
  for (const auto& step : v.trace) {
    if (step.rule == "dual") {
      cur = dual(cur);
    } else if (step.rule == "reduce") {
      cur = md_reduce(cur).machine;
    } else if (step.rule == "sum") {
      auto comps = sum_components(cur);
      if (step.arg >= comps.size()) return Decision::unknown;
      cur = comps[step.arg];
      infinite_only = true;
    } else if (step.rule == "bfs") {
      const auto r = enumerate_order(cur, Mode::semigroup, step.arg);
      return r.finite() ? Decision::finite : Decision::unknown;
    } else {
      const Decision d = run_criterion(step.rule, cur).decision;
      if (infinite_only && d != Decision::infinite) return Decision::unknown;
      return d;
    }
  }
  return Decision::unknown;
}

std::string to_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["decision"] = to_string(v.decision);
  if (v.order) j["order"] = *v.order;
  j["trace"] = nlohmann::ordered_json::array();
  for (const auto& s : v.trace)
    j["trace"].push_back({{"rule", s.rule}, {"path", s.path}, {"arg", s.arg}, {"note", s.note}});
  return j.dump();
}

}  // namespace mealy
