#include "mealy/semigroup.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "mealy/errors.hpp"
#include "mealy/transform.hpp"

namespace mealy {

namespace {

// Flat tables used on the enumeration hot path.
struct Flat {
  std::size_t q = 0, p = 0;
  std::vector<State> d;
  std::vector<Letter> r;
};

void put_uint(std::string& s, std::uint32_t v, int width) {
  for (int b = width - 1; b >= 0; --b) s.push_back(static_cast<char>(v >> (8 * b)));
}

// Trim to the states reachable from `point`, numbered in BFS order.
Flat trim(const Flat& f, State point) {
  const std::size_t p = f.p;
  std::vector<std::uint32_t> label(f.q, UINT32_MAX);
  std::vector<State> order{point};
  label[point] = 0;
  for (std::size_t h = 0; h < order.size(); ++h)
    for (Letter i = 0; i < p; ++i) {
      const State y = f.d[order[h] * p + i];
      if (label[y] == UINT32_MAX) {
        label[y] = static_cast<std::uint32_t>(order.size());
        order.push_back(y);
      }
    }
  Flat t;
  t.q = order.size();
  t.p = p;
  t.d.resize(t.q * p);
  t.r.resize(t.q * p);
  for (std::size_t s = 0; s < t.q; ++s)
    for (Letter i = 0; i < p; ++i) {
      t.d[s * p + i] = label[f.d[order[s] * p + i]];
      t.r[s * p + i] = f.r[order[s] * p + i];
    }
  return t;
}

// Dense ids for rows of width w in `sig`, equal rows sharing an id.
std::size_t group_rows(const std::vector<std::uint32_t>& sig, std::size_t n, std::size_t w,
                       std::vector<std::uint32_t>& ids, std::vector<std::uint32_t>& idx) {
  idx.resize(n);
  std::iota(idx.begin(), idx.end(), 0u);
  auto row_less = [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(sig.begin() + a * w, sig.begin() + (a + 1) * w, sig.begin() + b * w,
                                        sig.begin() + (b + 1) * w);
  };
  std::sort(idx.begin(), idx.end(), row_less);
  ids.resize(n);
  std::uint32_t next = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && row_less(idx[k - 1], idx[k])) ++next;
    ids[idx[k]] = next;
  }
  return n == 0 ? 0 : next + 1;
}

// Hopcroft refinement of the partition by output rows. Returns the number
// of classes; cls[x] is the class of x.
std::size_t nerode_classes(const Flat& t, std::vector<std::uint32_t>& cls) {
  const std::size_t n = t.q, p = t.p;
  std::vector<std::uint32_t> idx, sig(t.r.begin(), t.r.end());
  std::size_t count = group_rows(sig, n, p, cls, idx);
  if (count == n) return count;

  // Predecessors per letter, CSR layout: pred[i] lists x with d_i(x) = y.
  std::vector<std::uint32_t> pstart((n + 1) * p, 0), pred(n * p);
  for (std::size_t x = 0; x < n; ++x)
    for (Letter i = 0; i < p; ++i) ++pstart[i * (n + 1) + t.d[x * p + i] + 1];
  for (Letter i = 0; i < p; ++i)
    for (std::size_t y = 0; y < n; ++y) pstart[i * (n + 1) + y + 1] += pstart[i * (n + 1) + y];
  {
    std::vector<std::uint32_t> fill(pstart);
    for (std::size_t x = 0; x < n; ++x)
      for (Letter i = 0; i < p; ++i) {
        const std::size_t slot = i * (n + 1) + t.d[x * p + i];
        pred[i * n + fill[slot]++] = static_cast<std::uint32_t>(x);
      }
  }

  // Blocks are contiguous ranges of `elems`; marked states are moved to the
  // front of their block.
  std::vector<std::uint32_t> elems(n), loc(n), first, end, marked;
  std::iota(elems.begin(), elems.end(), 0u);
  std::stable_sort(elems.begin(), elems.end(), [&](std::uint32_t a, std::uint32_t b) { return cls[a] < cls[b]; });
  for (std::size_t k = 0; k < n; ++k) {
    loc[elems[k]] = static_cast<std::uint32_t>(k);
    if (k == 0 || cls[elems[k]] != cls[elems[k - 1]]) {
      first.push_back(static_cast<std::uint32_t>(k));
      if (k > 0) end.push_back(static_cast<std::uint32_t>(k));
    }
  }
  end.push_back(static_cast<std::uint32_t>(n));
  marked.assign(count, 0);

  std::vector<char> waiting(count, 1);
  std::vector<std::uint32_t> work;
  std::size_t largest = 0;
  for (std::size_t b = 0; b < count; ++b)
    if (end[b] - first[b] > end[largest] - first[largest]) largest = b;
  waiting[largest] = 0;
  for (std::size_t b = 0; b < count; ++b)
    if (waiting[b]) work.push_back(static_cast<std::uint32_t>(b));

  std::vector<std::uint32_t> splitter, touched;
  while (!work.empty()) {
    const std::uint32_t s = work.back();
    work.pop_back();
    waiting[s] = 0;
    splitter.assign(elems.begin() + first[s], elems.begin() + end[s]);
    for (Letter i = 0; i < p; ++i) {
      touched.clear();
      for (std::uint32_t y : splitter) {
        const std::size_t base = i * (n + 1) + y;
        for (std::uint32_t k = pstart[base]; k < pstart[base + 1]; ++k) {
          const std::uint32_t x = pred[i * n + k];
          const std::uint32_t b = cls[x];
          const std::uint32_t pos = loc[x], dst = first[b] + marked[b];
          if (pos < dst) continue;  // already marked
          if (marked[b] == 0) touched.push_back(b);
          std::swap(elems[pos], elems[dst]);
          loc[elems[pos]] = pos;
          loc[elems[dst]] = dst;
          ++marked[b];
        }
      }
      for (std::uint32_t b : touched) {
        const std::uint32_t m = marked[b];
        marked[b] = 0;
        if (m == end[b] - first[b]) continue;
        const auto nb = static_cast<std::uint32_t>(first.size());
        first.push_back(first[b]);
        end.push_back(first[b] + m);
        marked.push_back(0);
        first[b] += m;
        for (std::uint32_t k = first[nb]; k < end[nb]; ++k) cls[elems[k]] = nb;
        if (waiting[b] || m <= end[b] - first[b]) {
          waiting.push_back(1);
          work.push_back(nb);
        } else {
          waiting.push_back(0);
          waiting[b] = 1;
          work.push_back(b);
        }
      }
    }
  }
  return first.size();
}

// Trim, minimize, relabel from the point, serialize.
Element canonical_element(const Flat& f, State point) {
  const Flat t = trim(f, point);
  const std::size_t p = t.p;
  std::vector<std::uint32_t> cls;
  const std::size_t count = nerode_classes(t, cls);
  const std::size_t n = t.q;

  // BFS over the quotient from the point's class; representatives are the
  // first trimmed state of each class, which is enough since classes agree.
  std::vector<State> rep(count, UINT32_MAX);
  for (std::size_t x = 0; x < n; ++x)
    if (rep[cls[x]] == UINT32_MAX) rep[cls[x]] = static_cast<State>(x);
  std::vector<std::uint32_t> label(count, UINT32_MAX);
  std::vector<std::uint32_t> order{cls[0]};
  label[cls[0]] = 0;
  for (std::size_t h = 0; h < order.size(); ++h)
    for (Letter i = 0; i < p; ++i) {
      const std::uint32_t c = cls[t.d[rep[order[h]] * p + i]];
      if (label[c] == UINT32_MAX) {
        label[c] = static_cast<std::uint32_t>(order.size());
        order.push_back(c);
      }
    }
  std::vector<State> delta(count * p);
  std::vector<Letter> rho(count * p);
  for (std::size_t s = 0; s < count; ++s) {
    const State x = rep[order[s]];
    for (Letter i = 0; i < p; ++i) {
      delta[s * p + i] = label[cls[t.d[x * p + i]]];
      rho[s * p + i] = t.r[x * p + i];
    }
  }
  std::string key;
  const std::size_t widest = std::max(count, p);
  const int width = widest <= 0x100 ? 1 : widest <= 0x10000 ? 2 : 4;
  key.reserve(8 + count * p * 2 * width);
  put_uint(key, static_cast<std::uint32_t>(count), 4);
  put_uint(key, static_cast<std::uint32_t>(p), 4);
  for (std::size_t k = 0; k < count * p; ++k) {
    put_uint(key, delta[k], width);
    put_uint(key, rho[k], width);
  }
  return Element{MealyMachine(count, p, std::move(delta), std::move(rho)), 0, std::move(key)};
}

Flat flat_of(const MealyMachine& m) {
  Flat f;
  f.q = m.states();
  f.p = m.letters();
  f.d.assign(m.delta_table().begin(), m.delta_table().end());
  f.r.assign(m.rho_table().begin(), m.rho_table().end());
  return f;
}

struct KeyHash {
  std::size_t operator()(const std::string& s) const noexcept { return std::hash<std::string>{}(s); }
};

// All products e·g for e in frontier[lo, hi) and every generator g, in
// order (element-major, generator-minor).
void expand(const std::vector<Element>& frontier, std::size_t lo, std::size_t hi,
            const std::vector<Element>& gens, std::vector<Element>& out) {
  out.clear();
  out.reserve((hi - lo) * gens.size());
  for (std::size_t k = lo; k < hi; ++k)
    for (const auto& g : gens) out.push_back(compose(frontier[k], g));
}

// Products of the whole frontier, in the same order regardless of `jobs`.
std::vector<Element> expand_all(const std::vector<Element>& frontier, const std::vector<Element>& gens,
                                unsigned jobs) {
  constexpr std::size_t kParallelThreshold = 1024;
  std::vector<Element> out;
  if (jobs <= 1 || frontier.size() < kParallelThreshold) {
    expand(frontier, 0, frontier.size(), gens, out);
    return out;
  }
  const std::size_t chunks = std::min<std::size_t>(jobs, frontier.size());
  std::vector<std::vector<Element>> parts(chunks);
  std::vector<std::thread> threads;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = frontier.size() * c / chunks, hi = frontier.size() * (c + 1) / chunks;
    threads.emplace_back([&, c, lo, hi] { expand(frontier, lo, hi, gens, parts[c]); });
  }
  for (auto& t : threads) t.join();
  for (auto& part : parts)
    for (auto& e : part) out.push_back(std::move(e));
  return out;
}

std::vector<Element> generators(const MealyMachine& m) {
  std::vector<Element> gens;
  std::unordered_set<std::string, KeyHash> keys;
  for (State x = 0; x < m.states(); ++x) {
    Element e = pointed_element(m, x);
    if (keys.insert(e.key).second) gens.push_back(std::move(e));
  }
  return gens;
}

}  // namespace

Element pointed_element(const MealyMachine& m, State x) {
  if (x >= m.states()) throw PreconditionError("pointed_element: state out of range");
  return canonical_element(flat_of(m), x);
}

Element element_of_word(const MealyMachine& m, std::span<const State> u) {
  if (u.empty()) throw PreconditionError("element_of_word: empty word");
  for (State x : u)
    if (x >= m.states()) throw PreconditionError("element_of_word: state out of range");
  // Reachable part of the order-(|u|,1) power automaton from u.
  const std::size_t p = m.letters();
  std::map<Word, State> index;
  std::vector<Word> words{Word(u.begin(), u.end())};
  index.emplace(words[0], 0);
  Flat f;
  f.p = p;
  for (std::size_t h = 0; h < words.size(); ++h) {
    for (Letter i = 0; i < p; ++i) {
      const Letter in[1] = {i};
      auto [v, ys] = run_word(m, words[h], in);
      auto [it, inserted] = index.emplace(ys, static_cast<State>(words.size()));
      if (inserted) words.push_back(ys);
      f.d.push_back(it->second);
      f.r.push_back(v[0]);
    }
  }
  f.q = words.size();
  return canonical_element(f, 0);
}

Element compose(const Element& e1, const Element& e2) {
  const MealyMachine& a = e1.machine;
  const MealyMachine& b = e2.machine;
  if (a.letters() != b.letters()) throw PreconditionError("compose: alphabet mismatch");
  const std::size_t p = a.letters(), nb = b.states();
  const std::size_t cells = a.states() * nb;
  Flat f;
  f.p = p;
  std::vector<std::uint32_t> label;
  std::unordered_map<std::uint64_t, std::uint32_t> sparse;
  const bool dense = cells <= (1u << 20);
  if (dense) label.assign(cells, UINT32_MAX);
  auto lookup = [&](std::uint64_t cell, std::uint32_t fresh) -> std::pair<std::uint32_t, bool> {
    if (dense) {
      if (label[cell] != UINT32_MAX) return {label[cell], false};
      label[cell] = fresh;
      return {fresh, true};
    }
    auto [it, inserted] = sparse.emplace(cell, fresh);
    return {it->second, inserted};
  };
  std::vector<std::uint64_t> pairs{static_cast<std::uint64_t>(e1.point) * nb + e2.point};
  lookup(pairs[0], 0);
  for (std::size_t h = 0; h < pairs.size(); ++h) {
    const State x = static_cast<State>(pairs[h] / nb), y = static_cast<State>(pairs[h] % nb);
    for (Letter i = 0; i < p; ++i) {
      const Letter mid = a.out(x, i);
      const std::uint64_t cell = static_cast<std::uint64_t>(a.next(x, i)) * nb + b.next(y, mid);
      auto [id, fresh] = lookup(cell, static_cast<std::uint32_t>(pairs.size()));
      if (fresh) pairs.push_back(cell);
      f.d.push_back(id);
      f.r.push_back(b.out(y, mid));
    }
  }
  f.q = pairs.size();
  return canonical_element(f, 0);
}

Element identity_element(std::size_t letters) {
  std::vector<Letter> rho(letters);
  std::iota(rho.begin(), rho.end(), 0u);
  return pointed_element(MealyMachine(1, letters, std::vector<State>(letters, 0), std::move(rho)), 0);
}

bool is_identity(const Element& e) {
  if (e.machine.states() != 1) return false;
  for (Letter i = 0; i < e.machine.letters(); ++i)
    if (e.machine.out(0, i) != i) return false;
  return true;
}

Word apply(const Element& e, std::span<const Letter> input) { return run(e.machine, e.point, input).output_word; }

EnumerationResult enumerate_order(const MealyMachine& m, const EnumerationOptions& options) {
  if (options.budget == 0) throw PreconditionError("enumerate_order: budget must be positive");
  const MealyMachine gens_machine = options.mode == Mode::group ? disjoint_union(m, inverse(m)) : m;
  const std::vector<Element> gens = generators(gens_machine);
  constexpr std::size_t kBlock = 4096;

  EnumerationResult res;
  std::unordered_set<std::string, KeyHash> seen;
  // False once a budget is exhausted.
  auto admit = [&](Element&& e, std::vector<Element>& next) {
    if (!seen.insert(e.key).second) return true;
    if (seen.size() > options.budget) return false;
    res.work_used += e.machine.states();
    if (res.work_used > options.work_budget) {
      res.work_exhausted = true;
      return false;
    }
    if (options.keep_elements) res.elements.push_back(e);
    next.push_back(std::move(e));
    return true;
  };
  auto give_up = [&] {
    res.status = EnumerationStatus::budget_exceeded;
    res.elements_seen = std::min(seen.size(), options.budget);
    res.budget_used = res.elements_seen;
    return res;
  };

  std::vector<Element> frontier;
  if (options.mode == Mode::group) {
    std::vector<Element> unused;
    if (!admit(identity_element(m.letters()), unused)) return give_up();
  }
  for (const auto& g : gens)
    if (!admit(Element(g), frontier)) return give_up();
  res.max_word_length = 1;
  while (!frontier.empty()) {
    std::vector<Element> next;
    for (std::size_t lo = 0; lo < frontier.size(); lo += kBlock) {
      const std::size_t hi = std::min(frontier.size(), lo + kBlock);
      const std::vector<Element> block(frontier.begin() + lo, frontier.begin() + hi);
      for (auto& e : expand_all(block, gens, options.jobs))
        if (!admit(std::move(e), next)) {
          res.max_word_length += 1;
          return give_up();
        }
    }
    frontier.swap(next);
    if (!frontier.empty()) ++res.max_word_length;
  }
  res.status = EnumerationStatus::finite;
  res.order = seen.size();
  res.elements_seen = seen.size();
  res.budget_used = seen.size();
  return res;
}

EnumerationResult enumerate_order(const MealyMachine& m, Mode mode, std::size_t budget, unsigned jobs) {
  EnumerationOptions o;
  o.mode = mode;
  o.budget = budget;
  o.jobs = jobs;
  return enumerate_order(m, o);
}

std::vector<std::size_t> growth_series(const MealyMachine& m, std::size_t max_n, unsigned jobs) {
  const std::vector<Element> gens = generators(m);
  std::vector<std::size_t> series;
  std::vector<Element> level = gens;
  const std::size_t limit = size_limit();
  for (std::size_t n = 1; n <= max_n; ++n) {
    series.push_back(level.size());
    if (n == max_n) break;
    std::vector<Element> products = expand_all(level, gens, jobs);
    std::unordered_set<std::string, KeyHash> keys;
    std::vector<Element> next;
    for (auto& e : products)
      if (keys.insert(e.key).second) {
        next.push_back(std::move(e));
        if (next.size() > limit) throw LimitError("growth_series: level exceeds size limit");
      }
    level.swap(next);
  }
  return series;
}

std::optional<ElementOrder> element_order(const Element& e, std::size_t budget) {
  std::unordered_map<std::string, std::size_t, KeyHash> exponent;
  Element cur = e;
  for (std::size_t k = 1; k <= budget + 1; ++k) {
    auto [it, inserted] = exponent.emplace(cur.key, k);
    if (!inserted) return ElementOrder{it->second, k - it->second};
    if (k <= budget) cur = compose(cur, e);
  }
  return std::nullopt;
}

}  // namespace mealy
