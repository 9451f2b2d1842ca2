#include "mealy/helix.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mealy/errors.hpp"
#include "mealy/transform.hpp"

namespace mealy {

namespace {

std::size_t ipow_limited(std::size_t base, std::size_t exp, std::size_t limit) {
  std::size_t v = 1;
  for (std::size_t e = 0; e < exp; ++e) {
    if (v > limit / base) throw LimitError("helix graph: size limit exceeded");
    v *= base;
  }
  return v;
}

}  // namespace

std::uint64_t HelixGraph::encode(const Word& states, const Word& letters) const {
  std::size_t pk = 1;
  for (std::size_t e = 0; e < k; ++e) pk *= p;
  return word_index(states, q) * pk + word_index(letters, p);
}

std::pair<Word, Word> HelixGraph::decode(std::uint64_t node) const {
  std::size_t pk = 1;
  for (std::size_t e = 0; e < k; ++e) pk *= p;
  return {index_word(node / pk, n, q), index_word(node % pk, k, p)};
}

HelixGraph helix_graph(const MealyMachine& m, std::size_t n, std::size_t k) {
  if (n == 0 || k == 0) throw PreconditionError("helix graph: orders must be positive");
  const std::size_t limit = size_limit();
  const std::size_t qn = ipow_limited(m.states(), n, limit);
  const std::size_t pk = ipow_limited(m.letters(), k, limit);
  if (qn > limit / pk) throw LimitError("helix graph: size limit exceeded");

  HelixGraph h;
  h.n = n;
  h.k = k;
  h.q = m.states();
  h.p = m.letters();
  h.successor.resize(qn * pk);
  if (n == 1 && k == 1) {
    for (State x = 0; x < h.q; ++x)
      for (Letter i = 0; i < h.p; ++i) h.successor[x * pk + i] = m.next(x, i) * pk + m.out(x, i);
    return h;
  }
  for (std::size_t xi = 0; xi < qn; ++xi) {
    const Word xs = index_word(xi, n, h.q);
    for (std::size_t ui = 0; ui < pk; ++ui) {
      const Word u = index_word(ui, k, h.p);
      auto [v, ys] = run_word(m, xs, u);
      h.successor[xi * pk + ui] = word_index(ys, h.q) * pk + word_index(v, h.p);
    }
  }
  return h;
}

bool is_union_of_cycles(const HelixGraph& h) {
  std::vector<char> hit(h.node_count(), 0);
  for (auto s : h.successor) {
    if (hit[s]) return false;
    hit[s] = 1;
  }
  return true;
}

std::vector<std::size_t> cycle_lengths(const HelixGraph& h) {
  if (!is_union_of_cycles(h)) throw PreconditionError("cycle_lengths: helix graph is not a union of cycles");
  std::vector<char> seen(h.node_count(), 0);
  std::vector<std::size_t> lengths;
  for (std::uint64_t start = 0; start < h.node_count(); ++start) {
    if (seen[start]) continue;
    std::size_t len = 0;
    for (std::uint64_t v = start; !seen[v]; v = h.successor[v]) {
      seen[v] = 1;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end());
  return lengths;
}

std::size_t CycleProfile::max_len() const {
  std::size_t best = 0;
  for (const auto& r : rows)
    if (r.is_cycles) best = std::max(best, r.max_len);
  return best;
}

CycleProfile cycle_profile(const MealyMachine& m, std::size_t max_k, std::size_t max_l) {
  if (!is_invertible(m) || !is_reversible(m))
    throw PreconditionError("cycle_profile: machine is not invertible and reversible");
  CycleProfile profile;
  profile.extended = is_bireversible(m);
  const MealyMachine base = profile.extended ? extend_ir(m) : m;
  for (std::size_t k = 1; k <= max_k; ++k)
    for (std::size_t l = 1; l <= max_l; ++l) {
      HelixGraph h;
      try {
        h = helix_graph(base, k, l);
      } catch (const LimitError&) {
        continue;
      }
      CycleProfileRow row;
      row.k = k;
      row.l = l;
      row.nodes = h.node_count();
      row.is_cycles = is_union_of_cycles(h);
      if (row.is_cycles) {
        row.cycle_lengths = cycle_lengths(h);
        row.min_len = row.cycle_lengths.front();
        row.max_len = row.cycle_lengths.back();
        row.distinct_lens = std::set<std::size_t>(row.cycle_lengths.begin(), row.cycle_lengths.end()).size();
      }
      profile.rows.push_back(std::move(row));
    }
  return profile;
}

std::string to_csv(const CycleProfile& profile) {
  std::ostringstream out;
  out << "k,l,nodes,is_cycles,min_len,max_len,distinct_lens\n";
  for (const auto& r : profile.rows)
    out << r.k << ',' << r.l << ',' << r.nodes << ',' << (r.is_cycles ? 1 : 0) << ',' << r.min_len << ','
        << r.max_len << ',' << r.distinct_lens << '\n';
  return out.str();
}

}  // namespace mealy
