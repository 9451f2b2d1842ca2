#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mealy/machine.hpp"

namespace mealy {

/// Functional digraph on A^n × Σ^k with arcs (x, u) -> (δ_u(x), ρ_x(u)).
///
/// Node (x, u) has index word_index(x)·p^k + word_index(u), i.e. the state
/// word is the major digit, matching the indexing of power().
struct HelixGraph {
  std::size_t n = 1, k = 1;
  std::size_t q = 1, p = 1;
  std::vector<std::uint64_t> successor;

  std::size_t node_count() const noexcept { return successor.size(); }
  std::uint64_t encode(const Word& states, const Word& letters) const;
  std::pair<Word, Word> decode(std::uint64_t node) const;
};

/// Throws LimitError if q^n·p^k exceeds size_limit().
HelixGraph helix_graph(const MealyMachine& m, std::size_t n, std::size_t k);

/// Every node has in-degree exactly one.
bool is_union_of_cycles(const HelixGraph& h);

/// Sorted lengths of the disjoint cycles. Throws PreconditionError unless
/// the graph is a union of cycles.
std::vector<std::size_t> cycle_lengths(const HelixGraph& h);

struct CycleProfileRow {
  std::size_t k = 0, l = 0;
  std::size_t nodes = 0;
  bool is_cycles = false;
  std::size_t min_len = 0, max_len = 0;
  std::size_t distinct_lens = 0;
  std::vector<std::size_t> cycle_lengths;  // empty unless is_cycles
};

struct CycleProfile {
  /// True when the rows describe the extension Ã; false when m is IR but
  /// not bireversible, in which case Ã does not exist and the rows describe
  /// m itself.
  bool extended = false;
  std::vector<CycleProfileRow> rows;

  /// Largest cycle length over all union-of-cycles rows.
  std::size_t max_len() const;
};

/// Helix graphs H(k, l) of Ã for 1 ≤ k ≤ max_k, 1 ≤ l ≤ max_l, skipping
/// orders whose node count exceeds size_limit(). Throws PreconditionError
/// unless m is IR. Exploratory only: never yields a verdict.
CycleProfile cycle_profile(const MealyMachine& m, std::size_t max_k, std::size_t max_l);

/// CSV with header k,l,nodes,is_cycles,min_len,max_len,distinct_lens.
std::string to_csv(const CycleProfile& profile);

}  // namespace mealy
