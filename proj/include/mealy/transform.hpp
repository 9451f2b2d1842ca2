#pragma once

#include <span>
#include <vector>

#include "mealy/machine.hpp"

namespace mealy {

/// Exchanges the roles of states and letters: x --i|j--> y becomes
/// i --x|y--> j.
MealyMachine dual(const MealyMachine& m);

/// x --i|j--> y becomes x⁻¹ --j|i--> y⁻¹ (same indices).
/// Throws PreconditionError unless m is invertible.
MealyMachine inverse(const MealyMachine& m);

/// States stacked: m1's states first, then m2's shifted by m1.states().
/// Throws PreconditionError on alphabet mismatch.
MealyMachine disjoint_union(const MealyMachine& m1, const MealyMachine& m2);

struct RunResult {
  Word output_word;
  State end_state = 0;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Reads `input` from state x. Throws PreconditionError on an
/// out-of-range state or letter.
RunResult run(const MealyMachine& m, State x, std::span<const Letter> input);

/// Mixed-radix index of a word, first symbol most significant.
std::size_t word_index(std::span<const std::uint32_t> word, std::size_t radix);
Word index_word(std::size_t index, std::size_t length, std::size_t radix);

/// Runs the state word xs = x1..xn on the letter word u: x1 reads u first,
/// x2 reads x1's output, and so on. Returns the final output and the word
/// of end states.
std::pair<Word, Word> run_word(const MealyMachine& m, std::span<const State> xs,
                               std::span<const Letter> u);

/// The machine of order (n, k): states A^n, letters Σ^k, both indexed by
/// word_index. Throws LimitError if q^n·p^k exceeds size_limit().
MealyMachine power(const MealyMachine& m, std::size_t n, std::size_t k);

/// Extension with stateset A ⊔ A⁻¹ and alphabet Σ ⊔ Σ⁻¹, built as
/// A' ⊔ (A')⁻¹ with A' = d(d(A) ⊔ d(A)⁻¹). The composite exists exactly
/// when m is bireversible; otherwise a PreconditionError names the step
/// that failed.
MealyMachine extend_ir(const MealyMachine& m);

/// Weakly connected components of the δ-digraph, each as a machine over
/// the same alphabet. Components are ordered by their smallest state and
/// keep the original relative state order.
std::vector<MealyMachine> sum_components(const MealyMachine& m);
/// The state sets of sum_components, in the same order.
std::vector<std::vector<State>> sum_component_states(const MealyMachine& m);

/// Sub-machine on a δ-closed set of states (renumbered in the given order).
MealyMachine restrict_to(const MealyMachine& m, std::span<const State> states);

}  // namespace mealy
