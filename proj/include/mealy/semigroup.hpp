#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mealy/machine.hpp"

namespace mealy {

/// One production function ρ_u, represented by the minimal machine of the
/// states reachable from a point, relabeled in breadth-first order from
/// that point (letters ascending). The point is always state 0.
///
/// Two elements are equal iff their keys are equal iff they define the
/// same map on Σ*.
struct Element {
  MealyMachine machine;
  State point = 0;
  std::string key;

  friend bool operator==(const Element& a, const Element& b) { return a.key == b.key; }
};

/// Canonical element of the pointed machine (m, x).
Element pointed_element(const MealyMachine& m, State x);

/// ρ_u for a non-empty state word u, computed on the reachable part of the
/// power automaton from u. Throws PreconditionError on an empty word or an
/// out-of-range state.
Element element_of_word(const MealyMachine& m, std::span<const State> u);

/// Element of ρ_{e2} ∘ ρ_{e1}: apply e1 first, matching ρ_{u·v}.
/// Throws PreconditionError if the alphabets differ.
Element compose(const Element& e1, const Element& e2);

Element identity_element(std::size_t letters);
bool is_identity(const Element& e);

/// Applies the element to a letter word.
Word apply(const Element& e, std::span<const Letter> input);

enum class Mode { semigroup, group };

enum class EnumerationStatus { finite, budget_exceeded };

struct EnumerationOptions {
  Mode mode = Mode::semigroup;
  std::size_t budget = 1'000'000;  // maximum number of distinct elements
  /// Maximum total number of states over all admitted elements. Element
  /// machines can grow exponentially with word length, so the element
  /// budget alone does not bound the running time.
  std::size_t work_budget = std::size_t{1} << 22;
  unsigned jobs = 1;
  bool keep_elements = false;
};

struct EnumerationResult {
  EnumerationStatus status = EnumerationStatus::budget_exceeded;
  std::size_t order = 0;          // valid when status == finite
  std::size_t elements_seen = 0;
  std::size_t max_word_length = 0;
  std::size_t budget_used = 0;
  std::size_t work_used = 0;
  bool work_exhausted = false;    // stopped by work_budget rather than budget
  std::vector<Element> elements;  // discovery order, when keep_elements

  bool finite() const noexcept { return status == EnumerationStatus::finite; }
};

/// Breadth-first closure from the generators (states in order) under
/// right multiplication by generators. Group mode enumerates the
/// semigroup of m ⊔ m⁻¹ and counts the identity. Products are admitted in
/// a fixed order, so results do not depend on `jobs`.
/// Throws PreconditionError for group mode on a non-invertible machine,
/// or when the budget is zero.
EnumerationResult enumerate_order(const MealyMachine& m, const EnumerationOptions& options);

EnumerationResult enumerate_order(const MealyMachine& m, Mode mode, std::size_t budget,
                                  unsigned jobs = 1);

/// For n = 1..max_n, the number of distinct ρ_u over words u of length
/// exactly n. Throws LimitError if a level exceeds size_limit().
std::vector<std::size_t> growth_series(const MealyMachine& m, std::size_t max_n, unsigned jobs = 1);

/// Eventual periodicity of the powers of e: e^(index+period) = e^index
/// with both minimal. For a group element index is 1 and period is its
/// order.
struct ElementOrder {
  std::size_t index = 0;
  std::size_t period = 0;
};

/// nullopt if e^1..e^(budget+1) are pairwise distinct.
std::optional<ElementOrder> element_order(const Element& e, std::size_t budget);

}  // namespace mealy
