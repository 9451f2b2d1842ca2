#pragma once

#include <string>
#include <vector>

#include "mealy/machine.hpp"

namespace mealy {

/// Nerode equivalence: the coarsest congruence on states. Class ids are
/// numbered in order of first occurrence (state 0 is in class 0).
struct NerodePartition {
  std::vector<std::size_t> class_of;
  std::vector<std::vector<State>> classes;
};

/// Starts from "same output row" and refines by successor classes until
/// the number of classes stops growing (at most q rounds).
NerodePartition nerode_partition(const MealyMachine& m);

/// Quotient of m by its Nerode partition. Class k becomes state k.
MealyMachine minimize(const MealyMachine& m);

bool is_minimal(const MealyMachine& m);

enum class Side { primal, dual };

struct ReductionStep {
  Side side;
  std::size_t states_before, letters_before;
  std::size_t states_after, letters_after;
};

using ReductionTrace = std::vector<ReductionStep>;

struct Reduction {
  MealyMachine machine;
  ReductionTrace trace;
};

/// Alternately minimizes the machine and its dual until both are minimal.
/// Only size-reducing steps are recorded. The result does not depend on
/// `first` up to isomorphism.
Reduction md_reduce(const MealyMachine& m, Side first = Side::primal);

/// md_reduce ends at the one-state one-letter machine.
bool is_md_trivial(const MealyMachine& m);

std::string to_string(Side side);

}  // namespace mealy
