#pragma once

#include <cstddef>
#include <string>

#include "mealy/helix.hpp"
#include "mealy/machine.hpp"

namespace mealy {

/// Graphviz digraph: one node per state, parallel arcs merged into one
/// edge labeled `i|j, i'|j'`. Nodes and edges in index order.
std::string to_dot(const MealyMachine& m);

/// The order-(n, k) power automaton of m, with states and letters labeled
/// by the words they stand for. Throws LimitError like power().
std::string power_to_dot(const MealyMachine& m, std::size_t n, std::size_t k);

/// One node `x,u` per (state word, letter word) and its successor arc.
std::string to_dot(const HelixGraph& h);

}  // namespace mealy
