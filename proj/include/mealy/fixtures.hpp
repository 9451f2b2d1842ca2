#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mealy/machine.hpp"

namespace mealy {

/// Named machines from the examples table and worked examples. Letters and
/// states are numbered in reading order (a, b, c, ... -> 0, 1, 2, ...).
/// Also accepts `msharp_P_Q`. Throws PreconditionError on an unknown name.
MealyMachine fixture(std::string_view name);

/// Names accepted by fixture(), excluding the msharp family.
const std::vector<std::string>& fixture_names();

/// The M-sharp family over p ≥ 2 letters and q ≥ 2 states. Every state a_k
/// moves to a_{k+1 mod q} on every letter. a_1 outputs the cycle
/// (0 1 ... p-1), a_2 the cycle (1 2 ... p-1) fixing 0, and all other
/// states output the identity. Bireversible and md-trivial.
/// Throws PreconditionError if p < 2 or q < 2.
MealyMachine msharp(std::size_t p, std::size_t q);

}  // namespace mealy
