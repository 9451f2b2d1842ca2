#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mealy/machine.hpp"

namespace mealy {

enum class Decision { finite, infinite, unknown };

std::string to_string(Decision d);

/// One rule application. Transfer rules ("dual", "sum", "reduce") move to a
/// derived machine; the last step names the rule that decided.
struct TraceStep {
  std::string rule;
  std::string path;      // location of the machine the rule ran on, e.g. "dual/sum[1]"
  std::size_t arg = 0;   // component index for "sum", budget for "bfs"
  std::string note;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Verdict {
  Decision decision = Decision::unknown;
  std::vector<TraceStep> trace;
  std::optional<std::size_t> order;  // set when BFS decided Finite

  bool decided() const noexcept { return decision != Decision::unknown; }
};

/// Raised when two derivations reach opposite decisions.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// --- finite semigroups ------------------------------------------------------

/// Multiplication table of a finite magma on 0..n-1 (row-major, a·b at a*n+b).
struct SemigroupTable {
  std::size_t n = 0;
  std::vector<std::uint32_t> mul;

  std::uint32_t operator()(std::uint32_t a, std::uint32_t b) const { return mul[a * n + b]; }
};

bool is_associative(const SemigroupTable& s);
/// Green's H-relation is the identity.
bool is_h_trivial(const SemigroupTable& s);
/// Some a ≠ b with aa = a, bb = b, ab = b, ba = a.
bool has_right_zero_pair(const SemigroupTable& s);

/// C(S): x --y|xy--> xy.
MealyMachine cayley_machine(const SemigroupTable& s);
/// C*(S): x --y|yx--> xy.
MealyMachine dual_cayley_machine(const SemigroupTable& s);

enum class CayleyKind { cayley, dual_cayley };

struct CayleyMatch {
  CayleyKind kind;
  bool inverted;  // m is the inverse of the Cayley machine
  SemigroupTable semigroup;
};

/// Every kind (C, C*) and orientation under which m is isomorphic to a
/// (dual) Cayley machine, with one witnessing semigroup each. Searches the
/// p! letter-to-state bijections ψ with ψ(ρ_x(i)) = δ_i(x) (resp.
/// ψ(ρ_x(i)) = δ(ψ(i), ψ⁻¹(x))) and checks associativity.
std::vector<CayleyMatch> cayley_matches(const MealyMachine& m);

// --- base criteria ----------------------------------------------------------

/// States whose production function is the identity.
std::vector<bool> identity_states(const MealyMachine& m);

/// Bounded-activity states of an invertible machine: the non-identity part
/// reachable from x has simple-cycle components none of which reaches
/// another. Throws PreconditionError if m is not invertible.
std::vector<bool> bounded_states(const MealyMachine& m);

Verdict md_trivial_criterion(const MealyMachine& m);
Verdict cycles_criterion(const MealyMachine& m);
Verdict finitary_criterion(const MealyMachine& m);
Verdict sidki_criterion(const MealyMachine& m);
Verdict limitary_cycles_criterion(const MealyMachine& m);
Verdict cayley_criterion(const MealyMachine& m);

/// Base criteria in attribution order.
const std::vector<std::string>& base_criteria();
/// Runs a base criterion by name. Throws PreconditionError on an unknown name.
Verdict run_criterion(const std::string& name, const MealyMachine& m);

// --- decision pipeline -------------------------------------------------------

struct RuleSet {
  bool md_trivial = true;
  bool cycles = true;
  bool finitary = true;
  bool sidki = true;
  bool limitary = true;
  bool cayley = true;
  bool reduce = true;
  bool sum = true;
  bool dual = true;

  static RuleSet all() { return {}; }
  static RuleSet none();
  /// md-trivial, Cycles, +Sum, +Dual only.
  static RuleSet new_only();
  /// Comma-separated names: md-trivial, cycles, finitary, sidki, limitary,
  /// cayley, reduce, sum, dual, plus "all", "new", "previous".
  /// Throws ParseError on an unknown name.
  static RuleSet parse(const std::string& list);

  bool enabled(const std::string& rule) const;
};

struct DecideConfig {
  RuleSet rules;
  std::size_t depth = 3;   // nested dual/sum/reduce transfers
  std::size_t budget = 0;  // BFS element budget at the root, 0 disables
  unsigned jobs = 1;
};

/// Collects every derivation up to the configured depth and returns the
/// first in attribution order (base criteria, reduce, sum, dual, bfs).
/// Throws InternalError on a Finite/Infinite contradiction.
Verdict decide(const MealyMachine& m, const DecideConfig& config = {});

/// Every decided derivation found by decide, in attribution order.
std::vector<Verdict> derivations(const MealyMachine& m, const DecideConfig& config = {});

/// Re-runs the trace on m: follows transfer steps, re-evaluates the final
/// rule, and returns its decision (unknown if the trace is empty or stale).
Decision replay(const MealyMachine& m, const Verdict& v);

/// {"decision":...,"order":...,"trace":[{"rule":..,"path":..,"arg":..,"note":..}]}
std::string to_json(const Verdict& v);

}  // namespace mealy
