#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mealy {

using State = std::uint32_t;
using Letter = std::uint32_t;
using Word = std::vector<std::uint32_t>;

/// A complete deterministic letter-to-letter transducer.
///
/// States are 0..states()-1 and letters 0..letters()-1. Both tables are
/// stored row-major (state outer, letter inner): next(x, i) is the target
/// of the transition leaving x on input i, out(x, i) its output letter.
/// Values are immutable once constructed.
class MealyMachine {
 public:
  /// Throws PreconditionError if a size is zero, a table has the wrong
  /// length, or an entry is out of range.
  MealyMachine(std::size_t states, std::size_t letters, std::vector<State> delta,
               std::vector<Letter> rho);

  /// The one-state one-letter machine.
  static MealyMachine trivial();

  std::size_t states() const noexcept { return q_; }
  std::size_t letters() const noexcept { return p_; }

  State next(State x, Letter i) const noexcept { return delta_[x * p_ + i]; }
  Letter out(State x, Letter i) const noexcept { return rho_[x * p_ + i]; }

  std::span<const State> delta_table() const noexcept { return delta_; }
  std::span<const Letter> rho_table() const noexcept { return rho_; }

  friend bool operator==(const MealyMachine&, const MealyMachine&) = default;

 private:
  std::size_t q_;
  std::size_t p_;
  std::vector<State> delta_;
  std::vector<Letter> rho_;
};

struct ClassificationFlags {
  bool invertible = false;
  bool reversible = false;
  bool ir = false;
  bool bireversible = false;

  friend bool operator==(const ClassificationFlags&, const ClassificationFlags&) = default;
};

bool is_invertible(const MealyMachine& m);
bool is_reversible(const MealyMachine& m);
/// Invertible, reversible, and the inverse machine is reversible.
bool is_bireversible(const MealyMachine& m);

ClassificationFlags classify(const MealyMachine& m);

/// Opaque byte string identifying an isomorphism class under joint
/// state and letter relabeling. Ordered like the underlying tables.
struct CanonicalKey {
  std::string bytes;

  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

/// Serialization of the tables as they stand (no relabeling). Entries are
/// fixed-width big-endian, so byte order equals table order.
std::string serialize(const MealyMachine& m);
MealyMachine deserialize(std::string_view bytes);

/// Relabels: state x becomes state_perm[x], letter i becomes letter_perm[i].
MealyMachine relabel(const MealyMachine& m, std::span<const State> state_perm,
                     std::span<const Letter> letter_perm);

/// Exhaustive lexicographic minimization over all joint relabelings of a
/// fixed (states, letters) shape. Holds the permutation lists so that the
/// census can reuse them across millions of candidates.
class Canonicalizer {
 public:
  /// Throws LimitError when q!·p! exceeds max_relabelings.
  Canonicalizer(std::size_t states, std::size_t letters,
                std::size_t max_relabelings = 10'000'000);

  std::size_t states() const noexcept { return q_; }
  std::size_t letters() const noexcept { return p_; }

  /// The relabeling of m with the smallest table sequence.
  MealyMachine canonical_machine(const MealyMachine& m) const;
  /// True iff m already is its own canonical machine. Aborts each
  /// relabeling at the first differing entry.
  bool is_canonical(const MealyMachine& m) const;

 private:
  std::size_t q_;
  std::size_t p_;
  // Inverse permutations: position -> original label.
  std::vector<std::vector<State>> state_inv_;
  std::vector<std::vector<State>> state_fwd_;
  std::vector<std::vector<Letter>> letter_inv_;
  std::vector<std::vector<Letter>> letter_fwd_;
};

MealyMachine canonical_machine(const MealyMachine& m);
CanonicalKey canonical_form(const MealyMachine& m);

/// Backtracking search for a state bijection and a letter bijection
/// carrying m1 onto m2. Independent of canonical_form.
bool is_isomorphic(const MealyMachine& m1, const MealyMachine& m2);

/// A permutation given by its image list.
using Permutation = std::vector<std::uint32_t>;

/// Machine with states A1×A2 and letters Σ1×Σ2 whose group is generated
/// by gens_on_letters (acting on Σ1) and whose dual's group is generated
/// by gens_on_states (acting on A2):
///   (a,b) --(i,j) | (a(i),j)--> (a, j(b)).
/// State (a,b) has index a·|A2|+b, letter (i,j) has index i·|Σ2|+j.
MealyMachine cross_product_machine(std::span<const Permutation> gens_on_letters,
                                   std::span<const Permutation> gens_on_states);

// --- text formats -----------------------------------------------------------

/// `mealy <q> <p> : t/o t/o ... ; t/o ... ; ...`
std::string to_compact(const MealyMachine& m);
/// Accepts the compact format; `#` starts a comment running to end of line.
MealyMachine parse_compact(std::string_view text);

/// {"format":"mealy","states":q,"letters":p,"delta":[[..]..],"rho":[[..]..]}
std::string to_json(const MealyMachine& m);
MealyMachine parse_json(std::string_view text);

/// Dispatches on the first non-blank character: `{` means JSON.
MealyMachine parse_machine(std::string_view text);

}  // namespace mealy
