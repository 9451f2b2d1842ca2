#include "mealy/dot.hpp"

#include <map>
#include <sstream>
#include <vector>

#include "mealy/transform.hpp"

namespace mealy {

namespace {

std::string word_label(const Word& w, std::size_t radix) {
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k > 0 && radix > 10) s += '.';
    s += std::to_string(w[k]);
  }
  return s;
}

template <class StateName, class LetterName>
std::string render(const MealyMachine& m, StateName state_name, LetterName letter_name) {
  std::ostringstream out;
  out << "digraph mealy {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (State x = 0; x < m.states(); ++x) out << "  s" << x << " [label=\"" << state_name(x) << "\"];\n";
  for (State x = 0; x < m.states(); ++x) {
    std::map<State, std::string> labels;
    for (Letter i = 0; i < m.letters(); ++i) {
      std::string& l = labels[m.next(x, i)];
      if (!l.empty()) l += ", ";
      l += letter_name(i) + "|" + letter_name(m.out(x, i));
    }
    for (const auto& [y, l] : labels) out << "  s" << x << " -> s" << y << " [label=\"" << l << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::string to_dot(const MealyMachine& m) {
  auto num = [](std::uint32_t v) { return std::to_string(v); };
  return render(m, num, num);
}

std::string power_to_dot(const MealyMachine& m, std::size_t n, std::size_t k) {
  const MealyMachine pm = power(m, n, k);
  const std::size_t q = m.states(), p = m.letters();
  return render(
      pm, [&](State x) { return word_label(index_word(x, n, q), q); },
      [&](Letter i) { return word_label(index_word(i, k, p), p); });
}

std::string to_dot(const HelixGraph& h) {
  std::ostringstream out;
  out << "digraph helix {\n  node [shape=box];\n";
  for (std::uint64_t v = 0; v < h.node_count(); ++v) {
    const auto [xs, us] = h.decode(v);
    out << "  n" << v << " [label=\"" << word_label(xs, h.q) << "," << word_label(us, h.p) << "\"];\n";
  }
  for (std::uint64_t v = 0; v < h.node_count(); ++v) out << "  n" << v << " -> n" << h.successor[v] << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace mealy
