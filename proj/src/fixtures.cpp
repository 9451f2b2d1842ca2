#include "mealy/fixtures.hpp"

#include <charconv>
#include <map>

#include "mealy/errors.hpp"

namespace mealy {

namespace {

// dihedral8: states and letters both index the dihedral group of order 8
// as 1, s, m, sm, ms, sms, msm, smsm.
constexpr const char* kDihedral8 =
    "mealy 8 8 :"
    " 0/0 0/1 0/2 0/3 0/4 0/5 0/6 0/7 ;"
    " 1/0 1/1 7/4 7/5 7/2 7/3 1/6 1/7 ;"
    " 2/0 4/7 2/2 5/3 4/5 3/4 5/6 3/1 ;"
    " 3/0 5/7 3/5 4/4 5/2 2/3 4/6 2/1 ;"
    " 4/0 2/7 5/4 2/5 3/3 4/2 3/6 5/1 ;"
    " 5/0 3/7 4/3 3/2 2/4 5/5 2/6 4/1 ;"
    " 6/0 6/1 6/5 6/4 6/3 6/2 6/6 6/7 ;"
    " 7/0 7/1 1/3 1/2 1/5 1/4 7/6 7/7";

const std::map<std::string, std::string, std::less<>>& table() {
  static const std::map<std::string, std::string, std::less<>> t = {
      {"lamplighter", "mealy 2 2 : 1/1 0/0 ; 0/0 1/1"},
      {"klein", "mealy 2 2 : 0/1 0/0 ; 0/0 0/1"},
      {"order6", "mealy 2 2 : 0/1 0/1 ; 1/1 0/0"},
      {"s_i2", "mealy 2 2 : 0/1 0/0 ; 1/1 0/1"},
      {"adding_machine", "mealy 2 2 : 1/1 0/0 ; 1/0 1/1"},
      {"grig_finite", "mealy 3 2 : 0/1 0/0 ; 0/0 0/1 ; 0/0 1/1"},
      {"aleshin", "mealy 3 2 : 2/1 1/0 ; 1/1 2/0 ; 0/0 0/1"},
      {"babyaleshin", "mealy 3 2 : 2/1 2/0 ; 0/0 1/1 ; 1/0 0/1"},
      {"basilica", "mealy 3 2 : 1/1 2/0 ; 0/0 2/1 ; 2/0 2/1"},
      {"grigorchuk", "mealy 5 2 : 4/1 4/0 ; 0/0 2/1 ; 0/0 3/1 ; 4/0 1/1 ; 4/0 4/1"},
      {"aleshin_finite", "mealy 2 3 : 1/1 1/2 1/0 ; 0/1 0/0 0/2"},
      {"s13597", "mealy 2 3 : 1/0 1/2 1/0 ; 1/1 1/0 0/2"},
      {"g16", "mealy 2 4 : 1/1 0/0 1/3 0/2 ; 0/3 1/0 0/1 1/2"},
      {"dihedral8", kDihedral8},
      // Three-state three-letter machine whose dual splits into two sums.
      {"machine_c", "mealy 3 3 : 2/1 2/0 0/2 ; 0/0 1/1 2/2 ; 1/0 0/1 1/2"},
  };
  return t;
}

bool parse_size(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, text] : table()) v.push_back(name);
    return v;
  }();
  return names;
}

MealyMachine fixture(std::string_view name) {
  if (auto it = table().find(name); it != table().end()) return parse_compact(it->second);
  constexpr std::string_view prefix = "msharp_";
  if (name.substr(0, prefix.size()) == prefix) {
    const std::string_view rest = name.substr(prefix.size());
    const auto sep = rest.find('_');
    std::size_t p = 0, q = 0;
    if (sep != std::string_view::npos && parse_size(rest.substr(0, sep), p) && parse_size(rest.substr(sep + 1), q))
      return msharp(p, q);
  }
  throw PreconditionError("unknown fixture: " + std::string(name));
}

MealyMachine msharp(std::size_t p, std::size_t q) {
  if (p < 2 || q < 2) throw PreconditionError("msharp: needs at least 2 letters and 2 states");
  std::vector<State> delta(q * p);
  std::vector<Letter> rho(q * p);
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t i = 0; i < p; ++i) {
      delta[x * p + i] = static_cast<State>((x + 1) % q);
      Letter o = static_cast<Letter>(i);
      if (x == 0) o = static_cast<Letter>((i + 1) % p);
      if (x == 1 && i > 0) o = static_cast<Letter>(i + 1 < p ? i + 1 : 1);
      rho[x * p + i] = o;
    }
  return MealyMachine(q, p, std::move(delta), std::move(rho));
}

}  // namespace mealy
