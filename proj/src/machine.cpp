#include "mealy/machine.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mealy/errors.hpp"
#include "mealy/transform.hpp"

namespace mealy {

std::size_t size_limit() {
  static const std::size_t limit = [] {
    std::size_t value = std::size_t{1} << 22;
    if (const char* env = std::getenv("MEALY_SIZE_LIMIT")) {
      std::size_t parsed = 0;
      const std::string_view sv(env);
      auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), parsed);
      if (ec == std::errc() && ptr == sv.data() + sv.size() && parsed > 0) value = parsed;
    }
    return value;
  }();
  return limit;
}

MealyMachine::MealyMachine(std::size_t states, std::size_t letters, std::vector<State> delta,
                           std::vector<Letter> rho)
    : q_(states), p_(letters), delta_(std::move(delta)), rho_(std::move(rho)) {
  if (q_ == 0 || p_ == 0) throw PreconditionError("machine needs at least one state and one letter");
  if (delta_.size() != q_ * p_ || rho_.size() != q_ * p_)
    throw PreconditionError("transition tables must have states*letters entries");
  for (State t : delta_)
    if (t >= q_) throw PreconditionError("transition target out of range");
  for (Letter o : rho_)
    if (o >= p_) throw PreconditionError("output letter out of range");
}

MealyMachine MealyMachine::trivial() { return MealyMachine(1, 1, {0}, {0}); }

namespace {

bool rows_are_permutations(const MealyMachine& m) {
  std::vector<char> seen(m.letters());
  for (State x = 0; x < m.states(); ++x) {
    std::fill(seen.begin(), seen.end(), 0);
    for (Letter i = 0; i < m.letters(); ++i) {
      Letter o = m.out(x, i);
      if (seen[o]) return false;
      seen[o] = 1;
    }
  }
  return true;
}

bool columns_are_permutations(const MealyMachine& m) {
  std::vector<char> seen(m.states());
  for (Letter i = 0; i < m.letters(); ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (State x = 0; x < m.states(); ++x) {
      State t = m.next(x, i);
      if (seen[t]) return false;
      seen[t] = 1;
    }
  }
  return true;
}

int entry_width(std::size_t q, std::size_t p) {
  std::size_t big = std::max(q, p);
  if (big <= 0x100) return 1;
  if (big <= 0x10000) return 2;
  return 4;
}

void put_be(std::string& out, std::uint32_t v, int width) {
  for (int b = width - 1; b >= 0; --b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint32_t get_be(std::string_view in, std::size_t& pos, int width) {
  if (pos + static_cast<std::size_t>(width) > in.size()) throw ParseError("truncated machine key");
  std::uint32_t v = 0;
  for (int b = 0; b < width; ++b) v = (v << 8) | static_cast<unsigned char>(in[pos++]);
  return v;
}

std::vector<std::vector<std::uint32_t>> all_permutations(std::size_t n) {
  std::vector<std::vector<std::uint32_t>> perms;
  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0u);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return perms;
}

std::vector<std::uint32_t> invert(const std::vector<std::uint32_t>& p) {
  std::vector<std::uint32_t> inv(p.size());
  for (std::uint32_t k = 0; k < p.size(); ++k) inv[p[k]] = k;
  return inv;
}

std::size_t factorial_capped(std::size_t n, std::size_t cap) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    if (f > cap / k) return cap + 1;
    f *= k;
  }
  return f;
}

}  // namespace

bool is_invertible(const MealyMachine& m) { return rows_are_permutations(m); }
bool is_reversible(const MealyMachine& m) { return columns_are_permutations(m); }

bool is_bireversible(const MealyMachine& m) {
  return is_invertible(m) && is_reversible(m) && is_reversible(inverse(m));
}

ClassificationFlags classify(const MealyMachine& m) {
  ClassificationFlags f;
  f.invertible = is_invertible(m);
  f.reversible = is_reversible(m);
  f.ir = f.invertible && f.reversible;
  f.bireversible = f.ir && is_reversible(inverse(m));
  return f;
}

std::string serialize(const MealyMachine& m) {
  const int w = entry_width(m.states(), m.letters());
  std::string out;
  out.reserve(8 + 2 * m.delta_table().size() * static_cast<std::size_t>(w));
  put_be(out, static_cast<std::uint32_t>(m.states()), 4);
  put_be(out, static_cast<std::uint32_t>(m.letters()), 4);
  for (State x = 0; x < m.states(); ++x)
    for (Letter i = 0; i < m.letters(); ++i) {
      put_be(out, m.next(x, i), w);
      put_be(out, m.out(x, i), w);
    }
  return out;
}

MealyMachine deserialize(std::string_view bytes) {
  std::size_t pos = 0;
  const std::size_t q = get_be(bytes, pos, 4);
  const std::size_t p = get_be(bytes, pos, 4);
  const int w = entry_width(q, p);
  std::vector<State> delta(q * p);
  std::vector<Letter> rho(q * p);
  for (std::size_t k = 0; k < q * p; ++k) {
    delta[k] = get_be(bytes, pos, w);
    rho[k] = get_be(bytes, pos, w);
  }
  if (pos != bytes.size()) throw ParseError("trailing bytes in machine key");
  return MealyMachine(q, p, std::move(delta), std::move(rho));
}

MealyMachine relabel(const MealyMachine& m, std::span<const State> state_perm,
                     std::span<const Letter> letter_perm) {
  const std::size_t q = m.states(), p = m.letters();
  if (state_perm.size() != q || letter_perm.size() != p)
    throw PreconditionError("relabeling has the wrong size");
  std::vector<State> delta(q * p);
  std::vector<Letter> rho(q * p);
  for (State x = 0; x < q; ++x)
    for (Letter i = 0; i < p; ++i) {
      const std::size_t at = state_perm[x] * p + letter_perm[i];
      delta[at] = state_perm[m.next(x, i)];
      rho[at] = letter_perm[m.out(x, i)];
    }
  return MealyMachine(q, p, std::move(delta), std::move(rho));
}

Canonicalizer::Canonicalizer(std::size_t states, std::size_t letters,
                             std::size_t max_relabelings)
    : q_(states), p_(letters) {
  const std::size_t fq = factorial_capped(q_, max_relabelings);
  const std::size_t fp = factorial_capped(p_, max_relabelings);
  if (fq > max_relabelings || fp > max_relabelings || fq * fp > max_relabelings)
    throw LimitError("too many relabelings for exhaustive canonical form");
  state_fwd_ = all_permutations(q_);
  letter_fwd_ = all_permutations(p_);
  for (const auto& s : state_fwd_) state_inv_.push_back(invert(s));
  for (const auto& l : letter_fwd_) letter_inv_.push_back(invert(l));
}

MealyMachine Canonicalizer::canonical_machine(const MealyMachine& m) const {
  if (m.states() != q_ || m.letters() != p_) throw PreconditionError("canonicalizer shape mismatch");
  const std::size_t n = q_ * p_;
  std::vector<std::uint32_t> best(2 * n), cand(2 * n);
  bool have_best = false;
  for (std::size_t s = 0; s < state_fwd_.size(); ++s) {
    const auto& sf = state_fwd_[s];
    const auto& si = state_inv_[s];
    for (std::size_t l = 0; l < letter_fwd_.size(); ++l) {
      const auto& lf = letter_fwd_[l];
      const auto& li = letter_inv_[l];
      // Build lazily, abandoning as soon as we are above the best so far.
      bool smaller = !have_best;
      bool abandoned = false;
      std::size_t k = 0;
      for (State xn = 0; xn < q_ && !abandoned; ++xn) {
        const State x = si[xn];
        for (Letter in = 0; in < p_; ++in) {
          const Letter i = li[in];
          const std::uint32_t d = sf[m.next(x, i)];
          const std::uint32_t r = lf[m.out(x, i)];
          cand[k] = d;
          cand[k + 1] = r;
          if (!smaller) {
            if (d != best[k]) {
              if (d > best[k]) { abandoned = true; break; }
              smaller = true;
            } else if (r != best[k + 1]) {
              if (r > best[k + 1]) { abandoned = true; break; }
              smaller = true;
            }
          }
          k += 2;
        }
      }
      if (!abandoned && smaller) {
        best.swap(cand);
        have_best = true;
      }
    }
  }
  std::vector<State> delta(n);
  std::vector<Letter> rho(n);
  for (std::size_t k = 0; k < n; ++k) {
    delta[k] = best[2 * k];
    rho[k] = best[2 * k + 1];
  }
  return MealyMachine(q_, p_, std::move(delta), std::move(rho));
}

bool Canonicalizer::is_canonical(const MealyMachine& m) const {
  if (m.states() != q_ || m.letters() != p_) throw PreconditionError("canonicalizer shape mismatch");
  for (std::size_t s = 0; s < state_fwd_.size(); ++s) {
    const auto& sf = state_fwd_[s];
    const auto& si = state_inv_[s];
    for (std::size_t l = 0; l < letter_fwd_.size(); ++l) {
      const auto& lf = letter_fwd_[l];
      const auto& li = letter_inv_[l];
      for (State xn = 0; xn < q_; ++xn) {
        const State x = si[xn];
        for (Letter in = 0; in < p_; ++in) {
          const Letter i = li[in];
          const std::uint32_t d = sf[m.next(x, i)];
          const std::uint32_t od = m.next(xn, in);
          if (d != od) {
            if (d < od) return false;
            goto next_relabeling;
          }
          const std::uint32_t r = lf[m.out(x, i)];
          const std::uint32_t orr = m.out(xn, in);
          if (r != orr) {
            if (r < orr) return false;
            goto next_relabeling;
          }
        }
      }
    next_relabeling:;
    }
  }
  return true;
}

MealyMachine canonical_machine(const MealyMachine& m) {
  return Canonicalizer(m.states(), m.letters()).canonical_machine(m);
}

CanonicalKey canonical_form(const MealyMachine& m) {
  return CanonicalKey{serialize(canonical_machine(m))};
}

namespace {

// Tries to extend a partial state bijection from a seed pair, following
// transitions forward. Records every assignment on `trail` so the caller
// can undo on failure.
bool propagate(const MealyMachine& a, const MealyMachine& b, const std::vector<Letter>& tau,
               State x0, State y0, std::vector<std::int64_t>& fwd, std::vector<char>& used,
               std::vector<State>& trail) {
  std::vector<std::pair<State, State>> stack{{x0, y0}};
  fwd[x0] = y0;
  used[y0] = 1;
  trail.push_back(x0);
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    for (Letter i = 0; i < a.letters(); ++i) {
      const Letter j = tau[i];
      if (tau[a.out(x, i)] != b.out(y, j)) return false;
      const State xs = a.next(x, i);
      const State ys = b.next(y, j);
      if (fwd[xs] >= 0) {
        if (static_cast<State>(fwd[xs]) != ys) return false;
      } else {
        if (used[ys]) return false;
        fwd[xs] = ys;
        used[ys] = 1;
        trail.push_back(xs);
        stack.emplace_back(xs, ys);
      }
    }
  }
  return true;
}

bool search_states(const MealyMachine& a, const MealyMachine& b, const std::vector<Letter>& tau,
                   std::vector<std::int64_t>& fwd, std::vector<char>& used) {
  State x = 0;
  while (x < a.states() && fwd[x] >= 0) ++x;
  if (x == a.states()) return true;
  for (State y = 0; y < b.states(); ++y) {
    if (used[y]) continue;
    std::vector<State> trail;
    if (propagate(a, b, tau, x, y, fwd, used, trail) && search_states(a, b, tau, fwd, used))
      return true;
    for (State t : trail) {
      used[static_cast<State>(fwd[t])] = 0;
      fwd[t] = -1;
    }
  }
  return false;
}

}  // namespace

bool is_isomorphic(const MealyMachine& m1, const MealyMachine& m2) {
  if (m1.states() != m2.states() || m1.letters() != m2.letters()) return false;
  std::vector<Letter> tau(m1.letters());
  std::iota(tau.begin(), tau.end(), 0u);
  do {
    std::vector<std::int64_t> fwd(m1.states(), -1);
    std::vector<char> used(m2.states(), 0);
    if (search_states(m1, m2, tau, fwd, used)) return true;
  } while (std::next_permutation(tau.begin(), tau.end()));
  return false;
}

namespace {

void check_permutations(std::span<const Permutation> gens, const char* what) {
  if (gens.empty()) throw PreconditionError(std::string(what) + ": generator list is empty");
  const std::size_t n = gens.front().size();
  if (n == 0) throw PreconditionError(std::string(what) + ": permutation of an empty set");
  for (const auto& g : gens) {
    if (g.size() != n) throw PreconditionError(std::string(what) + ": permutations act on different sets");
    std::vector<char> seen(n, 0);
    for (auto v : g) {
      if (v >= n || seen[v]) throw PreconditionError(std::string(what) + ": not a permutation");
      seen[v] = 1;
    }
  }
}

}  // namespace

MealyMachine cross_product_machine(std::span<const Permutation> gens_on_letters,
                                   std::span<const Permutation> gens_on_states) {
  check_permutations(gens_on_letters, "gens_on_letters");
  check_permutations(gens_on_states, "gens_on_states");
  const std::size_t a1 = gens_on_letters.size();
  const std::size_t s1 = gens_on_letters.front().size();
  const std::size_t a2 = gens_on_states.front().size();
  const std::size_t s2 = gens_on_states.size();
  const std::size_t q = a1 * a2, p = s1 * s2;
  std::vector<State> delta(q * p);
  std::vector<Letter> rho(q * p);
  for (std::size_t a = 0; a < a1; ++a)
    for (std::size_t b = 0; b < a2; ++b)
      for (std::size_t i = 0; i < s1; ++i)
        for (std::size_t j = 0; j < s2; ++j) {
          const std::size_t x = a * a2 + b;
          const std::size_t letter = i * s2 + j;
          delta[x * p + letter] = static_cast<State>(a * a2 + gens_on_states[j][b]);
          rho[x * p + letter] = static_cast<Letter>(gens_on_letters[a][i] * s2 + j);
        }
  return MealyMachine(q, p, std::move(delta), std::move(rho));
}

std::string to_compact(const MealyMachine& m) {
  std::string s = "mealy " + std::to_string(m.states()) + " " + std::to_string(m.letters()) + " :";
  for (State x = 0; x < m.states(); ++x) {
    if (x > 0) s += " ;";
    for (Letter i = 0; i < m.letters(); ++i) {
      s += ' ';
      s += std::to_string(m.next(x, i));
      s += '/';
      s += std::to_string(m.out(x, i));
    }
  }
  return s;
}

namespace {

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t k = 0;
  while (k < text.size()) {
    const char c = text[k];
    if (c == '#') {
      while (k < text.size() && text[k] != '\n') ++k;
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++k;
    } else {
      const std::size_t start = k;
      while (k < text.size() && text[k] != ' ' && text[k] != '\t' && text[k] != '\n' &&
             text[k] != '\r' && text[k] != '#')
        ++k;
      tokens.push_back(text.substr(start, k - start));
    }
  }
  return tokens;
}

std::size_t parse_count(std::string_view tok, const char* what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(std::string("expected ") + what + ", got '" + std::string(tok) + "'");
  return v;
}

}  // namespace

MealyMachine parse_compact(std::string_view text) {
  const auto tokens = tokenize(text);
  if (tokens.size() < 4 || tokens[0] != "mealy" || tokens[3] != ":")
    throw ParseError("expected 'mealy <states> <letters> :'");
  const std::size_t q = parse_count(tokens[1], "state count");
  const std::size_t p = parse_count(tokens[2], "letter count");
  if (q == 0 || p == 0) throw ParseError("state and letter counts must be positive");
  if (q > (1u << 24) || p > (1u << 24)) throw ParseError("machine too large");
  const std::size_t expected = 4 + q * p + (q - 1);
  if (tokens.size() != expected)
    throw ParseError("expected " + std::to_string(q * p) + " transitions in " + std::to_string(q) +
                     " ';'-separated rows");
  std::vector<State> delta;
  std::vector<Letter> rho;
  std::size_t k = 4;
  for (std::size_t x = 0; x < q; ++x) {
    if (x > 0) {
      if (tokens[k] != ";") throw ParseError("expected ';' between state rows");
      ++k;
    }
    for (std::size_t i = 0; i < p; ++i, ++k) {
      const auto tok = tokens[k];
      const auto slash = tok.find('/');
      if (slash == std::string_view::npos) throw ParseError("expected t/o, got '" + std::string(tok) + "'");
      const std::size_t t = parse_count(tok.substr(0, slash), "target state");
      const std::size_t o = parse_count(tok.substr(slash + 1), "output letter");
      if (t >= q) throw ParseError("target state " + std::to_string(t) + " out of range");
      if (o >= p) throw ParseError("output letter " + std::to_string(o) + " out of range");
      delta.push_back(static_cast<State>(t));
      rho.push_back(static_cast<Letter>(o));
    }
  }
  return MealyMachine(q, p, std::move(delta), std::move(rho));
}

std::string to_json(const MealyMachine& m) {
  nlohmann::ordered_json j;
  j["format"] = "mealy";
  j["states"] = m.states();
  j["letters"] = m.letters();
  auto delta = nlohmann::json::array();
  auto rho = nlohmann::json::array();
  for (State x = 0; x < m.states(); ++x) {
    auto drow = nlohmann::json::array();
    auto rrow = nlohmann::json::array();
    for (Letter i = 0; i < m.letters(); ++i) {
      drow.push_back(m.next(x, i));
      rrow.push_back(m.out(x, i));
    }
    delta.push_back(std::move(drow));
    rho.push_back(std::move(rrow));
  }
  j["delta"] = std::move(delta);
  j["rho"] = std::move(rho);
  return j.dump();
}

MealyMachine parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (j.contains("format") && j.at("format") != "mealy") throw ParseError("unknown format tag");
    const std::size_t q = j.at("states").get<std::size_t>();
    const std::size_t p = j.at("letters").get<std::size_t>();
    const auto& d = j.at("delta");
    const auto& r = j.at("rho");
    if (!d.is_array() || !r.is_array() || d.size() != q || r.size() != q)
      throw ParseError("delta and rho must have one row per state");
    std::vector<State> delta;
    std::vector<Letter> rho;
    for (std::size_t x = 0; x < q; ++x) {
      if (d[x].size() != p || r[x].size() != p) throw ParseError("rows must have one entry per letter");
      for (std::size_t i = 0; i < p; ++i) {
        delta.push_back(d[x][i].get<State>());
        rho.push_back(r[x][i].get<Letter>());
      }
    }
    return MealyMachine(q, p, std::move(delta), std::move(rho));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed machine object: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

MealyMachine parse_machine(std::string_view text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (c == '{') return parse_json(text);
    break;
  }
  return parse_compact(text);
}

}  // namespace mealy
