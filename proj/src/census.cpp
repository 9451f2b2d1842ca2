#include "mealy/census.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "mealy/errors.hpp"
#include "mealy/semigroup.hpp"
#include "mealy/transform.hpp"

namespace mealy {

std::string to_string(ClassTag t) {
  switch (t) {
    case ClassTag::IJIR: return "IJIR";
    case ClassTag::JI: return "JI";
    case ClassTag::JIR: return "JIR";
    case ClassTag::BIR: return "BIR";
    case ClassTag::DIJIR: return "DIJIR";
    case ClassTag::DJI: return "DJI";
    default: return "N";
  }
}

const std::array<ClassTag, kClassCount>& class_columns() {
  static const std::array<ClassTag, kClassCount> cols = {ClassTag::IJIR,  ClassTag::JI,  ClassTag::JIR, ClassTag::BIR,
                                                         ClassTag::DIJIR, ClassTag::DJI, ClassTag::N};
  return cols;
}

namespace {

bool is_jir(const MealyMachine& m) { return is_invertible(m) && is_reversible(m) && !is_bireversible(m); }
bool is_ijir(const MealyMachine& m) { return is_invertible(m) && is_jir(inverse(m)); }
bool is_ji(const MealyMachine& m) {
  return is_invertible(m) && !is_bireversible(m) && !is_jir(m) && !is_ijir(m);
}

}  // namespace

ClassTag partition_class(const MealyMachine& m) {
  if (is_bireversible(m)) return ClassTag::BIR;
  if (is_jir(m)) return ClassTag::JIR;
  if (is_ijir(m)) return ClassTag::IJIR;
  const MealyMachine d = dual(m);
  if (is_ijir(d)) return ClassTag::DIJIR;
  if (is_ji(m)) return ClassTag::JI;
  if (is_ji(d)) return ClassTag::DJI;
  return ClassTag::N;
}

std::string to_string(Filter f) {
  switch (f) {
    case Filter::all: return "all";
    case Filter::invertible: return "invertible";
    case Filter::reversible: return "reversible";
    default: return "inv_or_rev";
  }
}

Filter parse_filter(const std::string& name) {
  if (name == "all") return Filter::all;
  if (name == "invertible") return Filter::invertible;
  if (name == "reversible") return Filter::reversible;
  if (name == "inv_or_rev") return Filter::inv_or_rev;
  throw ParseError("unknown census filter: " + name);
}

namespace {

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::size_t sat_pow(std::size_t base, std::size_t exp) {
  std::size_t v = 1;
  for (std::size_t e = 0; e < exp; ++e) v = sat_mul(v, base);
  return v;
}

std::size_t factorial(std::size_t n) {
  std::size_t v = 1;
  for (std::size_t k = 2; k <= n; ++k) v = sat_mul(v, k);
  return v;
}

// Permutations of 0..n-1 in lexicographic order.
std::vector<std::vector<std::uint32_t>> permutations(std::size_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  do out.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Writes the base-`radix` digits of `index` (most significant first).
void decode(std::size_t index, std::size_t radix, std::vector<std::uint32_t>& digits) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    digits[k] = static_cast<std::uint32_t>(index % radix);
    index /= radix;
  }
}

bool delta_reversible(const std::vector<State>& delta, std::size_t q, std::size_t p) {
  std::vector<char> hit(q);
  for (std::size_t i = 0; i < p; ++i) {
    std::fill(hit.begin(), hit.end(), 0);
    for (std::size_t x = 0; x < q; ++x) {
      if (hit[delta[x * p + i]]) return false;
      hit[delta[x * p + i]] = 1;
    }
  }
  return true;
}

void enumerate_range(std::size_t q, std::size_t p, Filter filter, std::size_t lo, std::size_t hi,
                     std::vector<MealyMachine>& out) {
  const std::size_t n = q * p;
  const Canonicalizer canon(q, p);
  const auto row_perms = permutations(p);
  const std::size_t all_rho = sat_pow(p, n);
  const std::size_t perm_rho = sat_pow(row_perms.size(), q);
  std::vector<State> delta(n);
  std::vector<Letter> rho(n);
  std::vector<std::uint32_t> digits;
  for (std::size_t di = lo; di < hi; ++di) {
    decode(di, q, delta);
    const bool rev = delta_reversible(delta, q, p);
    bool every_rho = false;
    switch (filter) {
      case Filter::all: every_rho = true; break;
      case Filter::invertible: every_rho = false; break;
      case Filter::reversible:
        if (!rev) continue;
        every_rho = true;
        break;
      case Filter::inv_or_rev: every_rho = rev; break;
    }
    const std::size_t count = every_rho ? all_rho : perm_rho;
    for (std::size_t ri = 0; ri < count; ++ri) {
      if (every_rho) {
        decode(ri, p, rho);
      } else {
        digits.resize(q);
        decode(ri, row_perms.size(), digits);
        for (std::size_t x = 0; x < q; ++x)
          std::copy(row_perms[digits[x]].begin(), row_perms[digits[x]].end(), rho.begin() + x * p);
      }
      MealyMachine m(q, p, delta, rho);
      if (canon.is_canonical(m)) out.push_back(std::move(m));
    }
  }
}

// Runs body(chunk, lo, hi) over `jobs` contiguous chunks of [0, n).
template <class Body>
void parallel_chunks(std::size_t n, unsigned jobs, Body body) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(jobs, n));
  if (chunks == 1) {
    body(0, 0, n);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(chunks);
  for (std::size_t c = 0; c < chunks; ++c)
    threads.emplace_back([&, c] {
      try {
        body(c, n * c / chunks, n * (c + 1) / chunks);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::size_t raw_space_size(std::size_t q, std::size_t p, Filter filter) {
  const std::size_t n = q * p;
  const std::size_t all_delta = sat_pow(q, n), all_rho = sat_pow(p, n);
  const std::size_t rev_delta = sat_pow(factorial(q), p), perm_rho = sat_pow(factorial(p), q);
  switch (filter) {
    case Filter::all: return sat_mul(all_delta, all_rho);
    case Filter::invertible: return sat_mul(all_delta, perm_rho);
    case Filter::reversible: return sat_mul(rev_delta, all_rho);
    default: {
      const std::size_t a = sat_mul(rev_delta, all_rho), b = sat_mul(all_delta - rev_delta, perm_rho);
      return a > kSaturated - b ? kSaturated : a + b;
    }
  }
}

std::vector<MealyMachine> enumerate_classes(std::size_t q, std::size_t p, Filter filter, unsigned jobs,
                                            std::size_t max_raw) {
  if (q == 0 || p == 0) throw PreconditionError("enumerate_classes: sizes must be positive");
  const std::size_t raw = raw_space_size(q, p, filter);
  if (raw > max_raw)
    throw LimitError("enumerate_classes: raw space of " + std::to_string(raw) + " tables exceeds limit " +
                     std::to_string(max_raw));
  const std::size_t deltas = sat_pow(q, q * p);
  std::vector<std::vector<MealyMachine>> parts(std::max(1u, jobs));
  parallel_chunks(deltas, jobs, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    enumerate_range(q, p, filter, lo, hi, parts[c]);
  });
  std::vector<std::pair<std::string, MealyMachine>> keyed;
  for (auto& part : parts)
    for (auto& m : part) keyed.emplace_back(serialize(m), std::move(m));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<MealyMachine> out;
  out.reserve(keyed.size());
  for (auto& [k, m] : keyed) out.push_back(std::move(m));
  return out;
}

std::size_t CensusRow::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

const CensusRow& CensusReport::row(const std::string& criterion) const {
  for (const auto& r : rows)
    if (r.criterion == criterion) return r;
  throw PreconditionError("census report has no row " + criterion);
}

const std::vector<std::string>& census_row_names() {
  static const std::vector<std::string> names = {
      "Mealy automata", "Finitary",  "Sidki",  "Limitary cycles", "Cayley+-",  "Dual Cayley+-",
      "previous union", "md-trivial", "Cycles", "+Sum",           "+Dual",     "new union",
      "total union",    "BFS finite", "BFS budget exceeded"};
  return names;
}

namespace {

bool first_rule_is(const std::vector<Verdict>& ds, const std::string& rule) {
  for (const auto& v : ds)
    if (v.trace.front().rule == rule) return true;
  return false;
}

MachineOutcome evaluate(const MealyMachine& m, const CensusConfig& config) {
  MachineOutcome o{m, partition_class(m), {}, Decision::unknown, false, 0};
  auto fire = [&](const char* row) { o.fired.emplace_back(row); };
  fire("Mealy automata");

  const bool finitary = finitary_criterion(m).decided();
  const bool sidki = sidki_criterion(m).decided();
  const bool limitary = limitary_cycles_criterion(m).decided();
  bool cay = false, dcay = false;
  for (const auto& c : cayley_matches(m)) (c.kind == CayleyKind::cayley ? cay : dcay) = true;
  if (finitary) fire("Finitary");
  if (sidki) fire("Sidki");
  if (limitary) fire("Limitary cycles");
  if (cay) fire("Cayley+-");
  if (dcay) fire("Dual Cayley+-");
  if (finitary || sidki || limitary || cay || dcay) fire("previous union");

  const bool md = md_trivial_criterion(m).decided();
  const bool cycles = cycles_criterion(m).decided();
  if (md) fire("md-trivial");
  if (cycles) fire("Cycles");

  DecideConfig fresh;
  fresh.rules = RuleSet::new_only();
  fresh.depth = config.depth;
  const auto new_ds = derivations(m, fresh);
  if (first_rule_is(new_ds, "sum")) fire("+Sum");
  if (first_rule_is(new_ds, "dual")) fire("+Dual");
  if (!new_ds.empty()) fire("new union");

  DecideConfig full;
  full.depth = config.depth;
  full.budget = config.ground_truth_budget;
  const auto all_ds = derivations(m, full);
  for (const auto& v : all_ds)
    if (v.trace.front().rule != "bfs") {
      o.decision = v.decision;
      break;
    }
  if (o.decision != Decision::unknown) fire("total union");
  if (config.ground_truth_budget > 0) {
    for (const auto& v : all_ds)
      if (v.trace.front().rule == "bfs") {
        o.bfs_finite = true;
        o.bfs_order = *v.order;
      }
    fire(o.bfs_finite ? "BFS finite" : "BFS budget exceeded");
  }
  return o;
}

}  // namespace

CensusReport run_census(std::size_t q, std::size_t p, const CensusConfig& config) {
  const std::vector<MealyMachine> reps = enumerate_classes(q, p, config.filter, config.jobs, config.max_raw);
  std::vector<MachineOutcome> outcomes(reps.size(), MachineOutcome{MealyMachine::trivial(), ClassTag::N, {}});
  parallel_chunks(reps.size(), config.jobs, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) outcomes[k] = evaluate(reps[k], config);
  });

  CensusReport report;
  report.q = q;
  report.p = p;
  report.filter = config.filter;
  std::map<std::string, std::size_t> index;
  for (const auto& name : census_row_names()) {
    if (config.ground_truth_budget == 0 && name.rfind("BFS", 0) == 0) continue;
    index[name] = report.rows.size();
    report.rows.push_back({name, {}});
  }
  for (const auto& o : outcomes)
    for (const auto& name : o.fired) ++report.rows[index.at(name)].counts[static_cast<std::size_t>(o.tag)];
  if (config.keep_machines) report.machines = std::move(outcomes);
  return report;
}

std::string to_csv(const CensusReport& report) {
  std::ostringstream out;
  out << "criterion,class,count\n";
  for (const auto& r : report.rows) {
    for (ClassTag t : class_columns())
      out << r.criterion << ',' << to_string(t) << ',' << r.counts[static_cast<std::size_t>(t)] << '\n';
    out << r.criterion << ",W," << r.total() << '\n';
  }
  return out.str();
}

}  // namespace mealy
