#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mealy/census.hpp"
#include "mealy/criteria.hpp"
#include "mealy/dot.hpp"
#include "mealy/errors.hpp"
#include "mealy/fixtures.hpp"
#include "mealy/helix.hpp"
#include "mealy/machine.hpp"
#include "mealy/minimize.hpp"
#include "mealy/semigroup.hpp"
#include "mealy/transform.hpp"

using namespace mealy;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kPrecondition = 3, kLimit = 4, kUndecided = 5, kInternal = 6 };

// Inline text, fixture name, `-` for stdin, or a file path.
MealyMachine load(const std::string& source) {
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (source.compare(first, 6, "mealy ") == 0 || source[first] == '{'))
    return parse_machine(source);
  try {
    return fixture(source);
  } catch (const PreconditionError&) {
  }
  std::string text;
  if (source == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(source);
    if (!in) {
      if (source.find_first_of("/.") == std::string::npos) throw PreconditionError("unknown fixture: " + source);
      throw ParseError("cannot read file: " + source);
    }
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return parse_machine(text);
}

std::string format_machine(const MealyMachine& m, const std::string& format) {
  return format == "json" ? to_json(m) : to_compact(m);
}

void print_flags(const MealyMachine& m, const std::string& format) {
  const ClassificationFlags f = classify(m);
  if (format == "json") {
    nlohmann::ordered_json j{{"invertible", f.invertible},
                             {"reversible", f.reversible},
                             {"ir", f.ir},
                             {"bireversible", f.bireversible}};
    std::cout << j.dump() << '\n';
    return;
  }
  auto b = [](bool v) { return v ? "true" : "false"; };
  std::cout << "invertible " << b(f.invertible) << "\nreversible " << b(f.reversible) << "\nir " << b(f.ir)
            << "\nbireversible " << b(f.bireversible) << '\n';
}

Mode parse_mode(const std::string& s) {
  if (s == "semigroup") return Mode::semigroup;
  if (s == "group") return Mode::group;
  throw ParseError("unknown mode: " + s);
}

MealyMachine random_machine(std::size_t q, std::size_t p, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> ds(0, static_cast<std::uint32_t>(q - 1)),
      dl(0, static_cast<std::uint32_t>(p - 1));
  std::vector<State> delta(q * p);
  std::vector<Letter> rho(q * p);
  for (auto& v : delta) v = ds(rng);
  for (auto& v : rho) v = dl(rng);
  return MealyMachine(q, p, std::move(delta), std::move(rho));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finiteness of Mealy automaton (semi)groups"};
  app.require_subcommand(1);
  std::string input, format = "compact";

  auto add_input = [&](CLI::App* c) {
    c->add_option("input", input, "machine text, fixture name, file, or - for stdin")->required();
    c->add_option("--format", format, "compact or json")->check(CLI::IsMember({"compact", "json"}));
  };

  auto* classify_cmd = app.add_subcommand("classify", "print classification flags");
  add_input(classify_cmd);
  auto* dual_cmd = app.add_subcommand("dual", "print the dual machine");
  add_input(dual_cmd);
  auto* inverse_cmd = app.add_subcommand("inverse", "print the inverse machine");
  add_input(inverse_cmd);
  auto* minimize_cmd = app.add_subcommand("minimize", "print the minimal machine");
  add_input(minimize_cmd);

  auto* reduce_cmd = app.add_subcommand("reduce", "md-reduce and print the trace");
  add_input(reduce_cmd);
  std::string first_side = "primal";
  reduce_cmd->add_option("--first", first_side, "side minimized first")->check(CLI::IsMember({"primal", "dual"}));

  auto* helix_cmd = app.add_subcommand("helix", "helix graph of order (n,k) or a cycle profile");
  add_input(helix_cmd);
  std::size_t hn = 1, hk = 1;
  std::vector<std::size_t> profile;
  helix_cmd->add_option("--n", hn, "state word length");
  helix_cmd->add_option("--k", hk, "letter word length");
  helix_cmd->add_option("--profile", profile, "MAX_K MAX_L: CSV cycle profile")->expected(2);

  auto* order_cmd = app.add_subcommand("order", "enumerate the generated (semi)group");
  add_input(order_cmd);
  std::string mode = "semigroup";
  std::size_t budget = 1'000'000, growth = 0;
  std::size_t work_budget = EnumerationOptions{}.work_budget;
  unsigned jobs = 1;
  order_cmd->add_option("--mode", mode, "semigroup or group")->check(CLI::IsMember({"semigroup", "group"}));
  order_cmd->add_option("--budget", budget, "maximum number of elements");
  order_cmd->add_option("--work-budget", work_budget, "maximum total states over all elements");
  order_cmd->add_option("--growth", growth, "print the growth series up to this length");
  order_cmd->add_option("--jobs", jobs, "worker threads");

  auto* decide_cmd = app.add_subcommand("decide", "decide finiteness");
  add_input(decide_cmd);
  std::string rules = "all";
  std::size_t depth = 3, decide_budget = 0;
  bool require_decision = false;
  decide_cmd->add_option("--rules", rules, "comma-separated rule names");
  decide_cmd->add_option("--depth", depth, "transfer depth");
  decide_cmd->add_option("--budget", decide_budget, "BFS budget, 0 disables");
  decide_cmd->add_option("--jobs", jobs, "worker threads");
  decide_cmd->add_flag("--require-decision", require_decision, "exit 5 on Unknown");

  auto* census_cmd = app.add_subcommand("census", "census of all machines of a size");
  std::size_t cq = 2, cp = 2, ground_truth = 0;
  std::string filter = "all", out_path;
  census_cmd->add_option("--q", cq, "number of states")->required();
  census_cmd->add_option("--p", cp, "number of letters")->required();
  census_cmd->add_option("--filter", filter, "all, invertible, reversible, inv_or_rev");
  census_cmd->add_option("--jobs", jobs, "worker threads");
  census_cmd->add_option("--depth", depth, "transfer depth");
  census_cmd->add_option("--ground-truth", ground_truth, "BFS budget for ground-truth rows, 0 disables");
  census_cmd->add_option("--out", out_path, "CSV output file (default stdout)");

  auto* fixture_cmd = app.add_subcommand("fixture", "print a named fixture");
  std::string fixture_name;
  bool list = false;
  fixture_cmd->add_option("name", fixture_name, "fixture name or msharp_P_Q");
  fixture_cmd->add_flag("--list", list, "list fixture names");
  fixture_cmd->add_option("--format", format, "compact or json")->check(CLI::IsMember({"compact", "json"}));

  auto* dot_cmd = app.add_subcommand("dot", "Graphviz output");
  add_input(dot_cmd);
  std::vector<std::size_t> power_order, helix_order;
  dot_cmd->add_option("--power", power_order, "N K: the power automaton")->expected(2);
  dot_cmd->add_option("--helix", helix_order, "N K: the helix graph")->expected(2);

  auto* random_cmd = app.add_subcommand("random", "print random machines");
  std::size_t rq = 2, rp = 2, count = 1;
  std::uint64_t seed = 1;
  random_cmd->add_option("--q", rq, "number of states");
  random_cmd->add_option("--p", rp, "number of letters");
  random_cmd->add_option("--count", count, "number of machines");
  random_cmd->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*classify_cmd) {
      print_flags(load(input), format);
    } else if (*dual_cmd) {
      std::cout << format_machine(dual(load(input)), format) << '\n';
    } else if (*inverse_cmd) {
      std::cout << format_machine(inverse(load(input)), format) << '\n';
    } else if (*minimize_cmd) {
      std::cout << format_machine(minimize(load(input)), format) << '\n';
    } else if (*reduce_cmd) {
      const Reduction r = md_reduce(load(input), first_side == "dual" ? Side::dual : Side::primal);
      for (const auto& s : r.trace)
        std::cout << to_string(s.side) << ' ' << s.states_before << 'x' << s.letters_before << " -> "
                  << s.states_after << 'x' << s.letters_after << '\n';
      std::cout << "dual " << format_machine(dual(r.machine), format) << '\n';
      std::cout << format_machine(r.machine, format) << '\n';
    } else if (*helix_cmd) {
      const MealyMachine m = load(input);
      if (!profile.empty()) {
        const CycleProfile prof = cycle_profile(m, profile[0], profile[1]);
        std::cout << "# extended " << (prof.extended ? "true" : "false") << '\n' << to_csv(prof);
      } else {
        const HelixGraph h = helix_graph(m, hn, hk);
        const bool cycles = is_union_of_cycles(h);
        std::cout << "nodes " << h.node_count() << "\nunion_of_cycles " << (cycles ? "true" : "false") << '\n';
        if (cycles) {
          std::cout << "cycle_lengths";
          for (auto l : cycle_lengths(h)) std::cout << ' ' << l;
          std::cout << '\n';
        }
      }
    } else if (*order_cmd) {
      const MealyMachine m = load(input);
      if (growth > 0) {
        std::cout << "growth";
        for (auto c : growth_series(m, growth, jobs)) std::cout << ' ' << c;
        std::cout << '\n';
      } else {
        EnumerationOptions options;
        options.mode = parse_mode(mode);
        options.budget = budget;
        options.work_budget = work_budget;
        options.jobs = jobs;
        const EnumerationResult r = enumerate_order(m, options);
        if (r.finite())
          std::cout << r.order << '\n';
        else
          std::cout << "BudgetExceeded " << r.elements_seen << (r.work_exhausted ? " work" : "") << '\n';
      }
    } else if (*decide_cmd) {
      DecideConfig config;
      config.rules = RuleSet::parse(rules);
      config.depth = depth;
      config.budget = decide_budget;
      config.jobs = jobs;
      const Verdict v = decide(load(input), config);
      if (format == "json") {
        std::cout << to_json(v) << '\n';
      } else {
        std::cout << to_string(v.decision) << '\n';
        for (const auto& s : v.trace) {
          std::cout << "  " << s.rule << " @" << (s.path.empty() ? "." : s.path);
          if (!s.note.empty()) std::cout << "  " << s.note;
          std::cout << '\n';
        }
      }
      if (require_decision && !v.decided()) return kUndecided;
    } else if (*census_cmd) {
      CensusConfig config;
      config.filter = parse_filter(filter);
      config.jobs = jobs;
      config.depth = depth;
      config.ground_truth_budget = ground_truth;
      const std::string csv = to_csv(run_census(cq, cp, config));
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path);
        out << csv;
      }
    } else if (*fixture_cmd) {
      if (list) {
        for (const auto& n : fixture_names()) std::cout << n << '\n';
      } else {
        if (fixture_name.empty()) throw ParseError("fixture: name required");
        std::cout << format_machine(fixture(fixture_name), format) << '\n';
      }
    } else if (*dot_cmd) {
      const MealyMachine m = load(input);
      if (!power_order.empty())
        std::cout << power_to_dot(m, power_order[0], power_order[1]);
      else if (!helix_order.empty())
        std::cout << to_dot(helix_graph(m, helix_order[0], helix_order[1]));
      else
        std::cout << to_dot(m);
    } else if (*random_cmd) {
      if (rq == 0 || rp == 0) throw PreconditionError("random: sizes must be positive");
      std::mt19937_64 rng(seed);
      for (std::size_t k = 0; k < count; ++k) std::cout << to_compact(random_machine(rq, rp, rng)) << '\n';
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return kPrecondition;
  } catch (const LimitError& e) {
    std::cerr << "limit exceeded: " << e.what() << '\n';
    return kLimit;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
