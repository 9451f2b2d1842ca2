#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "mealy/criteria.hpp"
#include "mealy/machine.hpp"

namespace mealy {

/// The seven classes, in table column order.
enum class ClassTag { IJIR, JI, JIR, BIR, DIJIR, DJI, N };

constexpr std::size_t kClassCount = 7;
std::string to_string(ClassTag t);
const std::array<ClassTag, kClassCount>& class_columns();

/// Tested in priority order BIR, JIR, IJIR, DIJIR, JI, DJI, N.
ClassTag partition_class(const MealyMachine& m);

enum class Filter { all, invertible, reversible, inv_or_rev };
std::string to_string(Filter f);
/// Throws ParseError on an unknown name.
Filter parse_filter(const std::string& name);

/// Number of raw (delta, rho) table pairs visited for the given shape.
/// Saturates at SIZE_MAX.
std::size_t raw_space_size(std::size_t q, std::size_t p, Filter filter);

/// One canonical representative per isomorphism class passing the filter,
/// sorted by serialization. Throws LimitError if the raw space exceeds
/// max_raw.
std::vector<MealyMachine> enumerate_classes(std::size_t q, std::size_t p, Filter filter, unsigned jobs = 1,
                                            std::size_t max_raw = 100'000'000);

using ClassCounts = std::array<std::size_t, kClassCount>;

struct CensusRow {
  std::string criterion;
  ClassCounts counts{};

  std::size_t total() const;
};

/// Per-machine outcome, kept when CensusConfig::keep_machines is set.
struct MachineOutcome {
  MealyMachine machine;
  ClassTag tag;
  std::vector<std::string> fired;  // row names that counted this machine
  Decision decision = Decision::unknown;  // decide with all rules
  bool bfs_finite = false;
  std::size_t bfs_order = 0;
};

struct CensusConfig {
  Filter filter = Filter::all;
  unsigned jobs = 1;
  std::size_t depth = 3;
  std::size_t ground_truth_budget = 0;  // 0 disables the BFS rows
  bool keep_machines = false;
  std::size_t max_raw = 100'000'000;
};

struct CensusReport {
  std::size_t q = 0, p = 0;
  Filter filter = Filter::all;
  std::vector<CensusRow> rows;  // first row is the class partition
  std::vector<MachineOutcome> machines;

  const CensusRow& row(const std::string& criterion) const;
  std::size_t total() const { return rows.front().total(); }
};

/// Row names in report order. The BFS rows are present only with a
/// ground-truth budget.
const std::vector<std::string>& census_row_names();

CensusReport run_census(std::size_t q, std::size_t p, const CensusConfig& config);

/// Long format with header `criterion,class,count`; classes in column
/// order followed by W (the row total).
std::string to_csv(const CensusReport& report);

}  // namespace mealy
