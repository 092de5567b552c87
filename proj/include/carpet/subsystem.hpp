#pragma once

// Uniform-fibre subcarpets built from words whose digit frequencies are fixed
// by floor(k p_d). Their Hausdorff dimension approaches dim_H F as k grows.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "carpet/bigint.hpp"
#include "carpet/carpet.hpp"
#include "carpet/measure.hpp"

namespace carpet {

struct FloorCounts {
  std::vector<std::int64_t> counts;  // floor(k p_d) per digit
  std::int64_t length = 0;           // l(k) = sum of counts
};

// Throws DomainError if k < 1 and DegenerateError if every floor is zero.
FloorCounts floor_counts(const SelfAffineMeasure& measure, std::int64_t k);

enum class CountPath { automatic, exact, log_gamma };

struct SubsystemCounts {
  std::int64_t k = 0;
  std::int64_t l_k = 0;
  std::vector<std::int64_t> digit_counts;
  std::vector<std::int64_t> column_counts;  // per non-empty column
  double log_N_k = 0.0;
  double log_M_k = 0.0;
  double dim_E_k = 0.0;
};

// automatic uses exact factorials up to l(k) = 2000, log-gamma beyond.
SubsystemCounts subsystem_counts(const SelfAffineMeasure& measure, std::int64_t k,
                                 CountPath path = CountPath::automatic);

struct ExactSubsystemCounts {
  BigInt N_k;
  BigInt M_k;
  BigInt per_column;  // N_k / M_k
};

ExactSubsystemCounts exact_subsystem_counts(const SelfAffineMeasure& measure, std::int64_t k);

struct ConvergenceRow {
  std::int64_t k = 0;
  std::int64_t l_k = 0;
  double dim_E_k = 0.0;
  double gap = 0.0;
  std::optional<std::string> error;  // set when the row is degenerate
};

struct ConvergenceTable {
  double dim_h = 0.0;
  std::vector<ConvergenceRow> rows;
  std::optional<std::int64_t> first_k_below;  // smallest listed k with gap < epsilon
};

// McMullen weights by default. Throws DomainError for an empty k_list.
ConvergenceTable convergence_table(const CarpetSpec& spec, const std::vector<std::int64_t>& k_list,
                                   std::optional<double> epsilon = std::nullopt);
ConvergenceTable convergence_table(const SelfAffineMeasure& measure, const std::vector<std::int64_t>& k_list,
                                   std::optional<double> epsilon = std::nullopt);

// The subcarpet itself on the m^l x n^l grid, one digit per frequency-constrained word.
CarpetSpec materialize_subsystem(const SelfAffineMeasure& measure, std::int64_t k,
                                 std::uint64_t cap = EnumerationLimits{}.cap);

}  // namespace carpet
