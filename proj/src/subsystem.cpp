#include "carpet/subsystem.hpp"

#include <algorithm>
#include <cmath>

#include "carpet/dimensions.hpp"
#include "carpet/errors.hpp"

namespace carpet {

namespace {

constexpr std::int64_t kExactLengthLimit = 2000;

// floor(x), except values within rounding noise of an integer snap to it
// (6 * (1/6) must give 1).
std::int64_t robust_floor(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::floor(x));
}

std::vector<std::int64_t> column_totals(const SelfAffineMeasure& measure, const std::vector<std::int64_t>& counts) {
  const auto& profile = measure.profile();
  std::vector<std::int64_t> totals(profile.M, 0);
  for (std::size_t d = 0; d < counts.size(); ++d) totals[profile.digit_column[d]] += counts[d];
  return totals;
}

double log_multinomial_lgamma(std::int64_t total, const std::vector<std::int64_t>& parts) {
  double out = std::lgamma(static_cast<double>(total) + 1.0);
  for (auto x : parts) out -= std::lgamma(static_cast<double>(x) + 1.0);
  return out;
}

BigInt multinomial(std::int64_t total, const std::vector<std::int64_t>& parts) {
  BigInt out = big_factorial(static_cast<std::uint64_t>(total));
  for (auto x : parts) out /= big_factorial(static_cast<std::uint64_t>(x));
  return out;
}

}  // namespace

FloorCounts floor_counts(const SelfAffineMeasure& measure, std::int64_t k) {
  if (k < 1) throw DomainError("frequency parameter k must be at least 1 (got " + std::to_string(k) + ")");
  FloorCounts out;
  out.counts.reserve(measure.weights().size());
  for (double p : measure.weights()) {
    out.counts.push_back(robust_floor(static_cast<double>(k) * p));
    out.length += out.counts.back();
  }
  if (out.length == 0) {
    throw DegenerateError("l(k) = 0 for k = " + std::to_string(k) + ": every floor(k p_d) vanishes");
  }
  return out;
}

SubsystemCounts subsystem_counts(const SelfAffineMeasure& measure, std::int64_t k, CountPath path) {
  const auto floors = floor_counts(measure, k);
  SubsystemCounts out;
  out.k = k;
  out.l_k = floors.length;
  out.digit_counts = floors.counts;
  out.column_counts = column_totals(measure, floors.counts);

  if (path == CountPath::automatic) path = out.l_k <= kExactLengthLimit ? CountPath::exact : CountPath::log_gamma;
  if (path == CountPath::exact) {
    const auto exact = exact_subsystem_counts(measure, k);
    out.log_N_k = log_big(exact.N_k);
    out.log_M_k = log_big(exact.M_k);
  } else {
    out.log_N_k = log_multinomial_lgamma(out.l_k, out.digit_counts);
    out.log_M_k = log_multinomial_lgamma(out.l_k, out.column_counts);
  }
  const double l = static_cast<double>(out.l_k);
  const double lm = std::log(static_cast<double>(measure.spec().m()));
  const double ln = std::log(static_cast<double>(measure.spec().n()));
  out.dim_E_k = out.log_M_k / (l * lm) + (out.log_N_k - out.log_M_k) / (l * ln);
  return out;
}

ExactSubsystemCounts exact_subsystem_counts(const SelfAffineMeasure& measure, std::int64_t k) {
  const auto floors = floor_counts(measure, k);
  ExactSubsystemCounts out;
  out.N_k = multinomial(floors.length, floors.counts);
  out.M_k = multinomial(floors.length, column_totals(measure, floors.counts));
  out.per_column = out.N_k / out.M_k;
  return out;
}

ConvergenceTable convergence_table(const SelfAffineMeasure& measure, const std::vector<std::int64_t>& k_list,
                                   std::optional<double> epsilon) {
  if (k_list.empty()) throw DomainError("convergence table needs at least one k");
  ConvergenceTable table;
  table.dim_h = dimension_report(measure.profile(), measure.spec().m(), measure.spec().n()).hausdorff;
  for (auto k : k_list) {
    ConvergenceRow row;
    row.k = k;
    try {
      const auto counts = subsystem_counts(measure, k);
      row.l_k = counts.l_k;
      row.dim_E_k = counts.dim_E_k;
      row.gap = table.dim_h - counts.dim_E_k;
      if (epsilon && row.gap < *epsilon && (!table.first_k_below || k < *table.first_k_below)) {
        table.first_k_below = k;
      }
    } catch (const Error& e) {
      row.error = e.kind() + ": " + e.what();
      row.dim_E_k = NAN;
      row.gap = NAN;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ConvergenceTable convergence_table(const CarpetSpec& spec, const std::vector<std::int64_t>& k_list,
                                   std::optional<double> epsilon) {
  return convergence_table(mcmullen_weights(spec), k_list, epsilon);
}

CarpetSpec materialize_subsystem(const SelfAffineMeasure& measure, std::int64_t k, std::uint64_t cap) {
  const auto floors = floor_counts(measure, k);
  const auto exact = exact_subsystem_counts(measure, k);
  if (exact.N_k > cap) {
    throw CapExceeded("subsystem has " + exact.N_k.str() + " maps, over the cap " + std::to_string(cap));
  }
  const auto& spec = measure.spec();
  const auto length = static_cast<std::uint64_t>(floors.length);
  const auto grid_m = checked_pow(static_cast<std::uint64_t>(spec.m()), length);
  const auto grid_n = checked_pow(static_cast<std::uint64_t>(spec.n()), length);
  if (!grid_m || !grid_n) {
    throw CapExceeded("subsystem grid " + std::to_string(spec.m()) + "^" + std::to_string(length) + " x " +
                      std::to_string(spec.n()) + "^" + std::to_string(length) + " exceeds 63-bit integers");
  }

  std::vector<std::uint32_t> word;
  word.reserve(length);
  for (std::size_t d = 0; d < floors.counts.size(); ++d) {
    word.insert(word.end(), static_cast<std::size_t>(floors.counts[d]), static_cast<std::uint32_t>(d));
  }
  std::vector<Digit> digits;
  digits.reserve(exact.N_k.convert_to<std::size_t>());
  do {
    Digit composed;
    for (auto letter : word) {
      const auto& d = spec.digits()[letter];
      composed.col = composed.col * spec.m() + d.col;
      composed.row = composed.row * spec.n() + d.row;
    }
    digits.push_back(composed);
  } while (std::next_permutation(word.begin(), word.end()));
  return validate_spec(static_cast<std::int64_t>(*grid_m), static_cast<std::int64_t>(*grid_n), std::move(digits));
}

}  // namespace carpet
