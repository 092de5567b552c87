#pragma once

// Closed-form dimensions of a carpet, all functions of (M, N_i, N, m, n).

#include <cstdint>
#include <vector>

#include "carpet/carpet.hpp"

namespace carpet {

struct DimensionReport {
  double hausdorff = 0.0;
  double box = 0.0;
  double packing = 0.0;
  double assouad = 0.0;
  double lower = 0.0;
};

DimensionReport dimension_report(const ColumnProfile& profile, std::int64_t m, std::int64_t n);
DimensionReport dimension_report(const CarpetSpec& spec);

// log M / log m + log ||N||_p / log n. p = +-infinity gives max / min, p = 0 the geometric mean.
double p_average_dimension(const ColumnProfile& profile, std::int64_t m, std::int64_t n, double p);

enum class SpectrumKind { assouad, lower };

const char* to_string(SpectrumKind kind);

// theta* = log m / log n, where both spectra switch branch.
double phase_transition(std::int64_t m, std::int64_t n);

// The two analytic branches, evaluated anywhere in (0, 1) so continuity can be checked.
double spectrum_left_branch(const ColumnProfile& profile, std::int64_t m, std::int64_t n, SpectrumKind kind,
                            double theta);
double spectrum_right_branch(const ColumnProfile& profile, std::int64_t m, std::int64_t n, SpectrumKind kind);

// Throws DomainError unless 0 < theta < 1.
double spectrum_value(const ColumnProfile& profile, std::int64_t m, std::int64_t n, SpectrumKind kind, double theta);

struct SpectrumCurve {
  SpectrumKind kind = SpectrumKind::assouad;
  std::vector<double> thetas;
  std::vector<double> values;
  double phase_transition = 0.0;
};

// Uniform grid i / (steps + 1), i = 1..steps, with theta* spliced in. Throws DomainError if steps < 2.
SpectrumCurve spectrum_curve(const ColumnProfile& profile, std::int64_t m, std::int64_t n, SpectrumKind kind,
                             int steps);

// Equals the Hausdorff dimension for every carpet.
double modified_lower_dimension(const ColumnProfile& profile, std::int64_t m, std::int64_t n);

// Smallest b with x = b^p for some p >= 1.
std::int64_t minimal_base(std::int64_t x);

// True iff log m / log n is rational, i.e. m and n are powers of one integer.
bool log_ratio_rational(std::int64_t m, std::int64_t n);

// min(dim_H F, 1) for every non-principal projection; RationalRatioError when log m / log n is rational.
double projection_dimension(const CarpetSpec& spec);

}  // namespace carpet
