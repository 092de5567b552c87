#pragma once

// Numerical oracles for the closed forms: grid box-counting, approximate-square
// counts, L^q moment sums and their Legendre transform, coarse multifractal
// histograms, and a projection box-counting diagnostic.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carpet/bigint.hpp"
#include "carpet/carpet.hpp"
#include "carpet/estimate.hpp"
#include "carpet/measure.hpp"

namespace carpet {

// Inclusive range of half-open cells [c/s, (c+1)/s) meeting [num/den, (num+1)/den).
std::pair<std::uint64_t, std::uint64_t> cell_range(std::uint64_t num, std::uint64_t den, std::uint64_t cells);

// Occupancy of the cells x cells grid over [0,1)^2 by the depth-j cylinders.
// Row-major with row 0 at the bottom. Throws CapExceeded if N^j or cells^2 is over the cap.
std::vector<bool> cover_grid(const CarpetSpec& spec, int depth, std::uint64_t cells, EnumerationLimits limits = {});

// Number of n^-k x n^-k grid cells meeting the depth-j cylinder approximation.
std::uint64_t pixel_box_count(const CarpetSpec& spec, int depth, int scale_exponent, EnumerationLimits limits = {});

// Slope of log count against log(1/r), r = n^-k, over at least three increasing k.
Estimate box_dimension_estimate(const CarpetSpec& spec, int depth, const std::vector<int>& scale_exponents,
                                EnumerationLimits limits = {});

struct ApproxSquareCount {
  double log_count = 0.0;
  std::optional<BigInt> exact;  // present for k <= 10000
};

// N^k M^(l(k) - k).
ApproxSquareCount approx_square_count(const CarpetSpec& spec, std::int64_t k);

// log sum_Q mu(Q)^q over depth-k approximate squares, via the product structure:
// k log sum_d p_d^q + (l - k) log sum_i q_i^q.
double lq_log_moment_sum(const SelfAffineMeasure& measure, double q, std::int64_t k);

struct LqCurve {
  std::vector<double> qs;
  std::vector<double> taus;
  std::string convention;
  std::int64_t k = 0;  // 0 marks the k -> infinity limit
};

// tau_k(q) = log M_k(q) / (k log n); tau_k(1) is exactly 0.
double lq_tau(const SelfAffineMeasure& measure, double q, std::int64_t k);
// lim_k tau_k(q) = log sum_i q_i^q / log m + (log sum_d p_d^q - log sum_i q_i^q) / log n.
double lq_tau_limit(const SelfAffineMeasure& measure, double q);

LqCurve lq_spectrum(const SelfAffineMeasure& measure, const std::vector<double>& qs, std::int64_t k);
LqCurve lq_spectrum_limit(const SelfAffineMeasure& measure, const std::vector<double>& qs);

// q_min, q_min + step, ..., up to q_max (inclusive within half a step). Always contains q = 1
// when 1 lies in range.
std::vector<double> q_grid(double q_min, double q_max, double step);

// Non-increasing, convex, tau(1) == 0 wherever q = 1 is on the grid.
bool satisfies_lq_invariants(const LqCurve& curve);

struct LegendrePoint {
  double alpha = 0.0;
  double f = 0.0;
  double q_star = 0.0;    // minimising grid q
  bool attained = false;  // false when the minimum sits on the grid boundary
};

// f(alpha) = min over the grid of (q alpha + tau(q)). Throws DomainError if the curve
// violates its invariants.
std::vector<LegendrePoint> legendre_transform(const LqCurve& curve, const std::vector<double>& alphas);

struct HistogramBin {
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  double alpha = 0.0;  // bin centre
  BigInt count = 0;    // approximate squares in the bin
  double log_count = -INFINITY;
  double normalized_log_count = -INFINITY;  // log count / (k log n)
  double log_mass = -INFINITY;              // log of total mu-mass in the bin
};

struct MultifractalHistogram {
  std::int64_t k = 0;
  std::int64_t l = 0;
  std::vector<HistogramBin> bins;
  BigInt total = 0;
};

// Groups all depth-k approximate squares by alpha(Q) = -log mu(Q) / (k log n) into equal-width
// bins over the attained alpha range. Counts are exact, obtained from prefix/suffix
// composition classes rather than enumeration. A degenerate alpha range yields a single bin.
MultifractalHistogram coarse_multifractal_histogram(const SelfAffineMeasure& measure, std::int64_t k, int bins,
                                                    EnumerationLimits limits = {});

// Box-counting slope of the projection of the depth-j cylinders onto the line at `angle`
// (radians). Diagnostic only. Throws PrincipalAxisError for axis-parallel lines.
Estimate projection_box_estimate(const CarpetSpec& spec, double angle, int depth,
                                 const std::vector<int>& scale_exponents, EnumerationLimits limits = {});

}  // namespace carpet
