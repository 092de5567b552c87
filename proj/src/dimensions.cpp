#include "carpet/dimensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "carpet/errors.hpp"

namespace carpet {

namespace {

__extension__ typedef __int128 i128;

struct Logs {
  double m;
  double n;
};

Logs logs(std::int64_t m, std::int64_t n) {
  return {std::log(static_cast<double>(m)), std::log(static_cast<double>(n))};
}

double log_max_count(const ColumnProfile& profile) {
  return std::log(static_cast<double>(*std::max_element(profile.counts.begin(), profile.counts.end())));
}

double log_min_count(const ColumnProfile& profile) {
  return std::log(static_cast<double>(*std::min_element(profile.counts.begin(), profile.counts.end())));
}

double extreme_log_count(const ColumnProfile& profile, SpectrumKind kind) {
  return kind == SpectrumKind::assouad ? log_max_count(profile) : log_min_count(profile);
}

// floor(x^(1/p)) for x >= 1, p >= 1, exactly.
std::int64_t integer_root(std::int64_t x, int p) {
  auto r = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(x), 1.0 / p)));
  auto pow_leq = [&](std::int64_t base) {
    i128 acc = 1;
    for (int i = 0; i < p; ++i) {
      acc *= base;
      if (acc > x) return false;
    }
    return true;
  };
  while (r > 1 && !pow_leq(r)) --r;
  while (pow_leq(r + 1)) ++r;
  return r;
}

bool is_power_of(std::int64_t x, std::int64_t base) {
  if (base < 2) return false;
  while (x % base == 0) x /= base;
  return x == 1;
}

}  // namespace

DimensionReport dimension_report(const ColumnProfile& profile, std::int64_t m, std::int64_t n) {
  const auto [lm, ln] = logs(m, n);
  const double log_M = std::log(static_cast<double>(profile.M));
  const double s = lm / ln;
  double column_sum = 0.0;
  for (auto c : profile.counts) column_sum += std::pow(static_cast<double>(c), s);

  DimensionReport r;
  r.hausdorff = std::log(column_sum) / lm;
  r.box = log_M / lm + std::log(static_cast<double>(profile.N) / static_cast<double>(profile.M)) / ln;
  r.packing = r.box;
  r.assouad = log_M / lm + log_max_count(profile) / ln;
  r.lower = log_M / lm + log_min_count(profile) / ln;
  return r;
}

DimensionReport dimension_report(const CarpetSpec& spec) {
  return dimension_report(column_profile(spec), spec.m(), spec.n());
}

double p_average_dimension(const ColumnProfile& profile, std::int64_t m, std::int64_t n, double p) {
  const auto [lm, ln] = logs(m, n);
  const double M = static_cast<double>(profile.M);
  double log_norm = 0.0;
  if (std::isinf(p)) {
    log_norm = p > 0 ? log_max_count(profile) : log_min_count(profile);
  } else if (p == 0.0) {
    for (auto c : profile.counts) log_norm += std::log(static_cast<double>(c));
    log_norm /= M;
  } else if (std::abs(p) * log_max_count(profile) < 1.0) {
    // Near p = 0 the mean of N_i^p is 1 + O(p); keep the O(p) part exactly.
    double excess = 0.0;
    for (auto c : profile.counts) excess += std::expm1(p * std::log(static_cast<double>(c)));
    log_norm = std::log1p(excess / M) / p;
  } else {
    const double shift = p > 0 ? log_max_count(profile) : log_min_count(profile);
    double sum = 0.0;
    for (auto c : profile.counts) sum += std::exp(p * (std::log(static_cast<double>(c)) - shift));
    log_norm = shift + (std::log(sum) - std::log(M)) / p;
  }
  return std::log(M) / lm + log_norm / ln;
}

const char* to_string(SpectrumKind kind) { return kind == SpectrumKind::assouad ? "assouad" : "lower"; }

double phase_transition(std::int64_t m, std::int64_t n) {
  const auto [lm, ln] = logs(m, n);
  return lm / ln;
}

double spectrum_left_branch(const ColumnProfile& profile, std::int64_t m, std::int64_t n, SpectrumKind kind,
                            double theta) {
  const auto [lm, ln] = logs(m, n);
  const double log_M = std::log(static_cast<double>(profile.M));
  const double log_N = std::log(static_cast<double>(profile.N));
  const double log_x = extreme_log_count(profile, kind);
  return (log_M - theta * (log_N - log_x)) / ((1.0 - theta) * lm) +
         (log_N - log_M - theta * log_x) / ((1.0 - theta) * ln);
}

double spectrum_right_branch(const ColumnProfile& profile, std::int64_t m, std::int64_t n, SpectrumKind kind) {
  const auto [lm, ln] = logs(m, n);
  return std::log(static_cast<double>(profile.M)) / lm + extreme_log_count(profile, kind) / ln;
}

double spectrum_value(const ColumnProfile& profile, std::int64_t m, std::int64_t n, SpectrumKind kind, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw DomainError("spectrum parameter theta must lie in (0, 1) (got " + std::to_string(theta) + ")");
  }
  if (theta < phase_transition(m, n)) return spectrum_left_branch(profile, m, n, kind, theta);
  return spectrum_right_branch(profile, m, n, kind);
}

SpectrumCurve spectrum_curve(const ColumnProfile& profile, std::int64_t m, std::int64_t n, SpectrumKind kind,
                             int steps) {
  if (steps < 2) throw DomainError("spectrum curve needs at least 2 steps (got " + std::to_string(steps) + ")");
  SpectrumCurve curve;
  curve.kind = kind;
  curve.phase_transition = phase_transition(m, n);
  for (int i = 1; i <= steps; ++i) curve.thetas.push_back(static_cast<double>(i) / (steps + 1));
  auto at = std::lower_bound(curve.thetas.begin(), curve.thetas.end(), curve.phase_transition);
  if (at == curve.thetas.end() || *at != curve.phase_transition) curve.thetas.insert(at, curve.phase_transition);
  curve.values.reserve(curve.thetas.size());
  for (double theta : curve.thetas) curve.values.push_back(spectrum_value(profile, m, n, kind, theta));
  return curve;
}

double modified_lower_dimension(const ColumnProfile& profile, std::int64_t m, std::int64_t n) {
  return dimension_report(profile, m, n).hausdorff;
}

std::int64_t minimal_base(std::int64_t x) {
  if (x < 2) return x;
  // The largest exponent gives the smallest base.
  for (int p = 62; p >= 2; --p) {
    const std::int64_t r = integer_root(x, p);
    if (r < 2) continue;
    i128 acc = 1;
    for (int i = 0; i < p; ++i) acc *= r;
    if (acc == x) return minimal_base(r);
  }
  return x;
}

bool log_ratio_rational(std::int64_t m, std::int64_t n) {
  const std::int64_t base = minimal_base(m);
  return is_power_of(n, base);
}

double projection_dimension(const CarpetSpec& spec) {
  if (log_ratio_rational(spec.m(), spec.n())) {
    throw RationalRatioError("log m / log n is rational for m=" + std::to_string(spec.m()) +
                             ", n=" + std::to_string(spec.n()) + " (common base " +
                             std::to_string(minimal_base(spec.m())) + "); the projection formula does not apply");
  }
  return std::min(dimension_report(spec).hausdorff, 1.0);
}

}  // namespace carpet
