#include "carpet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "carpet/errors.hpp"

namespace carpet {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    rss += r * r;
  }
  fit.residual_norm = std::sqrt(rss);
  return fit;
}

namespace {

double log_sum_exp(const std::vector<double>& terms) {
  const double top = *std::max_element(terms.begin(), terms.end());
  if (std::isinf(top)) return top;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

double log_add_exp(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double top = std::max(a, b);
  return top + std::log(std::exp(a - top) + std::exp(b - top));
}

void check_scales(const std::vector<int>& scale_exponents) {
  if (scale_exponents.size() < 3) {
    throw DomainError("regression needs at least 3 scales (got " + std::to_string(scale_exponents.size()) + ")");
  }
  for (std::size_t i = 0; i < scale_exponents.size(); ++i) {
    if (scale_exponents[i] < 1) throw DomainError("scale exponents must be at least 1");
    if (i > 0 && scale_exponents[i] <= scale_exponents[i - 1]) {
      throw DomainError("scale exponents must be strictly increasing so that scales strictly decrease");
    }
  }
}

Estimate regress(std::string method, double base, const std::vector<int>& scale_exponents,
                 const std::vector<double>& log_counts) {
  Estimate e;
  e.method = std::move(method);
  std::vector<double> log_inverse_scale;
  for (int k : scale_exponents) {
    e.scales.push_back(std::pow(base, -k));
    log_inverse_scale.push_back(static_cast<double>(k) * std::log(base));
  }
  e.log_counts = log_counts;
  const auto fit = fit_line(log_inverse_scale, log_counts);
  e.value = fit.slope;
  e.slope = fit.slope;
  e.intercept = fit.intercept;
  e.residual_norm = fit.residual_norm;
  return e;
}

}  // namespace

__extension__ typedef unsigned __int128 u128;

std::pair<std::uint64_t, std::uint64_t> cell_range(std::uint64_t num, std::uint64_t den, std::uint64_t cells) {
  const u128 lo = static_cast<u128>(num) * cells / den;
  const u128 hi_edge = static_cast<u128>(num + 1) * cells;
  u128 hi = (hi_edge + den - 1) / den;  // first cell not meeting the interval
  hi = std::min<u128>(hi, cells);
  return {static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi - 1)};
}

std::vector<bool> cover_grid(const CarpetSpec& spec, int depth, std::uint64_t cells, EnumerationLimits limits) {
  if (cells < 1) throw DomainError("grid needs at least one cell per unit");
  if (cells > limits.cap / cells) {
    throw CapExceeded("grid of " + std::to_string(cells) + "^2 cells exceeds cap " + std::to_string(limits.cap));
  }
  std::vector<bool> grid(cells * cells, false);
  for_each_cylinder(
      spec, depth,
      [&](const CylinderRect& rect, std::span<const std::uint32_t>) {
        const auto [x0, x1] = cell_range(rect.x_num, rect.x_den, cells);
        const auto [y0, y1] = cell_range(rect.y_num, rect.y_den, cells);
        for (auto y = y0; y <= y1; ++y) {
          for (auto x = x0; x <= x1; ++x) grid[y * cells + x] = true;
        }
      },
      limits);
  return grid;
}

std::uint64_t pixel_box_count(const CarpetSpec& spec, int depth, int scale_exponent, EnumerationLimits limits) {
  if (scale_exponent < 0) throw DomainError("scale exponent must be non-negative");
  const auto cells = checked_pow(static_cast<std::uint64_t>(spec.n()), static_cast<std::uint64_t>(scale_exponent));
  if (!cells) throw CapExceeded("n^k grid does not fit in 63 bits");
  const auto grid = cover_grid(spec, depth, *cells, limits);
  return static_cast<std::uint64_t>(std::count(grid.begin(), grid.end(), true));
}

Estimate box_dimension_estimate(const CarpetSpec& spec, int depth, const std::vector<int>& scale_exponents,
                                EnumerationLimits limits) {
  check_scales(scale_exponents);
  std::vector<double> log_counts;
  for (int k : scale_exponents) {
    log_counts.push_back(std::log(static_cast<double>(pixel_box_count(spec, depth, k, limits))));
  }
  return regress("box", static_cast<double>(spec.n()), scale_exponents, log_counts);
}

ApproxSquareCount approx_square_count(const CarpetSpec& spec, std::int64_t k) {
  if (k < 1) throw DepthError("approximate-square depth must be at least 1 (got " + std::to_string(k) + ")");
  const auto profile = column_profile(spec);
  const auto l = approx_depth(spec.m(), spec.n(), k);
  ApproxSquareCount out;
  out.log_count = static_cast<double>(k) * std::log(static_cast<double>(profile.N)) +
                  static_cast<double>(l - k) * std::log(static_cast<double>(profile.M));
  if (k <= 10000) {
    out.exact = big_pow(profile.N, static_cast<std::uint64_t>(k)) * big_pow(profile.M, static_cast<std::uint64_t>(l - k));
  }
  return out;
}

double lq_log_moment_sum(const SelfAffineMeasure& measure, double q, std::int64_t k) {
  if (k < 1) throw DepthError("moment-sum depth must be at least 1 (got " + std::to_string(k) + ")");
  const auto l = approx_depth(measure.spec().m(), measure.spec().n(), k);
  std::vector<double> digit_terms, column_terms;
  for (std::size_t d = 0; d < measure.weights().size(); ++d) {
    digit_terms.push_back(q * measure.log_weight(static_cast<std::uint32_t>(d)));
  }
  for (std::size_t i = 0; i < measure.column_weights().size(); ++i) {
    column_terms.push_back(q * measure.log_column_weight(i));
  }
  return static_cast<double>(k) * log_sum_exp(digit_terms) + static_cast<double>(l - k) * log_sum_exp(column_terms);
}

double lq_tau(const SelfAffineMeasure& measure, double q, std::int64_t k) {
  const double moment = lq_log_moment_sum(measure, q, k);
  if (q == 1.0) return 0.0;
  return moment / (static_cast<double>(k) * std::log(static_cast<double>(measure.spec().n())));
}

double lq_tau_limit(const SelfAffineMeasure& measure, double q) {
  if (q == 1.0) return 0.0;
  std::vector<double> digit_terms, column_terms;
  for (std::size_t d = 0; d < measure.weights().size(); ++d) {
    digit_terms.push_back(q * measure.log_weight(static_cast<std::uint32_t>(d)));
  }
  for (std::size_t i = 0; i < measure.column_weights().size(); ++i) {
    column_terms.push_back(q * measure.log_column_weight(i));
  }
  const double digits = log_sum_exp(digit_terms);
  const double columns = log_sum_exp(column_terms);
  return columns / std::log(static_cast<double>(measure.spec().m())) +
         (digits - columns) / std::log(static_cast<double>(measure.spec().n()));
}

LqCurve lq_spectrum(const SelfAffineMeasure& measure, const std::vector<double>& qs, std::int64_t k) {
  LqCurve curve;
  curve.qs = qs;
  curve.k = k;
  curve.convention = "tau_k(q) = log sum_Q mu(Q)^q / (k log n), Q over depth-k approximate squares";
  for (double q : qs) curve.taus.push_back(lq_tau(measure, q, k));
  return curve;
}

LqCurve lq_spectrum_limit(const SelfAffineMeasure& measure, const std::vector<double>& qs) {
  LqCurve curve;
  curve.qs = qs;
  curve.k = 0;
  curve.convention = "tau(q) = lim_k log sum_Q mu(Q)^q / (k log n), Q over depth-k approximate squares";
  for (double q : qs) curve.taus.push_back(lq_tau_limit(measure, q));
  return curve;
}

std::vector<double> q_grid(double q_min, double q_max, double step) {
  if (!(step > 0.0) || !(q_max >= q_min)) throw DomainError("q grid needs step > 0 and q_max >= q_min");
  const auto count = static_cast<std::int64_t>(std::floor((q_max - q_min) / step + 0.5));
  std::vector<double> qs;
  qs.reserve(static_cast<std::size_t>(count + 1));
  for (std::int64_t i = 0; i <= count; ++i) {
    double q = q_min + static_cast<double>(i) * step;
    const double nearest = std::round(q);
    if (std::abs(q - nearest) < 1e-9 * step) q = nearest;
    qs.push_back(q);
  }
  return qs;
}

bool satisfies_lq_invariants(const LqCurve& curve) {
  if (curve.qs.size() != curve.taus.size()) return false;
  for (std::size_t i = 0; i < curve.qs.size(); ++i) {
    if (curve.qs[i] == 1.0 && curve.taus[i] != 0.0) return false;
    if (i == 0) continue;
    if (!(curve.qs[i] > curve.qs[i - 1])) return false;
    if (curve.taus[i] > curve.taus[i - 1] + 1e-12 * (1.0 + std::abs(curve.taus[i - 1]))) return false;
  }
  for (std::size_t i = 2; i < curve.qs.size(); ++i) {
    const double left = (curve.taus[i - 1] - curve.taus[i - 2]) / (curve.qs[i - 1] - curve.qs[i - 2]);
    const double right = (curve.taus[i] - curve.taus[i - 1]) / (curve.qs[i] - curve.qs[i - 1]);
    if (right < left - 1e-9 * (1.0 + std::abs(left))) return false;
  }
  return true;
}

std::vector<LegendrePoint> legendre_transform(const LqCurve& curve, const std::vector<double>& alphas) {
  if (curve.qs.empty() || !satisfies_lq_invariants(curve)) {
    throw DomainError("Legendre transform needs a nonempty, non-increasing, convex L^q curve with tau(1) = 0");
  }
  std::vector<LegendrePoint> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    LegendrePoint point{alpha, INFINITY, 0.0, false};
    std::size_t best = 0;
    for (std::size_t i = 0; i < curve.qs.size(); ++i) {
      const double value = curve.qs[i] * alpha + curve.taus[i];
      if (value < point.f) {
        point.f = value;
        best = i;
      }
    }
    point.q_star = curve.qs[best];
    point.attained = curve.qs.size() > 2 && best > 0 && best + 1 < curve.qs.size();
    out.push_back(point);
  }
  return out;
}

namespace {

struct WeightClass {
  double log_weight;
  std::uint64_t size;
};

// Letters with bit-identical weights are interchangeable for the measure.
std::vector<WeightClass> weight_classes(const std::vector<double>& log_weights) {
  std::map<double, std::uint64_t> grouped;
  for (double w : log_weights) ++grouped[w];
  std::vector<WeightClass> out;
  for (const auto& [w, size] : grouped) out.push_back({w, size});
  return out;
}

struct CompositionClass {
  double log_measure = 0.0;
  BigInt count;
  double log_count = 0.0;
};

// Number of compositions of `total` into `parts` non-negative parts, as a double.
double composition_count(std::int64_t total, std::size_t parts) {
  return std::exp(std::lgamma(static_cast<double>(total + static_cast<std::int64_t>(parts))) -
                  std::lgamma(static_cast<double>(total) + 1.0) - std::lgamma(static_cast<double>(parts)));
}

// Every way of distributing `total` letters over the classes, with the exact number
// of words realising it: multinomial(total; c) * prod size_j^c_j.
std::vector<CompositionClass> compositions(const std::vector<WeightClass>& classes, std::int64_t total) {
  std::vector<BigInt> factorial(static_cast<std::size_t>(total) + 1);
  factorial[0] = 1;
  for (std::int64_t i = 1; i <= total; ++i) factorial[i] = factorial[i - 1] * i;

  std::vector<CompositionClass> out;
  std::vector<std::int64_t> parts(classes.size(), 0);
  std::function<void(std::size_t, std::int64_t)> recurse = [&](std::size_t j, std::int64_t left) {
    if (j + 1 == classes.size()) {
      parts[j] = left;
      BigInt count = factorial[total];
      double log_measure = 0.0;
      for (std::size_t i = 0; i < classes.size(); ++i) {
        count /= factorial[parts[i]];
        log_measure += static_cast<double>(parts[i]) * classes[i].log_weight;
      }
      for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i].size > 1) count *= big_pow(classes[i].size, static_cast<std::uint64_t>(parts[i]));
      }
      out.push_back({log_measure, count, log_big(count)});
      return;
    }
    for (std::int64_t c = 0; c <= left; ++c) {
      parts[j] = c;
      recurse(j + 1, left - c);
    }
  };
  recurse(0, total);
  return out;
}

}  // namespace

MultifractalHistogram coarse_multifractal_histogram(const SelfAffineMeasure& measure, std::int64_t k, int bins,
                                                    EnumerationLimits limits) {
  if (k < 1) throw DepthError("histogram depth must be at least 1 (got " + std::to_string(k) + ")");
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  const auto& spec = measure.spec();
  const auto l = approx_depth(spec.m(), spec.n(), k);

  std::vector<double> digit_logs, column_logs;
  for (std::size_t d = 0; d < spec.size(); ++d) digit_logs.push_back(measure.log_weight(static_cast<std::uint32_t>(d)));
  for (std::size_t i = 0; i < measure.column_weights().size(); ++i) column_logs.push_back(measure.log_column_weight(i));
  const auto digit_classes = weight_classes(digit_logs);
  const auto column_classes = weight_classes(column_logs);

  const double pairs = composition_count(k, digit_classes.size()) * composition_count(l - k, column_classes.size());
  if (pairs > static_cast<double>(limits.cap)) {
    throw CapExceeded("composition table of about " + std::to_string(static_cast<std::uint64_t>(pairs)) +
                      " entries exceeds cap " + std::to_string(limits.cap));
  }
  const auto prefixes = compositions(digit_classes, k);
  const auto suffixes = compositions(column_classes, l - k);

  const double scale = static_cast<double>(k) * std::log(static_cast<double>(spec.n()));
  auto alpha_of = [&](double log_mu) { return -log_mu / scale; };
  double max_prefix = -INFINITY, min_prefix = INFINITY, max_suffix = -INFINITY, min_suffix = INFINITY;
  for (const auto& p : prefixes) {
    max_prefix = std::max(max_prefix, p.log_measure);
    min_prefix = std::min(min_prefix, p.log_measure);
  }
  for (const auto& s : suffixes) {
    max_suffix = std::max(max_suffix, s.log_measure);
    min_suffix = std::min(min_suffix, s.log_measure);
  }
  const double alpha_min = alpha_of(max_prefix + max_suffix);
  const double alpha_max = alpha_of(min_prefix + min_suffix);
  const bool degenerate = alpha_max - alpha_min <= 1e-12 * std::max(1.0, alpha_max);
  const int bin_count = degenerate ? 1 : bins;
  const double width = degenerate ? 0.0 : (alpha_max - alpha_min) / bin_count;

  MultifractalHistogram h;
  h.k = k;
  h.l = l;
  h.bins.resize(static_cast<std::size_t>(bin_count));
  for (int b = 0; b < bin_count; ++b) {
    auto& bin = h.bins[static_cast<std::size_t>(b)];
    bin.alpha_lo = alpha_min + width * b;
    bin.alpha_hi = b + 1 == bin_count ? alpha_max : alpha_min + width * (b + 1);
    bin.alpha = 0.5 * (bin.alpha_lo + bin.alpha_hi);
  }
  for (const auto& p : prefixes) {
    for (const auto& s : suffixes) {
      const double log_mu = p.log_measure + s.log_measure;
      int b = 0;
      if (!degenerate) {
        b = static_cast<int>(std::floor((alpha_of(log_mu) - alpha_min) / width));
        b = std::clamp(b, 0, bin_count - 1);
      }
      auto& bin = h.bins[static_cast<std::size_t>(b)];
      bin.count += p.count * s.count;
      bin.log_mass = log_add_exp(bin.log_mass, p.log_count + s.log_count + log_mu);
    }
  }
  for (auto& bin : h.bins) {
    h.total += bin.count;
    if (bin.count > 0) {
      bin.log_count = log_big(bin.count);
      bin.normalized_log_count = bin.log_count / scale;
    }
  }
  return h;
}

Estimate projection_box_estimate(const CarpetSpec& spec, double angle, int depth,
                                 const std::vector<int>& scale_exponents, EnumerationLimits limits) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  if (std::abs(c) < 1e-12 || std::abs(s) < 1e-12) {
    throw PrincipalAxisError("projection angle " + std::to_string(angle) + " is a principal axis");
  }
  check_scales(scale_exponents);

  // Projected extent of each cylinder onto t = x cos a + y sin a.
  std::vector<std::pair<double, double>> intervals;
  for_each_cylinder(
      spec, depth,
      [&](const CylinderRect& rect, std::span<const std::uint32_t>) {
        const double x0 = static_cast<double>(rect.x_num) / static_cast<double>(rect.x_den);
        const double y0 = static_cast<double>(rect.y_num) / static_cast<double>(rect.y_den);
        const double dx = c / static_cast<double>(rect.x_den);
        const double dy = s / static_cast<double>(rect.y_den);
        const double base = x0 * c + y0 * s;
        intervals.emplace_back(base + std::min(0.0, dx) + std::min(0.0, dy), base + std::max(0.0, dx) + std::max(0.0, dy));
      },
      limits);
  std::sort(intervals.begin(), intervals.end());
  const double origin = std::min(0.0, c) + std::min(0.0, s);

  std::vector<double> log_counts;
  for (int k : scale_exponents) {
    const double r = std::pow(static_cast<double>(spec.n()), -k);
    std::uint64_t count = 0;
    std::int64_t last = std::numeric_limits<std::int64_t>::min();
    for (const auto& [lo, hi] : intervals) {
      const auto first = static_cast<std::int64_t>(std::floor((lo - origin) / r));
      const auto final = std::max(first, static_cast<std::int64_t>(std::ceil((hi - origin) / r)) - 1);
      const std::int64_t start = std::max(first, last + 1);
      if (final >= start) {
        count += static_cast<std::uint64_t>(final - start + 1);
        last = final;
      }
    }
    log_counts.push_back(std::log(static_cast<double>(count)));
  }
  return regress("projection", static_cast<double>(spec.n()), scale_exponents, log_counts);
}

}  // namespace carpet
