#include "carpet/carpet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "carpet/bigint.hpp"
#include "carpet/errors.hpp"

namespace carpet {

namespace {

std::string digit_text(const Digit& d) {
  return "(" + std::to_string(d.col) + ", " + std::to_string(d.row) + ")";
}

std::uint64_t checked_pow_or_throw(std::uint64_t base, std::uint64_t exponent, const char* what) {
  auto value = checked_pow(base, exponent);
  if (!value) {
    throw CapExceeded(std::string(what) + ": " + std::to_string(base) + "^" + std::to_string(exponent) +
                      " exceeds exact 63-bit coordinate range");
  }
  return *value;
}

// N^k with saturation at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exponent) {
  auto value = checked_pow(base, exponent);
  return value ? *value : std::numeric_limits<std::uint64_t>::max();
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace

CarpetSpec CarpetSpec::validate(std::int64_t m, std::int64_t n, std::vector<Digit> digits) {
  if (m < 2) throw GridError("m must be at least 2 (got " + std::to_string(m) + ")");
  if (n <= m) {
    throw GridError("n must exceed m (got m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  if (digits.empty()) throw DigitError("digit set is empty");
  for (const auto& d : digits) {
    if (d.col < 0 || d.col >= m || d.row < 0 || d.row >= n) {
      throw DigitError("digit " + digit_text(d) + " lies outside the " + std::to_string(m) + "x" +
                       std::to_string(n) + " grid");
    }
  }
  std::sort(digits.begin(), digits.end());
  auto dup = std::adjacent_find(digits.begin(), digits.end());
  if (dup != digits.end()) throw DigitError("duplicate digit " + digit_text(*dup));
  return CarpetSpec(m, n, std::move(digits));
}

CarpetSpec validate_spec(std::int64_t m, std::int64_t n, std::vector<Digit> digits) {
  return CarpetSpec::validate(m, n, std::move(digits));
}

ColumnProfile column_profile(const CarpetSpec& spec) {
  ColumnProfile profile;
  profile.N = spec.size();
  profile.digit_column.reserve(spec.size());
  // Digits are sorted by column, so non-empty columns appear in increasing order.
  for (const auto& d : spec.digits()) {
    if (profile.columns.empty() || profile.columns.back() != d.col) {
      profile.columns.push_back(d.col);
      profile.counts.push_back(0);
    }
    ++profile.counts.back();
    profile.digit_column.push_back(profile.columns.size() - 1);
  }
  profile.M = profile.columns.size();
  return profile;
}

bool is_uniform_fibres(const ColumnProfile& profile) {
  return std::adjacent_find(profile.counts.begin(), profile.counts.end(), std::not_equal_to<>()) ==
         profile.counts.end();
}

bool is_uniform_fibres(const CarpetSpec& spec) { return is_uniform_fibres(column_profile(spec)); }

void check_word(const CarpetSpec& spec, const SymbolicWord& word) {
  for (std::size_t t = 0; t < word.size(); ++t) {
    if (word[t] >= spec.size()) {
      throw DigitError("letter " + std::to_string(word[t]) + " at position " + std::to_string(t) +
                       " is not a digit index (N=" + std::to_string(spec.size()) + ")");
    }
  }
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exponent) {
  constexpr std::uint64_t limit = std::numeric_limits<std::int64_t>::max();
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (base != 0 && out > limit / base) return std::nullopt;
    out *= base;
  }
  return out;
}

void for_each_cylinder(const CarpetSpec& spec, int k,
                       const std::function<void(const CylinderRect&, std::span<const std::uint32_t>)>& visit,
                       EnumerationLimits limits) {
  if (k < 1) throw DepthError("cylinder depth must be at least 1 (got " + std::to_string(k) + ")");
  const std::uint64_t total = saturating_pow(spec.size(), static_cast<std::uint64_t>(k));
  if (total > limits.cap) {
    throw CapExceeded("N^k = " + std::to_string(spec.size()) + "^" + std::to_string(k) +
                      " cylinders exceeds enumeration cap " + std::to_string(limits.cap));
  }
  const auto m = static_cast<std::uint64_t>(spec.m());
  const auto n = static_cast<std::uint64_t>(spec.n());
  const std::uint64_t x_den = checked_pow_or_throw(m, k, "cylinder width");
  const std::uint64_t y_den = checked_pow_or_throw(n, k, "cylinder height");

  const auto& digits = spec.digits();
  const std::uint32_t N = static_cast<std::uint32_t>(digits.size());
  std::vector<std::uint32_t> word(k, 0);
  // Partial corner numerators: xs[t] is the corner of the first t letters at scale m^t.
  std::vector<std::uint64_t> xs(k + 1, 0), ys(k + 1, 0);
  for (int t = 0; t < k; ++t) {
    xs[t + 1] = xs[t] * m + static_cast<std::uint64_t>(digits[0].col);
    ys[t + 1] = ys[t] * n + static_cast<std::uint64_t>(digits[0].row);
  }
  while (true) {
    visit(CylinderRect{xs[k], ys[k], x_den, y_den, k}, word);
    int t = k - 1;
    while (t >= 0 && word[t] + 1 == N) --t;
    if (t < 0) break;
    ++word[t];
    for (int s = t; s < k; ++s) {
      if (s > t) word[s] = 0;
      const auto& d = digits[word[s]];
      xs[s + 1] = xs[s] * m + static_cast<std::uint64_t>(d.col);
      ys[s + 1] = ys[s] * n + static_cast<std::uint64_t>(d.row);
    }
  }
}

std::vector<CylinderRect> enumerate_cylinders(const CarpetSpec& spec, int k, EnumerationLimits limits) {
  std::vector<CylinderRect> out;
  for_each_cylinder(
      spec, k, [&](const CylinderRect& rect, std::span<const std::uint32_t>) { out.push_back(rect); }, limits);
  return out;
}

CylinderRect word_cylinder(const CarpetSpec& spec, const SymbolicWord& word) {
  check_word(spec, word);
  const auto m = static_cast<std::uint64_t>(spec.m());
  const auto n = static_cast<std::uint64_t>(spec.n());
  const int k = static_cast<int>(word.size());
  CylinderRect rect{0, 0, checked_pow_or_throw(m, k, "cylinder width"),
                    checked_pow_or_throw(n, k, "cylinder height"), k};
  for (auto letter : word.letters()) {
    const auto& d = spec.digits()[letter];
    rect.x_num = rect.x_num * m + static_cast<std::uint64_t>(d.col);
    rect.y_num = rect.y_num * n + static_cast<std::uint64_t>(d.row);
  }
  return rect;
}

Point code_to_point(const CarpetSpec& spec, const SymbolicWord& word) {
  if (word.empty()) throw DepthError("code_to_point needs a nonempty word");
  check_word(spec, word);
  // Horner from the innermost map outwards.
  Point p;
  const auto m = static_cast<double>(spec.m());
  const auto n = static_cast<double>(spec.n());
  for (std::size_t t = word.size(); t-- > 0;) {
    const auto& d = spec.digits()[word[t]];
    p.x = (p.x + static_cast<double>(d.col)) / m;
    p.y = (p.y + static_cast<double>(d.row)) / n;
  }
  return p;
}

std::int64_t approx_depth(std::int64_t m, std::int64_t n, std::int64_t k) {
  if (k < 0) throw DepthError("depth must be non-negative");
  if (k == 0) return 0;
  const double ratio = static_cast<double>(k) * std::log(static_cast<double>(n)) / std::log(static_cast<double>(m));
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) > 1e-9 * std::max(1.0, ratio)) {
    return static_cast<std::int64_t>(std::ceil(ratio));
  }
  // Possible tie m^l == n^k: settle it on exact integers.
  auto l = static_cast<std::int64_t>(nearest);
  const BigInt target = big_pow(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
  while (big_pow(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(l)) < target) ++l;
  while (l > 0 && big_pow(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(l - 1)) >= target) --l;
  return l;
}

SquareExtent square_extent(const CarpetSpec& spec, const ColumnProfile& profile, const ApproxSquare& square) {
  const auto m = static_cast<std::uint64_t>(spec.m());
  const auto n = static_cast<std::uint64_t>(spec.n());
  SquareExtent e{0, 0, checked_pow_or_throw(m, square.l, "square width"),
                 checked_pow_or_throw(n, square.k, "square height")};
  for (auto letter : square.prefix) {
    const auto& d = spec.digits()[letter];
    e.x_num = e.x_num * m + static_cast<std::uint64_t>(d.col);
    e.y_num = e.y_num * n + static_cast<std::uint64_t>(d.row);
  }
  for (auto column : square.suffix) e.x_num = e.x_num * m + static_cast<std::uint64_t>(profile.columns[column]);
  return e;
}

std::uint64_t approx_square_total(const CarpetSpec& spec, int k) {
  const auto profile = column_profile(spec);
  const auto l = approx_depth(spec.m(), spec.n(), k);
  return saturating_mul(saturating_pow(profile.N, k), saturating_pow(profile.M, static_cast<std::uint64_t>(l - k)));
}

std::vector<ApproxSquare> approx_squares(const CarpetSpec& spec, int k, EnumerationLimits limits) {
  if (k < 1) throw DepthError("approximate-square depth must be at least 1 (got " + std::to_string(k) + ")");
  const auto profile = column_profile(spec);
  const int l = static_cast<int>(approx_depth(spec.m(), spec.n(), k));
  const std::uint64_t total = approx_square_total(spec, k);
  if (total > limits.cap) {
    throw CapExceeded("N^k M^(l-k) = " + std::to_string(total) + " approximate squares exceeds cap " +
                      std::to_string(limits.cap));
  }
  std::vector<ApproxSquare> out;
  out.reserve(total);
  const auto N = static_cast<std::uint32_t>(profile.N);
  const auto M = static_cast<std::uint32_t>(profile.M);
  // Odometer over k digit letters followed by l-k column letters.
  std::vector<std::uint32_t> odometer(l, 0);
  while (true) {
    out.push_back(ApproxSquare{k, l, {odometer.begin(), odometer.begin() + k}, {odometer.begin() + k, odometer.end()}});
    int t = l - 1;
    while (t >= 0 && odometer[t] + 1 == (t < k ? N : M)) odometer[t--] = 0;
    if (t < 0) break;
    ++odometer[t];
  }
  return out;
}

}  // namespace carpet
