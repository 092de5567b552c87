#pragma once

// Bedford-McMullen carpets: validated digit sets on an m x n grid, their column
// structure, and exact enumeration of cylinders and approximate squares.
//
// Digit (col, row) is the map (x, y) -> ((x + col) / m, (y + row) / n), with
// row 0 at the bottom of the unit square.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace carpet {

struct Digit {
  std::int64_t col = 0;
  std::int64_t row = 0;

  auto operator<=>(const Digit&) const = default;
};

class CarpetSpec {
 public:
  // Throws GridError / DigitError. Digits come back sorted by (col, row).
  static CarpetSpec validate(std::int64_t m, std::int64_t n, std::vector<Digit> digits);

  std::int64_t m() const noexcept { return m_; }
  std::int64_t n() const noexcept { return n_; }
  const std::vector<Digit>& digits() const noexcept { return digits_; }
  std::size_t size() const noexcept { return digits_.size(); }

  bool operator==(const CarpetSpec&) const = default;

 private:
  CarpetSpec(std::int64_t m, std::int64_t n, std::vector<Digit> digits)
      : m_(m), n_(n), digits_(std::move(digits)) {}

  std::int64_t m_;
  std::int64_t n_;
  std::vector<Digit> digits_;
};

CarpetSpec validate_spec(std::int64_t m, std::int64_t n, std::vector<Digit> digits);

struct ColumnProfile {
  std::size_t M = 0;                 // non-empty columns
  std::vector<std::int64_t> counts;  // N_i, increasing column order
  std::size_t N = 0;
  std::vector<std::int64_t> columns;       // grid column of each non-empty column
  std::vector<std::size_t> digit_column;   // digit index -> index into counts
};

ColumnProfile column_profile(const CarpetSpec& spec);
bool is_uniform_fibres(const CarpetSpec& spec);
bool is_uniform_fibres(const ColumnProfile& profile);

// A finite word of digit indices.
class SymbolicWord {
 public:
  SymbolicWord() = default;
  explicit SymbolicWord(std::vector<std::uint32_t> letters) : letters_(std::move(letters)) {}

  const std::vector<std::uint32_t>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::uint32_t operator[](std::size_t i) const { return letters_[i]; }

  bool operator==(const SymbolicWord&) const = default;

 private:
  std::vector<std::uint32_t> letters_;
};

// Throws DigitError if any letter is not a digit index of spec.
void check_word(const CarpetSpec& spec, const SymbolicWord& word);

// Depth-k cylinder: [x_num / x_den, (x_num + 1) / x_den) x [y_num / y_den, (y_num + 1) / y_den)
// with x_den = m^k and y_den = n^k.
struct CylinderRect {
  std::uint64_t x_num = 0;
  std::uint64_t y_num = 0;
  std::uint64_t x_den = 1;
  std::uint64_t y_den = 1;
  int depth = 0;

  bool operator==(const CylinderRect&) const = default;
};

struct EnumerationLimits {
  std::uint64_t cap = 10'000'000;
};

// base^exponent, or nullopt when it does not fit in 63 bits.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exponent);

// Calls visit(rect, word) for all N^k cylinders in lexicographic word order.
void for_each_cylinder(const CarpetSpec& spec, int k,
                       const std::function<void(const CylinderRect&, std::span<const std::uint32_t>)>& visit,
                       EnumerationLimits limits = {});

std::vector<CylinderRect> enumerate_cylinders(const CarpetSpec& spec, int k, EnumerationLimits limits = {});

CylinderRect word_cylinder(const CarpetSpec& spec, const SymbolicWord& word);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Truncated coding map: (sum a_t m^-t, sum b_t n^-t). Word must be nonempty.
Point code_to_point(const CarpetSpec& spec, const SymbolicWord& word);

// l(k): the least l with m^l >= n^k, i.e. ceil(k log n / log m), decided exactly.
std::int64_t approx_depth(std::int64_t m, std::int64_t n, std::int64_t k);

struct ApproxSquare {
  int k = 0;
  int l = 0;
  std::vector<std::uint32_t> prefix;  // digit indices d_1..d_k
  std::vector<std::uint32_t> suffix;  // non-empty column indices i_{k+1}..i_l

  bool operator==(const ApproxSquare&) const = default;
};

// Lower-left corner (x_num / m^l, y_num / n^k); the square is m^-l wide and n^-k tall.
struct SquareExtent {
  std::uint64_t x_num = 0;
  std::uint64_t y_num = 0;
  std::uint64_t x_den = 1;
  std::uint64_t y_den = 1;
};

SquareExtent square_extent(const CarpetSpec& spec, const ColumnProfile& profile, const ApproxSquare& square);

// Number of approximate squares at depth k, saturating at UINT64_MAX.
std::uint64_t approx_square_total(const CarpetSpec& spec, int k);

std::vector<ApproxSquare> approx_squares(const CarpetSpec& spec, int k, EnumerationLimits limits = {});

}  // namespace carpet
