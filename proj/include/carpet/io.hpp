#pragma once

// Spec files, CSV output and PGM rendering.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carpet/carpet.hpp"
#include "carpet/dimensions.hpp"
#include "carpet/estimate.hpp"
#include "carpet/measure.hpp"
#include "carpet/numerics.hpp"
#include "carpet/subsystem.hpp"

namespace carpet {

struct ParsedSpec {
  CarpetSpec spec;
  std::optional<SelfAffineMeasure> measure;
};

// {"m": int, "n": int, "digits": [[col, row], ...], "weights": [float, ...]?}
// Throws ParseError (with a field path) or the validation error of the offending module.
ParsedSpec parse_spec(std::string_view text);
ParsedSpec read_spec_file(const std::filesystem::path& path);

// Canonical JSON: keys m, n, digits (sorted), then weights if given.
std::string serialize_spec(const CarpetSpec& spec, const std::vector<double>* weights = nullptr);

// 8-bit grayscale, 0 = black. Pixels are stored top row first; pixel (x, y) with y counted
// from the bottom of [0,1]^2 lives at (height - 1 - y) * width + x.
struct RasterImage {
  std::uint64_t width = 0;
  std::uint64_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::uint64_t x, std::uint64_t y_from_bottom) const {
    return pixels[(height - 1 - y_from_bottom) * width + x];
  }
};

// Binary PGM (P5, maxval 255).
std::string encode_pgm(const RasterImage& image);
void write_pgm(const RasterImage& image, const std::filesystem::path& path);

// True when pixel edges fall on every depth-j cylinder edge, i.e. lcm(m, n)^j divides ppu.
bool resolution_aligned(const CarpetSpec& spec, int depth, std::uint64_t pixels_per_unit);

// Black where a pixel meets a depth-j cylinder, white elsewhere.
RasterImage render_set(const CarpetSpec& spec, int depth, std::uint64_t pixels_per_unit,
                       EnumerationLimits limits = {});

// Occupied pixels shaded by the log of the heaviest depth-j cylinder they meet
// (0 for the heaviest, up to 224 for the lightest); empty pixels white.
RasterImage render_measure(const SelfAffineMeasure& measure, int depth, std::uint64_t pixels_per_unit,
                           EnumerationLimits limits = {});

struct CsvTable {
  std::vector<std::string> comments;  // emitted as "# ..." lines before the header
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Locale-independent. significant = 0 gives the shortest string that round-trips.
std::string format_double(double value, int significant = 17);

// Throws DomainError if a row's width differs from the header's.
std::string write_csv(const CsvTable& table);

CsvTable spectrum_table(const SpectrumCurve& curve);
CsvTable convergence_csv(const ConvergenceTable& table);
CsvTable lq_table(const LqCurve& curve);
CsvTable legendre_table(const std::vector<LegendrePoint>& points);
CsvTable histogram_table(const MultifractalHistogram& histogram);
CsvTable estimate_table(const Estimate& estimate);

}  // namespace carpet
