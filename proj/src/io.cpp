#include "carpet/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "carpet/errors.hpp"

namespace carpet {

namespace {

using Json = nlohmann::json;

std::int64_t integer_field(const Json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ParseError(path + ": expected an integer");
  return value.get<std::int64_t>();
}

}  // namespace

ParsedSpec parse_spec(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("$: expected a JSON object");
  for (const auto& item : doc.items()) {
    if (item.key() != "m" && item.key() != "n" && item.key() != "digits" && item.key() != "weights") {
      throw ParseError("$." + item.key() + ": unknown field");
    }
  }
  for (const char* field : {"m", "n", "digits"}) {
    if (!doc.contains(field)) throw ParseError(std::string("$.") + field + ": missing required field");
  }
  const auto m = integer_field(doc["m"], "$.m");
  const auto n = integer_field(doc["n"], "$.n");

  const auto& raw_digits = doc["digits"];
  if (!raw_digits.is_array()) throw ParseError("$.digits: expected an array of [col, row] pairs");
  std::vector<Digit> digits;
  for (std::size_t i = 0; i < raw_digits.size(); ++i) {
    const auto path = "$.digits[" + std::to_string(i) + "]";
    const auto& pair = raw_digits[i];
    if (!pair.is_array() || pair.size() != 2) throw ParseError(path + ": expected [col, row]");
    digits.push_back({integer_field(pair[0], path + "[0]"), integer_field(pair[1], path + "[1]")});
  }

  // Weights are listed in file order; validation sorts the digits, so carry the weights along.
  std::optional<std::vector<double>> weights;
  if (doc.contains("weights")) {
    const auto& raw = doc["weights"];
    if (!raw.is_array()) throw ParseError("$.weights: expected an array of numbers");
    weights.emplace();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!raw[i].is_number()) throw ParseError("$.weights[" + std::to_string(i) + "]: expected a number");
      weights->push_back(raw[i].get<double>());
    }
  }

  auto spec = validate_spec(m, n, digits);
  ParsedSpec out{spec, std::nullopt};
  if (weights) {
    if (weights->size() != digits.size()) {
      throw WeightError("expected " + std::to_string(digits.size()) + " weights, got " +
                        std::to_string(weights->size()));
    }
    std::vector<std::size_t> order(digits.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return digits[a] < digits[b]; });
    std::vector<double> sorted;
    sorted.reserve(order.size());
    for (auto i : order) sorted.push_back((*weights)[i]);
    out.measure = make_measure(spec, std::move(sorted));
  }
  return out;
}

ParsedSpec read_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open spec file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str());
}

std::string serialize_spec(const CarpetSpec& spec, const std::vector<double>* weights) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  doc["m"] = spec.m();
  doc["n"] = spec.n();
  auto digits = nlohmann::ordered_json::array();
  for (const auto& d : spec.digits()) digits.push_back({d.col, d.row});
  doc["digits"] = std::move(digits);
  if (weights) doc["weights"] = *weights;
  return doc.dump();
}

std::string encode_pgm(const RasterImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(image.pixels.begin(), image.pixels.end());
  return out;
}

void write_pgm(const RasterImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path.string() + " for writing");
  const auto bytes = encode_pgm(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

bool resolution_aligned(const CarpetSpec& spec, int depth, std::uint64_t pixels_per_unit) {
  const auto lcm = std::lcm(static_cast<std::uint64_t>(spec.m()), static_cast<std::uint64_t>(spec.n()));
  const auto step = checked_pow(lcm, static_cast<std::uint64_t>(depth));
  return step && pixels_per_unit % *step == 0;
}

RasterImage render_set(const CarpetSpec& spec, int depth, std::uint64_t pixels_per_unit, EnumerationLimits limits) {
  const auto grid = cover_grid(spec, depth, pixels_per_unit, limits);
  RasterImage image{pixels_per_unit, pixels_per_unit, std::vector<std::uint8_t>(grid.size(), 255)};
  for (std::uint64_t y = 0; y < pixels_per_unit; ++y) {
    for (std::uint64_t x = 0; x < pixels_per_unit; ++x) {
      if (grid[y * pixels_per_unit + x]) image.pixels[(pixels_per_unit - 1 - y) * pixels_per_unit + x] = 0;
    }
  }
  return image;
}

RasterImage render_measure(const SelfAffineMeasure& measure, int depth, std::uint64_t pixels_per_unit,
                           EnumerationLimits limits) {
  const std::uint64_t cells = pixels_per_unit;
  if (cells < 1 || cells > limits.cap / cells) {
    throw CapExceeded("image of " + std::to_string(cells) + "^2 pixels exceeds cap " + std::to_string(limits.cap));
  }
  std::vector<double> heaviest(cells * cells, -INFINITY);
  for_each_cylinder(
      measure.spec(), depth,
      [&](const CylinderRect& rect, std::span<const std::uint32_t> word) {
        double log_mu = 0.0;
        for (auto d : word) log_mu += measure.log_weight(d);
        const auto [x0, x1] = cell_range(rect.x_num, rect.x_den, cells);
        const auto [y0, y1] = cell_range(rect.y_num, rect.y_den, cells);
        for (auto y = y0; y <= y1; ++y) {
          for (auto x = x0; x <= x1; ++x) heaviest[y * cells + x] = std::max(heaviest[y * cells + x], log_mu);
        }
      },
      limits);

  double top = -INFINITY, bottom = INFINITY;
  for (double v : heaviest) {
    if (v == -INFINITY) continue;
    top = std::max(top, v);
    bottom = std::min(bottom, v);
  }
  const bool flat = top - bottom <= 1e-12 * std::max(1.0, std::abs(top));
  RasterImage image{cells, cells, std::vector<std::uint8_t>(cells * cells, 255)};
  for (std::uint64_t y = 0; y < cells; ++y) {
    for (std::uint64_t x = 0; x < cells; ++x) {
      const double v = heaviest[y * cells + x];
      if (v == -INFINITY) continue;
      const double level = flat ? 112.0 : 224.0 * (top - v) / (top - bottom);
      image.pixels[(cells - 1 - y) * cells + x] = static_cast<std::uint8_t>(std::lround(level));
    }
  }
  return image;
}

std::string format_double(double value, int significant) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = significant > 0 ? std::to_chars(buffer, buffer + sizeof buffer, value,
                                                      std::chars_format::general, significant)
                                      : std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string write_csv(const CsvTable& table) {
  std::string out;
  for (const auto& c : table.comments) out += "# " + c + "\n";
  auto join = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  join(table.header);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size()) {
      throw DomainError("CSV row " + std::to_string(r) + " has " + std::to_string(table.rows[r].size()) +
                        " cells, header has " + std::to_string(table.header.size()));
    }
    join(table.rows[r]);
  }
  return out;
}

CsvTable spectrum_table(const SpectrumCurve& curve) {
  CsvTable t;
  t.header = {"theta", "value"};
  for (std::size_t i = 0; i < curve.thetas.size(); ++i) {
    if (curve.thetas[i] == curve.phase_transition) {
      t.comments.push_back(std::string(to_string(curve.kind)) + " spectrum; phase transition at row " +
                           std::to_string(i) + ", theta=" + format_double(curve.phase_transition, 0));
    }
    t.rows.push_back({format_double(curve.thetas[i]), format_double(curve.values[i])});
  }
  return t;
}

CsvTable convergence_csv(const ConvergenceTable& table) {
  CsvTable t;
  t.header = {"k", "l_k", "dim_E_k", "gap"};
  for (const auto& row : table.rows) {
    if (row.error) t.comments.push_back("k=" + std::to_string(row.k) + " " + *row.error);
    t.rows.push_back({std::to_string(row.k), std::to_string(row.l_k), format_double(row.dim_E_k),
                      format_double(row.gap)});
  }
  return t;
}

CsvTable lq_table(const LqCurve& curve) {
  CsvTable t;
  t.comments.push_back(curve.convention + (curve.k == 0 ? "; limit k->infinity" : "; k=" + std::to_string(curve.k)));
  t.header = {"q", "tau"};
  for (std::size_t i = 0; i < curve.qs.size(); ++i) {
    t.rows.push_back({format_double(curve.qs[i]), format_double(curve.taus[i])});
  }
  return t;
}

CsvTable legendre_table(const std::vector<LegendrePoint>& points) {
  CsvTable t;
  t.header = {"alpha", "f", "q_star", "attained"};
  for (const auto& p : points) {
    t.rows.push_back({format_double(p.alpha), format_double(p.f), format_double(p.q_star), p.attained ? "1" : "0"});
  }
  return t;
}

CsvTable histogram_table(const MultifractalHistogram& histogram) {
  CsvTable t;
  t.comments.push_back("k=" + std::to_string(histogram.k) + " l=" + std::to_string(histogram.l) +
                       " total=" + histogram.total.str());
  t.header = {"alpha_lo", "alpha_hi", "alpha", "count", "normalized_log_count", "log_mass"};
  for (const auto& b : histogram.bins) {
    t.rows.push_back({format_double(b.alpha_lo), format_double(b.alpha_hi), format_double(b.alpha), b.count.str(),
                      format_double(b.normalized_log_count), format_double(b.log_mass)});
  }
  return t;
}

CsvTable estimate_table(const Estimate& e) {
  CsvTable t;
  t.comments.push_back("method=" + e.method + " value=" + format_double(e.value, 0));
  if (e.scales.empty()) {
    t.header = {"value", "std_error", "samples"};
    t.rows.push_back({format_double(e.value), format_double(e.std_error), std::to_string(e.samples)});
    return t;
  }
  t.comments.push_back("slope=" + format_double(e.slope, 0) + " intercept=" + format_double(e.intercept, 0) +
                       " residual_norm=" + format_double(e.residual_norm, 0));
  t.header = {"scale", "log_count"};
  for (std::size_t i = 0; i < e.scales.size(); ++i) {
    t.rows.push_back({format_double(e.scales[i]), format_double(e.log_counts[i])});
  }
  return t;
}

}  // namespace carpet
