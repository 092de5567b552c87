#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "carpet/carpet.hpp"
#include "carpet/dimensions.hpp"
#include "carpet/errors.hpp"
#include "carpet/io.hpp"
#include "carpet/measure.hpp"
#include "carpet/numerics.hpp"
#include "carpet/subsystem.hpp"

namespace carpet::cli {

namespace {

using Json = nlohmann::json;

constexpr int kTablePrecision = 12;

struct Options {
  bool json = false;
  unsigned threads = 1;
  std::string spec_path;

  // spectrum
  std::string kind = "assouad";
  int steps = 200;

  // measure selection
  bool mcmullen = false;

  // subsystem
  std::vector<std::int64_t> k_list = {10, 100, 1000, 10000};
  double epsilon = 0.0;

  // estimate
  int depth = 10;
  std::vector<int> scales = {2, 3, 4, 5, 6};
  std::int64_t k = 1000;
  std::size_t samples = 10000;
  unsigned long long seed = kDefaultSeed;
  double q_min = -10.0;
  double q_max = 10.0;
  double q_step = 0.05;
  bool limit = false;
  bool legendre = false;
  double alpha_min = 0.0;
  double alpha_max = 3.0;
  double alpha_step = 0.01;
  double angle = std::numbers::pi / 4;
  int bins = 10;

  // render
  bool render_measure = false;
  std::uint64_t ppu = 216;
  std::string out_path;
};

Json cell_to_json(const std::string& cell) {
  std::int64_t i = 0;
  auto [ip, iec] = std::from_chars(cell.data(), cell.data() + cell.size(), i);
  if (iec == std::errc() && ip == cell.data() + cell.size()) return i;
  double d = 0.0;
  auto [dp, dec] = std::from_chars(cell.data(), cell.data() + cell.size(), d);
  if (dec == std::errc() && dp == cell.data() + cell.size() && std::isfinite(d)) return d;
  if (cell == "nan" || cell == "inf" || cell == "-inf") return nullptr;
  return cell;
}

Json table_to_json(const CsvTable& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = Json::array();
    for (const auto& cell : row) r.push_back(cell_to_json(cell));
    rows.push_back(std::move(r));
  }
  return Json{{"comments", table.comments}, {"columns", table.header}, {"rows", std::move(rows)}};
}

void emit_table(const Options& o, const CsvTable& table, std::ostream& out) {
  if (o.json) {
    out << table_to_json(table).dump(2) << '\n';
  } else {
    out << write_csv(table);
  }
}

// Aligned "name value" lines for small reports.
void emit_pairs(const Options& o, const std::vector<std::pair<std::string, Json>>& pairs, std::ostream& out) {
  if (o.json) {
    Json doc = Json::object();
    for (const auto& [key, value] : pairs) doc[key] = value;
    out << doc.dump(2) << '\n';
    return;
  }
  std::size_t width = 0;
  for (const auto& [key, value] : pairs) width = std::max(width, key.size());
  for (const auto& [key, value] : pairs) {
    out << key << std::string(width - key.size() + 2, ' ');
    if (value.is_number_float()) {
      out << format_double(value.get<double>(), kTablePrecision);
    } else if (value.is_string()) {
      out << value.get<std::string>();
    } else {
      out << value.dump();
    }
    out << '\n';
  }
}

SelfAffineMeasure pick_measure(const Options& o, const ParsedSpec& parsed) {
  if (o.mcmullen) return mcmullen_weights(parsed.spec);
  if (parsed.measure) return *parsed.measure;
  return uniform_measure(parsed.spec);
}

SpectrumKind parse_kind(const std::string& kind) {
  return kind == "lower" ? SpectrumKind::lower : SpectrumKind::assouad;
}

int cmd_dims(const Options& o, std::ostream& out) {
  const auto parsed = read_spec_file(o.spec_path);
  const auto profile = column_profile(parsed.spec);
  const auto r = dimension_report(profile, parsed.spec.m(), parsed.spec.n());
  emit_pairs(o,
             {{"lower", r.lower},
              {"hausdorff", r.hausdorff},
              {"box", r.box},
              {"packing", r.packing},
              {"assouad", r.assouad},
              {"modified_lower", modified_lower_dimension(profile, parsed.spec.m(), parsed.spec.n())},
              {"uniform_fibres", is_uniform_fibres(profile)}},
             out);
  return 0;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  const auto parsed = read_spec_file(o.spec_path);
  const auto curve =
      spectrum_curve(column_profile(parsed.spec), parsed.spec.m(), parsed.spec.n(), parse_kind(o.kind), o.steps);
  emit_table(o, spectrum_table(curve), out);
  return 0;
}

int cmd_measure_dim(const Options& o, std::ostream& out) {
  const auto parsed = read_spec_file(o.spec_path);
  const auto measure = pick_measure(o, parsed);
  const auto h = entropies(measure);
  emit_pairs(o,
             {{"weights", o.mcmullen ? "mcmullen" : (parsed.measure ? "file" : "uniform")},
              {"h_mu", h.h_mu},
              {"h_pi_mu", h.h_pi_mu},
              {"dimension", ly_dimension(measure)}},
             out);
  return 0;
}

int cmd_subsystem(const Options& o, std::ostream& out) {
  const auto parsed = read_spec_file(o.spec_path);
  // McMullen weights unless the file supplies its own and --mcmullen is not forced.
  const auto measure = (parsed.measure && !o.mcmullen) ? *parsed.measure : mcmullen_weights(parsed.spec);
  const auto table = convergence_table(measure, o.k_list, o.epsilon > 0 ? std::optional(o.epsilon) : std::nullopt);
  auto csv = convergence_csv(table);
  csv.comments.insert(csv.comments.begin(), "dim_H=" + format_double(table.dim_h, 0));
  if (table.first_k_below) {
    csv.comments.push_back("first k with gap < " + format_double(o.epsilon, 0) + ": " +
                           std::to_string(*table.first_k_below));
  }
  emit_table(o, csv, out);
  return 0;
}

int cmd_estimate(const std::string& which, const Options& o, std::ostream& out) {
  const auto parsed = read_spec_file(o.spec_path);
  if (which == "box") {
    emit_table(o, estimate_table(box_dimension_estimate(parsed.spec, o.depth, o.scales)), out);
  } else if (which == "local-dim") {
    if (o.k < 1) throw DepthError("local dimension depth k must be at least 1 (got " + std::to_string(o.k) + ")");
    const auto measure = pick_measure(o, parsed);
    auto table = estimate_table(
        local_dimension_estimate(measure, static_cast<int>(o.k), o.samples, o.seed, o.threads));
    table.comments.push_back("seed=" + std::to_string(o.seed) + " k=" + std::to_string(o.k) +
                             " expectation=" + format_double(local_dimension_expectation(measure, static_cast<int>(o.k)), 0));
    emit_table(o, table, out);
  } else if (which == "lq") {
    const auto measure = pick_measure(o, parsed);
    const auto qs = q_grid(o.q_min, o.q_max, o.q_step);
    if (!o.limit && o.k < 1) throw DepthError("moment-sum depth k must be at least 1 (got " + std::to_string(o.k) + ")");
    const auto curve = o.limit ? lq_spectrum_limit(measure, qs) : lq_spectrum(measure, qs, o.k);
    if (o.legendre) {
      emit_table(o, legendre_table(legendre_transform(curve, q_grid(o.alpha_min, o.alpha_max, o.alpha_step))), out);
    } else {
      emit_table(o, lq_table(curve), out);
    }
  } else if (which == "histogram") {
    const auto measure = pick_measure(o, parsed);
    emit_table(o, histogram_table(coarse_multifractal_histogram(measure, o.k, o.bins)), out);
  } else if (which == "projection") {
    auto table = estimate_table(projection_box_estimate(parsed.spec, o.angle, o.depth, o.scales));
    table.comments.push_back("diagnostic only: box-counting slope of the projected cylinders");
    emit_table(o, table, out);
  }
  return 0;
}

int cmd_render(const Options& o, std::ostream& out, std::ostream& err) {
  const auto parsed = read_spec_file(o.spec_path);
  if (!resolution_aligned(parsed.spec, o.depth, o.ppu)) {
    err << "warning: " << o.ppu << " pixels per unit is not a multiple of lcm(m,n)^" << o.depth
        << "; cylinder edges will not align with pixel edges\n";
  }
  const auto image = o.render_measure ? render_measure(pick_measure(o, parsed), o.depth, o.ppu)
                                      : render_set(parsed.spec, o.depth, o.ppu);
  write_pgm(image, o.out_path);
  emit_pairs(o, {{"wrote", o.out_path}, {"width", image.width}, {"height", image.height}}, out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Bedford-McMullen carpet dimensions, measures and numerical oracles", "carpet"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_flag("--json", o.json, "Emit a JSON document instead of tables/CSV");
  app.add_option("--threads", o.threads, "Worker threads for sampling kernels")->check(CLI::Range(1u, 256u));

  auto spec_arg = [&](CLI::App* sub) { sub->add_option("spec", o.spec_path, "Carpet spec JSON file")->required(); };

  auto* dims = app.add_subcommand("dims", "Closed-form dimensions of the carpet");
  spec_arg(dims);

  auto* spectrum = app.add_subcommand("spectrum", "Assouad or lower spectrum as CSV");
  spectrum->add_option("--kind", o.kind, "assouad or lower")->check(CLI::IsMember({"assouad", "lower"}));
  spectrum->add_option("--steps", o.steps, "Number of uniform theta grid points");
  spec_arg(spectrum);

  auto* measure_dim = app.add_subcommand("measure-dim", "Entropies and dimension of a self-affine measure");
  measure_dim->add_flag("--mcmullen", o.mcmullen, "Use the McMullen weights");
  spec_arg(measure_dim);

  auto* subsystem = app.add_subcommand("subsystem", "Uniform-fibre subsystem convergence table as CSV");
  subsystem->add_option("--k-list", o.k_list, "Frequency parameters k")->delimiter(',');
  subsystem->add_option("--epsilon", o.epsilon, "Report the first k with gap below epsilon");
  subsystem->add_flag("--mcmullen", o.mcmullen, "Ignore file weights and use the McMullen weights");
  spec_arg(subsystem);

  auto* estimate = app.add_subcommand("estimate", "Numerical oracles");
  estimate->require_subcommand(1);
  std::string which;
  auto add_measure_flags = [&](CLI::App* sub) {
    sub->add_flag("--mcmullen", o.mcmullen, "Use the McMullen weights");
  };
  auto* est_box = estimate->add_subcommand("box", "Pixel box-counting regression");
  est_box->add_option("--depth", o.depth, "Cylinder depth j");
  est_box->add_option("--scales", o.scales, "Scale exponents k (r = n^-k)")->delimiter(',');
  auto* est_local = estimate->add_subcommand("local-dim", "Monte Carlo local dimension");
  est_local->add_option("--k", o.k, "Depth k (r = n^-k)");
  est_local->add_option("--samples", o.samples, "Number of sampled points");
  est_local->add_option("--seed", o.seed, "Base RNG seed");
  add_measure_flags(est_local);
  auto* est_lq = estimate->add_subcommand("lq", "L^q spectrum from exact moment sums");
  est_lq->add_option("--k", o.k, "Depth k");
  est_lq->add_option("--q-min", o.q_min);
  est_lq->add_option("--q-max", o.q_max);
  est_lq->add_option("--q-step", o.q_step);
  est_lq->add_flag("--limit", o.limit, "Evaluate the k -> infinity limit");
  est_lq->add_flag("--legendre", o.legendre, "Emit the Legendre transform instead of tau");
  est_lq->add_option("--alpha-min", o.alpha_min);
  est_lq->add_option("--alpha-max", o.alpha_max);
  est_lq->add_option("--alpha-step", o.alpha_step);
  add_measure_flags(est_lq);
  auto* est_hist = estimate->add_subcommand("histogram", "Coarse multifractal histogram");
  est_hist->add_option("--k", o.k, "Depth k");
  est_hist->add_option("--bins", o.bins, "Number of alpha bins");
  add_measure_flags(est_hist);
  auto* est_proj = estimate->add_subcommand("projection", "Projection box-counting diagnostic");
  est_proj->add_option("--angle", o.angle, "Line angle in radians");
  est_proj->add_option("--depth", o.depth, "Cylinder depth j");
  est_proj->add_option("--scales", o.scales, "Scale exponents k (r = n^-k)")->delimiter(',');
  for (auto* sub : {est_box, est_local, est_lq, est_hist, est_proj}) {
    spec_arg(sub);
    sub->callback([&which, sub] { which = sub->get_name(); });
  }

  auto* render = app.add_subcommand("render", "Render the carpet or a measure heatmap as binary PGM");
  render->add_flag("--measure", o.render_measure, "Shade by cylinder measure");
  render->add_flag("--mcmullen", o.mcmullen, "Use the McMullen weights for --measure");
  render->add_option("--depth", o.depth, "Cylinder depth j")->required();
  render->add_option("--ppu", o.ppu, "Pixels per unit length")->required();
  render->add_option("--out", o.out_path, "Output PGM path")->required();
  spec_arg(render);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*dims) return cmd_dims(o, out);
    if (*spectrum) return cmd_spectrum(o, out);
    if (*measure_dim) return cmd_measure_dim(o, out);
    if (*subsystem) return cmd_subsystem(o, out);
    if (*estimate) return cmd_estimate(which, o, out);
    if (*render) return cmd_render(o, out, err);
  } catch (const Error& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace carpet::cli
