#include "quasilat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "quasilat/cutproject.hpp"
#include "quasilat/diffraction.hpp"
#include "quasilat/error.hpp"
#include "quasilat/io.hpp"
#include "quasilat/parallel.hpp"
#include "quasilat/pisot.hpp"
#include "quasilat/pointset.hpp"
#include "quasilat/spectral.hpp"

namespace quasilat::cli {
namespace {

using nlohmann::ordered_json;

constexpr const char* kCommands[] = {"generate", "check", "project", "fibers", "density", "spectrum", "bragg", "pisot"};

constexpr const char* kUsage =
    "usage: quasilat <command> [options]\n"
    "\n"
    "commands:\n"
    "  generate   build a patch (silver, lattice, heisenberg-integer, heisenberg-silver, matrix)\n"
    "  check      Delone, Meyer and approximate-group checks on a patch\n"
    "  project    project a patch onto its horizontal factor\n"
    "  fibers     fiber alignment report as CSV\n"
    "  density    twisted fiber density over a T-schedule as CSV\n"
    "  spectrum   densities and central diffraction coefficients over a frequency grid\n"
    "  bragg      (1-eps)-Bragg peak scan as CSV\n"
    "  pisot      Pisot/Salem classification, dilation and tower checks\n"
    "\n"
    "Run 'quasilat <command> --help' for the options of a command.\n"
    "Options may also come from a JSON object given with --config; flags win.\n"
    "QUASILAT_THREADS sets the worker count (default 1, serial).\n";

struct UsageError {
  std::string message;
};

struct Params {
  std::string input;
  std::string output;
  std::string scheme = "silver";
  std::string scheme_file;
  std::string enforce;
  std::string autocorrelation_out;
  std::string tower;
  std::string mode = "abelian";
  std::vector<std::int64_t> poly;
  std::vector<std::int64_t> element;
  std::vector<std::int64_t> dilation;
  std::vector<double> delta;
  std::vector<double> theta;
  double R = 1.0;
  double T = 10.0;
  double Tz = -1.0;
  double S = 1.0;
  double K = 1.0;
  double h = 1e-3;
  double eps = 0.1;
  double threshold = kDefaultGapThreshold;
  double probe_step = 0.05;
  double z_region = -1.0;
  double region_q = -1.0;
  double region_z = -1.0;
  double range = 5.0;
  double hint = std::numeric_limits<double>::quiet_NaN();
  double tol = kRootTolerance;
  double ratio = kDefaultScheduleRatio;
  double t_min = 1.0;
  double dual_window = -1.0;
  double check_radius = std::numeric_limits<double>::infinity();
  bool no_condition_check = false;
  int dim = 1;
  int k = 4;
  int k_max = 2;
  std::int64_t radicand = 2;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

// ---------------------------------------------------------------- options

CLI::Validator sign_check(bool strict) {
  return CLI::Validator(
      [strict](std::string& value) -> std::string {
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        const bool ok = end != value.c_str() && *end == '\0' && (strict ? v > 0 : v >= 0);
        if (ok) return {};
        return "value " + value + (strict ? " must be positive" : " must be nonnegative");
      },
      strict ? "POSITIVE" : "NONNEGATIVE");
}

const CLI::Validator kPositive = sign_check(true);
const CLI::Validator kNonNegative = sign_check(false);

void add_input(CLI::App& app, Params& p) {
  app.add_option("-i,--input", p.input, "Patch JSON file")->required()->check(CLI::ExistingFile);
}

void add_density_options(CLI::App& app, Params& p) {
  app.add_option("--ratio", p.ratio, "Ratio of the geometric T-schedule")
      ->capture_default_str()
      ->check(CLI::Range(1.0 + 1e-9, 1e9));
  app.add_option("--t-min", p.t_min, "Smallest T of the schedule")->capture_default_str()->check(kPositive);
}

void add_scan_options(CLI::App& app, Params& p) {
  app.add_option("--K", p.K, "Frequency box half-width")->capture_default_str()->check(kPositive);
  app.add_option("--h", p.h, "Frequency grid step")->capture_default_str()->check(kPositive);
  app.add_option("--S", p.S, "Radius of the averaged column set")->capture_default_str()->check(kPositive);
  app.add_option("--T", p.T, "Density radius")->capture_default_str()->check(kPositive);
}

void configure(CLI::App& app, const std::string& command, Params& p) {
  app.set_help_flag("--help", "Print this help message and exit");
  app.add_option("-o,--output", p.output, "Output file (stdout when omitted)");
  app.add_option("--threads", p.threads, "Worker count (overrides QUASILAT_THREADS)")->check(kPositive);
  app.add_option("--config", "JSON file with option values");

  if (command == "generate") {
    app.add_option("--scheme", p.scheme, "Patch family")
        ->capture_default_str()
        ->check(CLI::IsMember({"silver", "lattice", "heisenberg-integer", "heisenberg-silver", "matrix"}));
    app.add_option("--R", p.R, "Silver window radius")->capture_default_str()->check(kPositive);
    app.add_option("--T", p.T, "Patch radius (horizontal radius for Heisenberg schemes)")
        ->capture_default_str()
        ->check(kPositive);
    app.add_option("--Tz", p.Tz, "Central radius for Heisenberg schemes (default sized from T and k)")
        ->check(kPositive);
    app.add_option("--dim", p.dim, "Dimension for silver and lattice")->capture_default_str()->check(CLI::Range(1, 8));
    app.add_option("--radicand", p.radicand, "Radicand d of Z[sqrt d]")->capture_default_str()->check(CLI::Range(2, 1000000));
    app.add_option("--scheme-file", p.scheme_file, "Scheme JSON for --scheme matrix")->check(CLI::ExistingFile);
    app.add_option("--k", p.k, "Power k in the symplectic condition")->capture_default_str()->check(CLI::Range(1, 16));
    app.add_option("--check-radius", p.check_radius, "Limit the symplectic condition check to this radius")
        ->check(kPositive);
    app.add_flag("--no-condition-check", p.no_condition_check, "Skip the symplectic condition check");
  } else if (command == "check") {
    p.h = 0.1;
    add_input(app, p);
    app.add_option("--k-max", p.k_max, "Highest Meyer level")->capture_default_str()->check(CLI::Range(0, 6));
    app.add_option("--threshold", p.threshold, "Minimal gap accepted as uniformly discrete")
        ->capture_default_str()
        ->check(kPositive);
    app.add_option("--region-q", p.region_q, "Horizontal radius of the covering region (default min(core, 2))")
        ->check(kNonNegative);
    app.add_option("--region-z", p.region_z, "Central radius of the covering region (default min(core, 2))")
        ->check(kNonNegative);
    app.add_option("--h", p.h, "Covering probe grid step")->capture_default_str()->check(kPositive);
  } else if (command == "project") {
    add_input(app, p);
  } else if (command == "fibers") {
    add_input(app, p);
    app.add_option("--R", p.R, "Covering threshold for essential fibers")->capture_default_str()->check(kPositive);
    app.add_option("--probe-step", p.probe_step, "Covering probe grid step")
        ->capture_default_str()
        ->check(kPositive);
    app.add_option("--z-region", p.z_region, "Central radius of the covering region (default: central core)")
        ->check(kPositive);
    app.add_option("--enforce", p.enforce, "Also write the patch with only essential fibers to this file");
  } else if (command == "density") {
    add_input(app, p);
    app.add_option("--T", p.T, "Final radius of the schedule")->capture_default_str()->check(kPositive);
    app.add_option("--delta", p.delta, "Fiber coordinate (default: identity)")->delimiter(',');
    app.add_option("--theta", p.theta, "Character frequency (default: trivial)")->delimiter(',');
    add_density_options(app, p);
  } else if (command == "spectrum") {
    add_input(app, p);
    add_scan_options(app, p);
    add_density_options(app, p);
  } else if (command == "bragg") {
    add_input(app, p);
    app.add_option("--eps", p.eps, "Peak tolerance eps")->capture_default_str()->check(CLI::Range(1e-12, 1.0 - 1e-12));
    add_scan_options(app, p);
    app.add_option("--dual-window", p.dual_window, "Sub-window for the eps-dual cross-check (<0 auto, 0 off)")
        ->capture_default_str();
    app.add_option("--autocorrelation", p.autocorrelation_out, "Also write the autocorrelation JSON here");
    app.add_option("--range", p.range, "Autocorrelation range")->capture_default_str()->check(kPositive);
  } else if (command == "pisot") {
    app.add_option("--poly", p.poly, "Monic integer polynomial, ascending coefficients")->delimiter(',');
    app.add_option("--element", p.element, "Element a,b of Z[sqrt d]; its minimal polynomial is classified")
        ->delimiter(',')
        ->expected(2);
    app.add_option("--radicand", p.radicand, "Radicand d of Z[sqrt d]")->capture_default_str()->check(CLI::Range(2, 1000000));
    app.add_option("--hint", p.hint, "Approximate value of the designated root");
    app.add_option("--tol", p.tol, "Root tolerance")->capture_default_str()->check(kPositive);
    app.add_option("-i,--input", p.input, "Patch JSON for the dilation check")->check(CLI::ExistingFile);
    app.add_option("--dilation", p.dilation, "Dilation factor a,b (default: --element)")->delimiter(',')->expected(2);
    app.add_option("--mode", p.mode, "Dilation mode")->capture_default_str()->check(CLI::IsMember({"abelian", "stratified"}));
    app.add_option("--tower", p.tower, "JSON {\"blocks\": [matrix, ...]} for the tower spectrum check")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", p.seed, "Seed of the random tower completion")->capture_default_str();
  }
}

// ------------------------------------------------------------------ config

std::string config_value(const ordered_json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_array() || v[i].is_object()) throw UsageError{"config." + key + ": nested values are not allowed"};
      s += (i ? "," : "") + config_value(v[i], key);
    }
    return s;
  }
  throw UsageError{"config." + key + ": unsupported value"};
}

bool mentions(const std::vector<std::string>& args, const CLI::Option* opt) {
  for (const auto& a : args) {
    for (const auto& n : opt->get_lnames()) {
      if (a == "--" + n || a.rfind("--" + n + "=", 0) == 0) return true;
    }
    for (const auto& n : opt->get_snames()) {
      if (a == "-" + n) return true;
    }
  }
  return false;
}

// Expands the JSON config into argument form; options given on the command
// line take precedence.
std::vector<std::string> merge_config(const CLI::App& app, const std::string& command, const std::string& path,
                                      const std::vector<std::string>& args) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    throw UsageError{"config: cannot read " + path};
  }
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw UsageError{std::string("config: ") + e.what()};
  }
  if (!j.is_object()) throw UsageError{"config: expected a JSON object"};
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      if (!value.is_string() || value.get<std::string>() != command) {
        throw UsageError{"config.command: does not match " + command};
      }
      continue;
    }
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    const CLI::Option* opt = name == "config" ? nullptr : app.get_option_no_throw("--" + name);
    if (opt == nullptr) throw UsageError{"config." + key + ": unknown key"};
    if (mentions(args, opt)) continue;
    if (value.is_boolean()) {
      if (opt->get_type_size() != 0) throw UsageError{"config." + key + ": expected a value"};
      if (value.get<bool>()) out.push_back("--" + name);
      continue;
    }
    out.push_back("--" + name);
    out.push_back(config_value(value, key));
  }
  out.insert(out.end(), args.begin(), args.end());
  return out;
}

std::string find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError{"--config: missing file name"};
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

std::vector<std::string> strip_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      ++i;
      continue;
    }
    if (args[i].rfind("--config=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  return out;
}

// ------------------------------------------------------------------ output

void emit(const Params& p, std::ostream& out, const std::string& content) {
  if (p.output.empty()) {
    out << content;
  } else {
    write_file(p.output, content);
  }
}

std::string dump(const ordered_json& j) { return j.dump(1) + "\n"; }

ordered_json number(double v) { return round12(v); }

ordered_json numbers(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(round12(x));
  return a;
}

ordered_json complex_json(std::complex<double> c) { return {{"re", round12(c.real())}, {"im", round12(c.imag())}}; }

ordered_json quads(const std::vector<QuadInt>& v) {
  ordered_json a = ordered_json::array();
  for (const auto& x : v) a.push_back({x.a, x.b, x.d});
  return a;
}

PointPatch load_patch(const std::string& path) { return patch_from_json(read_file(path)); }

std::size_t central_dim(const PointPatch& P) {
  return P.group().dim_z() == 0 ? P.group().dim_q() : P.group().dim_z();
}

bool absolute_case(const PointPatch& P) { return P.group().dim_z() == 0 || P.group().dim_q() == 0; }

// ---------------------------------------------------------------- commands

int cmd_generate(const Params& p, std::ostream& out) {
  PointPatch P;
  const auto dim = static_cast<std::size_t>(p.dim);
  // Central radius for which the symplectic condition fits with room to spare.
  const double tz_default = 4.0 * p.T * p.T * std::pow(2.0, p.k - 1) + 1.0;
  const double Tz = p.Tz > 0 ? p.Tz : tz_default;
  if (p.scheme == "silver") {
    P = generate_model_set(CutProjectScheme::silver(p.R, dim, p.radicand), p.T);
  } else if (p.scheme == "lattice") {
    P = integer_lattice(dim, p.T);
  } else if (p.scheme == "heisenberg-integer") {
    P = heisenberg_integer_lattice(p.T, p.Tz > 0 ? p.Tz : p.T * p.T);
  } else if (p.scheme == "heisenberg-silver") {
    const PointPatch xi = generate_model_set(CutProjectScheme::silver(p.R, 1, p.radicand), Tz);
    const PointPatch delta = generate_model_set(CutProjectScheme::silver(p.R, 2, p.radicand), p.T);
    SymplecticOptions opts;
    opts.check_condition = !p.no_condition_check;
    opts.check_radius = p.check_radius;
    P = symplectic_product(xi, delta, CentralExtensionGroup::heisenberg(), p.k, opts).patch;
  } else {
    if (p.scheme_file.empty()) throw UsageError{"--scheme-file: required for --scheme matrix"};
    P = generate_model_set(scheme_from_json(read_file(p.scheme_file)), p.T);
  }
  emit(p, out, patch_to_json(P));
  return kExitOk;
}

int cmd_check(const Params& p, std::ostream& out) {
  const PointPatch P = load_patch(p.input);
  ordered_json j;
  j["points"] = P.size();
  j["symmetric"] = is_symmetric(P);
  j["contains_identity"] = contains_identity(P);
  j["min_gap"] = number(min_gap(P));

  const Radii region{p.region_q >= 0 ? p.region_q : std::min(P.core().q, 2.0),
                     p.region_z >= 0 ? p.region_z : std::min(P.core().z, 2.0)};
  const CoveringEstimate cov = covering_radius(P, region, p.h);
  j["covering"] = {{"region_q", number(region.q)}, {"region_z", number(region.z)}, {"value", number(cov.value)},
                   {"grid_max", number(cov.grid_max)}, {"slack", number(cov.slack)}, {"probes", cov.probes}};

  const MeyerReport meyer = check_meyerian(P, p.k_max, p.threshold);
  ordered_json levels = ordered_json::array();
  for (const auto& l : meyer.levels) {
    levels.push_back({{"k", l.k}, {"min_gap", number(l.min_gap)}, {"size", l.size}, {"core_size", l.core_size},
                      {"pass", l.pass}});
  }
  j["meyer"] = {{"pass", meyer.pass}, {"threshold", number(meyer.threshold)}, {"levels", std::move(levels)}};

  const CoverReport cover = approximate_group_cover(P);
  ordered_json translators = ordered_json::array();
  if (!cover.exact_translators.empty()) {
    for (const auto& t : cover.exact_translators) translators.push_back({{"z", quads(t.z)}, {"q", quads(t.q)}});
  } else {
    for (const auto& t : cover.translators) translators.push_back({{"z", numbers(t.z)}, {"q", numbers(t.q)}});
  }
  j["approximate_group"] = {{"translators", std::move(translators)},
                            {"covered", cover.covered},
                            {"max_translator_gauge", number(cover.max_translator_gauge)}};
  emit(p, out, dump(j));
  return kExitOk;
}

int cmd_project(const Params& p, std::ostream& out) {
  emit(p, out, patch_to_json(project(load_patch(p.input))));
  return kExitOk;
}

int cmd_fibers(const Params& p, std::ostream& out) {
  const PointPatch P = load_patch(p.input);
  AlignmentOptions opts;
  opts.probe_step = p.probe_step;
  opts.z_region = p.z_region;
  emit(p, out, fibers_csv(alignment_report(P, p.R, opts)));
  if (!p.enforce.empty()) write_file(p.enforce, patch_to_json(enforce_uniform_fibers(P, p.R, opts)));
  return kExitOk;
}

PointPatch identity_fiber(const PointPatch& P, std::vector<double> delta) {
  if (absolute_case(P)) {
    if (!delta.empty()) throw UsageError{"--delta: the patch has no fibers"};
    return P;
  }
  if (delta.empty()) delta.assign(P.group().dim_q(), 0.0);
  if (delta.size() != P.group().dim_q()) {
    throw UsageError{"--delta: expected " + std::to_string(P.group().dim_q()) + " coordinates"};
  }
  return fiber(P, delta);
}

Character make_character(const PointPatch& P, std::vector<double> theta) {
  const std::size_t d = central_dim(P);
  if (theta.empty()) theta.assign(d, 0.0);
  if (theta.size() != d) throw UsageError{"--theta: expected " + std::to_string(d) + " coordinates"};
  return Character{std::move(theta)};
}

int cmd_density(const Params& p, std::ostream& out) {
  const PointPatch P = load_patch(p.input);
  const PointPatch F = identity_fiber(P, p.delta);
  const Character xi = make_character(P, p.theta);
  if (p.t_min > p.T) throw UsageError{"--t-min: must not exceed T"};
  const auto schedule = geometric_schedule(p.T, p.t_min, p.ratio);
  const DensityEstimate est = twisted_density(F, xi, schedule);
  std::vector<SpectrumRow> rows;
  for (const auto& [t, v] : est.partials) rows.push_back({xi.theta, v, std::norm(v), t, est.cauchy_tail});
  emit(p, out, spectrum_csv(rows));
  return kExitOk;
}

std::vector<std::vector<double>> frequency_grid(std::size_t dim, const ScanSpec& scan) {
  if (dim == 0 || dim > 2) throw UsageError{"--input: frequency scans need central dimension 1 or 2"};
  const auto axis = scan_axis(scan);
  std::vector<std::vector<double>> grid;
  if (dim == 1) {
    for (double t : axis) grid.push_back({t});
  } else {
    for (double a : axis) {
      for (double b : axis) grid.push_back({a, b});
    }
  }
  return grid;
}

int cmd_spectrum(const Params& p, std::ostream& out) {
  const PointPatch P = load_patch(p.input);
  const PointPatch F = identity_fiber(P, {});
  const ScanSpec scan{p.K, p.h};
  const auto grid = frequency_grid(central_dim(P), scan);
  if (p.t_min > p.T) throw UsageError{"--t-min: must not exceed T"};
  const auto schedule = geometric_schedule(p.T, p.t_min, p.ratio);
  const PalmEvaluator palm(P, p.S, p.T);
  std::vector<SpectrumRow> rows(grid.size());
  parallel_chunks(grid.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Character xi{grid[i]};
      const DensityEstimate est = twisted_density(F, xi, schedule);
      rows[i] = {grid[i], est.value, palm.coefficient(xi), est.t_final, est.cauchy_tail};
    }
  });
  emit(p, out, spectrum_csv(rows));
  return kExitOk;
}

int cmd_bragg(const Params& p, std::ostream& out) {
  const PointPatch P = load_patch(p.input);
  BraggOptions opts;
  opts.dual_window = p.dual_window;
  const BraggResult result = bragg_scan(P, p.eps, ScanSpec{p.K, p.h}, p.S, p.T, opts);
  emit(p, out, bragg_csv(result));
  if (!p.autocorrelation_out.empty()) {
    write_file(p.autocorrelation_out, measure_to_json(autocorrelation(P, p.T, p.range)));
  }
  return kExitOk;
}

ordered_json classification_json(const IntPolynomial& poly, const SpectrumClassification& c) {
  return ordered_json::parse(classification_to_json(poly, c));
}

std::vector<Matrix> read_blocks(const std::string& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(path));
  } catch (const std::exception& e) {
    throw UsageError{std::string("--tower: ") + e.what()};
  }
  if (!j.is_object() || !j.contains("blocks") || j.size() != 1 || !j["blocks"].is_array()) {
    throw UsageError{"--tower: expected {\"blocks\": [matrix, ...]}"};
  }
  std::vector<Matrix> blocks;
  for (std::size_t b = 0; b < j["blocks"].size(); ++b) {
    const auto& m = j["blocks"][b];
    const std::string field = "--tower: blocks[" + std::to_string(b) + "]";
    if (!m.is_array() || m.empty()) throw UsageError{field + " must be a nonempty square matrix"};
    const std::size_t n = m.size();
    std::vector<double> data;
    for (const auto& row : m) {
      if (!row.is_array() || row.size() != n) throw UsageError{field + " must be square"};
      for (const auto& x : row) {
        if (!x.is_number()) throw UsageError{field + " entries must be numbers"};
        data.push_back(x.get<double>());
      }
    }
    blocks.push_back(Matrix::square(n, std::move(data)));
  }
  return blocks;
}

ordered_json tower_json(const TowerReport& r) {
  ordered_json spectrum = ordered_json::array();
  for (const auto& l : r.spectrum) spectrum.push_back(complex_json(l));
  ordered_json eigen = ordered_json::array();
  for (const auto& e : r.eigen) {
    ordered_json o = complex_json(e.value);
    o["min_poly"] = e.min_poly ? ordered_json(e.min_poly->coeffs) : ordered_json(nullptr);
    o["kind"] = e.classification ? ordered_json(to_string(e.classification->kind)) : ordered_json(nullptr);
    o["rational_non_integer"] = e.rational_non_integer;
    o["residual"] = number(e.residual);
    eigen.push_back(std::move(o));
  }
  ordered_json j;
  j["char_poly"] = numbers(r.char_poly);
  j["block_product"] = numbers(r.block_product);
  j["residual"] = number(r.residual);
  j["factored"] = r.factored;
  j["simple_spectrum"] = r.simple_spectrum;
  j["galois"] = to_string(r.galois);
  j["spectrum"] = std::move(spectrum);
  j["eigenvalues"] = std::move(eigen);
  return j;
}

int cmd_pisot(const Params& p, std::ostream& out) {
  if (p.poly.empty() && p.element.empty() && p.tower.empty()) {
    throw UsageError{"pisot: one of --poly, --element or --tower is required"};
  }
  if (!p.poly.empty() && !p.element.empty()) throw UsageError{"--poly: conflicts with --element"};
  ordered_json j;
  std::optional<QuadInt> element;
  if (!p.element.empty()) element = QuadInt{p.element[0], p.element[1], p.radicand};
  if (element || !p.poly.empty()) {
    const IntPolynomial poly = element ? min_poly_quadratic(*element) : IntPolynomial{p.poly};
    double hint = p.hint;
    if (std::isnan(hint)) {
      if (!element) throw UsageError{"--hint: required with --poly"};
      hint = element->embed();
    }
    j["classification"] = classification_json(poly, classify_pisot_salem(poly, hint, p.tol));
  }
  if (!p.input.empty()) {
    if (p.dilation.empty() && !element) throw UsageError{"--dilation: required for the dilation check"};
    const QuadInt t = p.dilation.empty() ? *element : QuadInt{p.dilation[0], p.dilation[1], p.radicand};
    const DilationReport d = dilation_invariance(load_patch(p.input), t,
                                                 p.mode == "abelian" ? DilationMode::kAbelian
                                                                     : DilationMode::kStratified2);
    ordered_json o;
    o["t"] = {t.a, t.b, t.d};
    o["mode"] = p.mode;
    o["holds"] = d.holds;
    o["checked"] = d.checked;
    o["tested_core_q"] = number(d.tested_core.q);
    o["tested_core_z"] = number(d.tested_core.z);
    o["witness"] = d.witness ? ordered_json{{"z", quads(d.witness->z)}, {"q", quads(d.witness->q)}}
                             : ordered_json(nullptr);
    j["dilation"] = std::move(o);
  }
  if (!p.tower.empty()) j["tower"] = tower_json(tower_spectrum_check(read_blocks(p.tower), p.seed));
  emit(p, out, dump(j));
  return kExitOk;
}

int dispatch(const std::string& command, const Params& p, std::ostream& out) {
  if (command == "generate") return cmd_generate(p, out);
  if (command == "check") return cmd_check(p, out);
  if (command == "project") return cmd_project(p, out);
  if (command == "fibers") return cmd_fibers(p, out);
  if (command == "density") return cmd_density(p, out);
  if (command == "spectrum") return cmd_spectrum(p, out);
  if (command == "bragg") return cmd_bragg(p, out);
  return cmd_pisot(p, out);
}

bool is_command(const std::string& s) {
  return std::any_of(std::begin(kCommands), std::end(kCommands), [&](const char* c) { return s == c; });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << kUsage;
    return kExitUsage;
  }
  if (args[0] == "-h" || args[0] == "--help") {
    out << kUsage;
    return kExitOk;
  }
  std::string command = args[0];
  std::vector<std::string> rest(args.begin() + 1, args.end());
  bool missing_command = false;
  if (!is_command(command)) {
    if (command.empty() || command[0] != '-') {
      err << "unknown command: " << command << "\n" << kUsage;
      return kExitUsage;
    }
    // Options without a command are still validated so that bad values are named.
    missing_command = true;
    rest = args;
    command = "generate";
  }

  Params p;
  CLI::App app("quasilat " + command, "quasilat " + command);
  configure(app, command, p);
  try {
    const std::string config = find_config(rest);
    std::vector<std::string> argv = strip_config(rest);
    if (!config.empty()) argv = merge_config(app, command, config, argv);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n";
    return kExitUsage;
  }
  if (missing_command) {
    err << "unknown command: missing command\n" << kUsage;
    return kExitUsage;
  }

  try {
    if (p.threads > 0) set_thread_count(p.threads);
    return dispatch(command, p, out);
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.kind() == ErrorKind::kParse ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace quasilat::cli
