#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "pml/asymptotics.hpp"
#include "pml/curve.hpp"
#include "pml/diagnostics.hpp"
#include "pml/montecarlo.hpp"
#include "pml/projection.hpp"
#include "pml/rate_function.hpp"

namespace pml::cli {

using nlohmann::json;

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

void CsvWriter::meta(std::string_view key, std::string_view value) {
  text_ += "# ";
  text_ += key;
  text_ += ": ";
  text_ += value;
  text_ += '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  columns_ = columns.size();
  row(columns);
  rows_ = 0;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (columns_ != 0 && cells.size() != columns_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
  ++rows_;
}

namespace {

struct CurveFlags {
  std::string family = "poly";
  double gamma = 1.0;
  std::optional<double> b;
  double delta = 0.3;
  std::optional<double> half_range;
  bool simple = false;

  CurveSpec spec() const {
    CurveSpec s;
    s.family = family;
    s.gamma = gamma;
    s.b = b;
    s.delta = delta;
    s.half_range = half_range;
    s.simple = simple;
    return s;
  }
};

struct SampleFlags {
  std::string dist = "normal_y";
  double sigma = 1.0;
  double sigma_x = 0.0;
  double correlation = 0.0;
  std::int64_t n = 400;
  std::int64_t reps = 20000;
  std::uint64_t seed = 1;
  std::string shortcut = "auto";

  ExperimentConfig config(const CurveFlags& curve) const {
    ExperimentConfig cfg;
    cfg.curve = curve.spec();
    cfg.source.kind = parse_source(dist);
    cfg.source.sigma = sigma;
    cfg.source.sigma_x = sigma_x;
    cfg.source.correlation = correlation;
    cfg.n = n;
    cfg.reps = reps;
    cfg.seed = seed;
    if (shortcut == "on") cfg.gaussian_shortcut = true;
    if (shortcut == "off") cfg.gaussian_shortcut = false;
    cfg.threads = 0;
    return cfg;
  }
};

void add_curve_flags(CLI::App* app, CurveFlags& f) {
  app->add_option("--family", f.family, "poly | log | exp | circle | kink")
      ->check(CLI::IsMember({"poly", "log", "exp", "circle", "kink"}));
  app->add_option("--gamma", f.gamma, "Rate exponent (> 0)");
  app->add_option("--b", f.b, "Right end of the rate domain (family default when omitted)");
  app->add_option("--delta", f.delta, "Circle family: radius is 1 + delta");
  app->add_option("--half-range", f.half_range, "Parameter half-range B for circle and kink");
  app->add_flag("--simple", f.simple, "Use the graph-type curve (1 + |t| g(|t|), t)");
}

void add_sample_flags(CLI::App* app, SampleFlags& f) {
  app->add_option("--dist", f.dist, "normal_y | normal_xy | uniform_y | point_mass_x0")
      ->check(CLI::IsMember({"normal_y", "normal_xy", "uniform_y", "point_mass_x0"}));
  app->add_option("--sigma", f.sigma, "Standard deviation of Y");
  app->add_option("--sigma-x", f.sigma_x, "Standard deviation of X (normal_xy)");
  app->add_option("--correlation", f.correlation, "corr(X, Y) (normal_xy)");
  app->add_option("--n", f.n, "Sample size per replicate");
  app->add_option("--reps", f.reps, "Number of replicates");
  app->add_option("--seed", f.seed, "Master seed");
  app->add_option("--shortcut", f.shortcut, "Draw the sample mean of normal sources directly: auto | on | off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
}

void add_list(CLI::App* app, const std::string& name, std::vector<double>& values, const std::string& help) {
  app->add_option(name, values, help)->delimiter(',')->expected(0, CLI::detail::expected_max_vector_size);
}

std::string join(const std::vector<double>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += format_double(values[i]);
  }
  return out;
}

const CLI::App* leaf_of(const CLI::App& app) {
  const CLI::App* current = &app;
  for (;;) {
    const auto chosen = current->get_subcommands();
    if (chosen.empty()) return current;
    current = chosen.front();
  }
}

std::string command_path(const CLI::App& app) {
  std::string path;
  const CLI::App* current = &app;
  for (;;) {
    const auto chosen = current->get_subcommands();
    if (chosen.empty()) return path;
    current = chosen.front();
    if (!path.empty()) path += ' ';
    path += current->get_name();
  }
}

std::vector<std::string> json_to_strings(const json& value) {
  if (value.is_array()) {
    std::vector<std::string> out;
    for (const auto& item : value) {
      const auto part = json_to_strings(item);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (value.is_string()) return {value.get<std::string>()};
  if (value.is_boolean()) return {value.get<bool>() ? "true" : "false"};
  if (value.is_number()) return {value.dump()};
  throw CLI::ValidationError("--config", "unsupported value " + value.dump());
}

// Fills options of the active subcommand that were not given on the command line.
void apply_config(CLI::App* leaf, const std::string& path, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw CLI::ConversionError("--config", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw CLI::ConversionError("--config", "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = leaf->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      err << "config: ignoring key '" << key << "' (no such flag for this command)\n";
      continue;
    }
    if (opt->count() > 0) continue;
    for (const auto& s : json_to_strings(value)) opt->add_result(s);
    opt->run_callback();
  }
}

json resolved_flags(const CLI::App* leaf) {
  json flags = json::object();
  for (const CLI::Option* opt : leaf->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name == "out") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      flags[name] = results.size() == 1 ? json(results.front()) : json(results);
    } else if (!opt->get_default_str().empty()) {
      flags[name] = opt->get_default_str();
    }
  }
  return flags;
}

struct Output {
  std::string path;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  const CLI::App* root = nullptr;
  std::optional<std::uint64_t> seed;

  void emit(const std::string& text, std::string_view kind) const {
    if (path.empty()) {
      *out << text;
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << text;
    file.close();
    if (!file) throw std::runtime_error("failed writing '" + path + "'");

    const CLI::App* leaf = leaf_of(*root);
    json manifest;
    manifest["subcommand"] = command_path(*root);
    manifest["flags"] = resolved_flags(leaf);
    manifest["seed"] = seed ? json(*seed) : json(nullptr);
    manifest["version"] = std::string(kVersion);
    manifest["outputs"] = json::array({{{"path", path}, {"format", kind}, {"sha256", sha256_hex(text)}}});
    std::ofstream m(path + ".manifest.json", std::ios::binary);
    if (!m) throw std::runtime_error("cannot write manifest for '" + path + "'");
    m << manifest.dump(2) << '\n';
    *err << "wrote " << path << " (" << text.size() << " bytes)\n";
  }
};

void curve_meta(CsvWriter& csv, const CurveFlags& f) {
  csv.meta("family", f.family);
  if (f.family == "circle") {
    csv.meta("delta", format_double(f.delta));
  } else if (f.family != "kink") {
    const RateFunction rate = build_rate(f.spec());
    csv.meta("gamma", format_double(f.gamma));
    csv.meta("b", format_double(rate.b()));
    if (f.simple) csv.meta("construction", "simple");
  }
}

void sample_meta(CsvWriter& csv, const ExperimentConfig& cfg) {
  csv.meta("dist", to_string(cfg.source.kind));
  csv.meta("sigma", format_double(cfg.source.sigma));
  if (cfg.source.kind == SourceKind::normal_xy) {
    csv.meta("sigma_x", format_double(cfg.source.sigma_x));
    csv.meta("correlation", format_double(cfg.source.correlation));
  }
  csv.meta("n", std::to_string(cfg.n));
  csv.meta("reps", std::to_string(cfg.reps));
  csv.meta("seed", std::to_string(cfg.seed));
  csv.meta("shortcut", cfg.uses_gaussian_shortcut() ? "on" : "off");
}

void families(const Output& o) {
  CsvWriter csv;
  csv.meta("pml", kVersion);
  csv.header({"family", "f", "g", "default_b"});
  csv.row({"poly", "y^gamma", "x^(1/gamma)", "(0.9*pi/2)^(1/gamma)"});
  csv.row({"log", "(-log y)^(-gamma)", "exp(-x^(-1/gamma))", "exp(-(0.9*pi/2)^(-1/gamma))"});
  csv.row({"exp", "exp(-y^(-gamma))", "(-log x)^(-1/gamma)", "1"});
  csv.row({"circle", "", "", ""});
  csv.row({"kink", "", "", ""});
  o.emit(csv.str(), "csv");
}

void curve_sample(const Output& o, const CurveFlags& f, int points) {
  if (points < 2) throw std::invalid_argument("--points must be >= 2");
  const Curve curve = build_curve(f.spec());
  const double B = curve.half_range();
  CsvWriter csv;
  csv.meta("pml", kVersion);
  csv.meta("command", "curve sample");
  curve_meta(csv, f);
  csv.meta("half_range", format_double(B));
  csv.header({"t", "x", "y", "r", "speed", "arclength"});
  const int last = points - 1;
  for (int k = 0; k < points; ++k) {
    const double t = k == 0 ? -B : (k == last ? B : B * (2.0 * k - last) / last);
    const PlanarPoint p = curve.point(t);
    const double r = curve.is_polar() ? curve.radius(std::abs(t)) : norm(p);
    csv.row({CsvWriter::cell(t), CsvWriter::cell(p.x), CsvWriter::cell(p.y), CsvWriter::cell(r),
             CsvWriter::cell(curve.speed(t)), CsvWriter::cell(curve.arc_length(t))});
  }
  o.emit(csv.str(), "csv");
}

void project_point(const Output& o, const CurveFlags& f, std::optional<double> x, std::optional<double> y) {
  if (!x) throw CLI::RequiredError("--x");
  if (!y) throw CLI::RequiredError("--y");
  const Curve curve = build_curve(f.spec());
  const ProjectionResult p = project(curve, {*x, *y});
  json j;
  j["t"] = p.t_star;
  j["px"] = p.point.x;
  j["py"] = p.point.y;
  j["sq_dist"] = p.sq_dist;
  j["multiplicity"] = p.multiplicity;
  if (p.multiplicity > 1) j["minimizers"] = p.all_minimizers;
  if (p.degenerate) j["degenerate"] = true;
  o.emit(j.dump() + "\n", "json");
}

void simulate(const Output& o, const CurveFlags& f, const SampleFlags& sf) {
  const ExperimentConfig cfg = sf.config(f);
  const ExperimentResult result = run_experiment(cfg);
  CsvWriter csv;
  csv.meta("pml", kVersion);
  csv.meta("command", "simulate");
  curve_meta(csv, f);
  sample_meta(csv, cfg);
  csv.header({"replicate", "t_n", "m1", "m2"});
  for (std::size_t i = 0; i < result.replicates.size(); ++i) {
    const ReplicateRecord& r = result.replicates[i];
    csv.row({std::to_string(i), CsvWriter::cell(r.t_n), CsvWriter::cell(r.m1), CsvWriter::cell(r.m2)});
  }
  o.emit(csv.str(), "csv");
}

bool write_rows(CsvWriter& csv, const std::vector<ComparisonRow>& rows) {
  csv.header({"s", "empirical", "theoretical", "abs_diff", "pass", "statistic"});
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.pass;
    std::string statistic = r.statistic;
    if (r.underflow) statistic += " (threshold underflow)";
    csv.row({CsvWriter::cell(r.s), CsvWriter::cell(r.empirical), CsvWriter::cell(r.theoretical),
             CsvWriter::cell(r.abs_diff), CsvWriter::cell(r.pass), statistic});
  }
  return all;
}

bool verify_theorem1(const Output& o, const CurveFlags& f, const SampleFlags& sf, const std::vector<double>& s,
                     const Theorem1Options& options) {
  if (s.empty()) throw std::invalid_argument("--s needs at least one value");
  const ExperimentConfig cfg = sf.config(f);
  if (!cfg.curve.has_rate()) throw std::invalid_argument("verify theorem1 needs a poly, log or exp curve");
  const ExperimentResult result = run_experiment(cfg);
  const auto rows = check_theorem1(result, s, options);
  CsvWriter csv;
  csv.meta("pml", kVersion);
  csv.meta("anchor", "theorem1");
  curve_meta(csv, f);
  sample_meta(csv, cfg);
  csv.meta("tolerance", format_double(options.tolerance));
  csv.meta("vanish_tolerance", format_double(options.vanish_tolerance));
  const bool pass = write_rows(csv, rows);
  o.emit(csv.str(), "csv");
  return pass;
}

bool verify_cor_i(const Output& o, const CurveFlags& f, const SampleFlags& sf, const std::vector<double>& s,
                  double tolerance) {
  if (s.empty()) throw std::invalid_argument("--s needs at least one value");
  const ExperimentConfig cfg = sf.config(f);
  const ExperimentResult result = run_experiment(cfg);
  const PolyLawCheck check = check_poly_law(result, s, tolerance);
  CsvWriter csv;
  csv.meta("pml", kVersion);
  csv.meta("anchor", "cor-i");
  curve_meta(csv, f);
  sample_meta(csv, cfg);
  csv.meta("tolerance", format_double(tolerance));
  std::vector<ComparisonRow> rows = check.rows;
  ComparisonRow ks;
  ks.statistic = "ks_distance";
  ks.s = std::numeric_limits<double>::quiet_NaN();
  ks.empirical = check.ks;
  ks.theoretical = 0.0;
  ks.abs_diff = check.ks;
  ks.pass = check.ks <= tolerance;
  rows.push_back(ks);
  const bool pass = write_rows(csv, rows);
  o.emit(csv.str(), "csv");
  return pass && check.pass;
}

bool verify_sticky(const Output& o, const CurveFlags& f, const SampleFlags& sf, double min_fraction) {
  const ExperimentConfig cfg = sf.config(f);
  const ExperimentResult result = run_experiment(cfg);
  const ComparisonRow row = check_sticky(result, min_fraction);
  CsvWriter csv;
  csv.meta("pml", kVersion);
  csv.meta("anchor", "sticky");
  curve_meta(csv, f);
  sample_meta(csv, cfg);
  csv.meta("min_fraction", format_double(min_fraction));
  const bool pass = write_rows(csv, {row});
  o.emit(csv.str(), "csv");
  return pass;
}

// Dyadic y = 2^-k, k = 4..60, keeping values above the floor whose perturbed
// argument stays inside [0, b].
std::vector<double> default_ys(const RateFunction& rate, double c, bool prime) {
  std::vector<double> ys;
  for (int k = 4; k <= 60; ++k) {
    const double y = std::ldexp(1.0, -k);
    if (y > rate.b() || y < rate.y_floor()) continue;
    const double fy = rate.f(y);
    if (!(fy > 0.0)) continue;
    const double moved = prime ? y + c * y * fy * (y + fy) : y + c * y * (y + fy);
    if (moved < 0.0 || moved > rate.b()) continue;
    ys.push_back(y);
  }
  return ys;
}

void diagnose_ratio(const Output& o, const CurveFlags& f, double c, std::vector<double> ys,
                    std::optional<double> target, bool prime) {
  const CurveSpec spec = f.spec();
  if (!spec.has_rate()) throw std::invalid_argument("ratio diagnostics need a poly, log or exp rate");
  const RateFunction rate = build_rate(spec);
  if (ys.empty()) ys = default_ys(rate, c, prime);
  if (ys.empty()) throw std::invalid_argument("no admissible y values");
  const double limit = target.value_or(!prime && rate.family() == Family::exp ? std::exp(c) : 1.0);
  const RatioTrace trace = prime ? check_a1_prime(rate, c, ys, limit) : check_a1(rate, c, ys, limit);
  CsvWriter csv;
  csv.meta("pml", kVersion);
  csv.meta("anchor", prime ? "a1prime" : "a1");
  curve_meta(csv, f);
  csv.meta("c", format_double(c));
  csv.meta("target", format_double(trace.target));
  csv.meta("verdict", to_string(trace.verdict));
  csv.header({"y", "ratio", "deviation"});
  for (const auto& [y, ratio] : trace.points)
    csv.row({CsvWriter::cell(y), CsvWriter::cell(ratio), CsvWriter::cell(std::abs(ratio - trace.target))});
  o.emit(csv.str(), "csv");
}

void diagnose_reach(const Output& o, const CurveFlags& f, const std::vector<double>& probes) {
  if (probes.empty()) throw std::invalid_argument("--probe needs at least one value");
  const Curve curve = build_curve(f.spec());
  const auto report = probe_medial_axis(curve, probes);
  CsvWriter csv;
  csv.meta("pml", kVersion);
  csv.meta("anchor", "reach");
  curve_meta(csv, f);
  csv.header({"delta", "px", "py", "multiplicity", "degenerate", "minimizers"});
  for (const auto& r : report) {
    const std::vector<double>& shown = r.degenerate ? std::vector<double>{r.minimizers.front()} : r.minimizers;
    csv.row({CsvWriter::cell(r.delta), CsvWriter::cell(r.probe.x), CsvWriter::cell(r.probe.y),
             CsvWriter::cell(r.multiplicity), CsvWriter::cell(r.degenerate), join(shown, ';')});
  }
  o.emit(csv.str(), "csv");
}

void diagnose_circle(const Output& o, double delta, std::vector<double> ts) {
  if (ts.empty())
    for (int k = 1; k <= 12; ++k) ts.push_back(std::ldexp(1.0, -k));
  const auto rows = circle_g_expansion(delta, ts);
  CsvWriter csv;
  csv.meta("pml", kVersion);
  csv.meta("anchor", "circle");
  csv.meta("delta", format_double(delta));
  csv.header({"t", "g_circle", "linear", "ratio", "rel_err"});
  for (const auto& r : rows)
    csv.row({CsvWriter::cell(r.t), CsvWriter::cell(r.g_circle), CsvWriter::cell(r.linear), CsvWriter::cell(r.ratio),
             CsvWriter::cell(r.rel_err)});
  o.emit(csv.str(), "csv");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projected means on rate-controlling planar curves", "pml"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string config_path;
  std::string out_path;
  CurveFlags curve;
  SampleFlags sample;
  Theorem1Options t1;
  std::vector<double> s_values{0.0, 0.5, 1.0, 2.0};
  double tolerance = 0.03;
  double min_fraction = 0.99;
  int points = 1001;
  std::optional<double> x, y;
  double c = 1.0;
  std::vector<double> ys, probes{0.01}, ts;
  std::optional<double> target;

  const auto common = [&](CLI::App* sub, bool with_out = true) {
    sub->add_option("--config", config_path, "JSON file with flag defaults (flags win)");
    if (with_out) sub->add_option("--out", out_path, "Write to this file (plus <out>.manifest.json)");
  };

  CLI::App* fam = app.add_subcommand("families", "List the built-in rate families");
  common(fam);

  CLI::App* curve_cmd = app.add_subcommand("curve", "Curve export");
  curve_cmd->require_subcommand(1);
  CLI::App* sample_cmd = curve_cmd->add_subcommand("sample", "Sample a curve on a uniform parameter grid");
  add_curve_flags(sample_cmd, curve);
  sample_cmd->add_option("--points", points, "Number of sample nodes");
  common(sample_cmd);

  CLI::App* proj = app.add_subcommand("project", "Nearest point on a curve, as JSON");
  add_curve_flags(proj, curve);
  proj->add_option("--x", x, "x coordinate of the query point");
  proj->add_option("--y", y, "y coordinate of the query point");
  common(proj);

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo replicates of the projected sample mean");
  add_curve_flags(sim, curve);
  add_sample_flags(sim, sample);
  common(sim);

  CLI::App* verify = app.add_subcommand("verify", "Comparison tables against limit laws");
  verify->require_subcommand(1);
  CLI::App* v_t1 = verify->add_subcommand("theorem1", "P(t_n <= f(s/sqrt n)) against Phi(s/sigma)");
  add_curve_flags(v_t1, curve);
  add_sample_flags(v_t1, sample);
  add_list(v_t1, "--s", s_values, "Comma-separated s values");
  v_t1->add_option("--tolerance", t1.tolerance, "Largest admissible |difference|");
  std::vector<double> vanish_s;
  add_list(v_t1, "--vanish-s", vanish_s, "s values for P(|m1 - 1| >= f(s/sqrt n)) (default 1, none for exp)");
  v_t1->add_option("--vanish-tolerance", t1.vanish_tolerance, "Bound for the vanishing rows");
  common(v_t1);

  CLI::App* v_cor = verify->add_subcommand("cor-i", "n^(gamma/2) t_n against the polynomial limit law");
  add_curve_flags(v_cor, curve);
  add_sample_flags(v_cor, sample);
  add_list(v_cor, "--s", s_values, "Comma-separated s values");
  v_cor->add_option("--tolerance", tolerance, "Bound for the CDF differences and the KS distance");
  common(v_cor);

  CLI::App* v_sticky = verify->add_subcommand("sticky", "Fraction of replicates with m_n exactly (1, 0)");
  add_curve_flags(v_sticky, curve);
  add_sample_flags(v_sticky, sample);
  v_sticky->add_option("--min-fraction", min_fraction, "Smallest admissible fraction");
  common(v_sticky);

  CLI::App* diag = app.add_subcommand("diagnose", "Deterministic side checks");
  diag->require_subcommand(1);
  CLI::App* d_a1 = diag->add_subcommand("a1", "Ratios f(y + c y (y + f(y))) / f(y)");
  CLI::App* d_a1p = diag->add_subcommand("a1prime", "Ratios f(y + c y f(y) (y + f(y))) / f(y)");
  for (CLI::App* d : {d_a1, d_a1p}) {
    add_curve_flags(d, curve);
    d->add_option("--c", c, "Perturbation constant");
    add_list(d, "--y", ys, "Strictly decreasing y values (dyadic default)");
    d->add_option("--target", target, "Expected limit (default e^c for exp under a1, else 1)");
    common(d);
  }
  CLI::App* d_reach = diag->add_subcommand("reach", "Multiplicity of the projection of (-delta, 0)");
  add_curve_flags(d_reach, curve);
  add_list(d_reach, "--probe", probes, "Probe offsets delta in (0, 0.5]");
  common(d_reach);
  CLI::App* d_circle = diag->add_subcommand("circle", "Circle dr/dt against delta/(delta+1) t");
  d_circle->add_option("--delta", curve.delta, "Circle radius is 1 + delta");
  add_list(d_circle, "--t", ts, "t values in (0, 0.5] (dyadic default)");
  common(d_circle);

  // CLI11 expects argv order reversed when given a vector
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    CLI::App* leaf = const_cast<CLI::App*>(leaf_of(app));
    if (!config_path.empty()) apply_config(leaf, config_path, err);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  Output o{out_path, &out, &err, &app, std::nullopt};
  try {
    bool pass = true;
    if (fam->parsed()) {
      families(o);
    } else if (sample_cmd->parsed()) {
      curve_sample(o, curve, points);
    } else if (proj->parsed()) {
      project_point(o, curve, x, y);
    } else if (sim->parsed()) {
      o.seed = sample.seed;
      simulate(o, curve, sample);
    } else if (v_t1->parsed()) {
      o.seed = sample.seed;
      t1.vanish_s = vanish_s;
      if (t1.vanish_s.empty() && curve.family != "exp") t1.vanish_s = {1.0};
      pass = verify_theorem1(o, curve, sample, s_values, t1);
    } else if (v_cor->parsed()) {
      o.seed = sample.seed;
      pass = verify_cor_i(o, curve, sample, s_values, tolerance);
    } else if (v_sticky->parsed()) {
      o.seed = sample.seed;
      pass = verify_sticky(o, curve, sample, min_fraction);
    } else if (d_a1->parsed() || d_a1p->parsed()) {
      diagnose_ratio(o, curve, c, ys, target, d_a1p->parsed());
    } else if (d_reach->parsed()) {
      diagnose_reach(o, curve, probes);
    } else if (d_circle->parsed()) {
      diagnose_circle(o, curve.delta, ts);
    }
    if (!pass) {
      err << "check failed: at least one row is outside its tolerance\n";
      return kValidationFailure;
    }
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace pml::cli
