#include "pml/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pml/asymptotics.hpp"

namespace pml {

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::normal_y:
      return "normal_y";
    case SourceKind::normal_xy:
      return "normal_xy";
    case SourceKind::uniform_y:
      return "uniform_y";
    case SourceKind::point_mass_x0:
      return "point_mass_x0";
  }
  return "normal_y";
}

SourceKind parse_source(std::string_view name) {
  if (name == "normal_y") return SourceKind::normal_y;
  if (name == "normal_xy") return SourceKind::normal_xy;
  if (name == "uniform_y") return SourceKind::uniform_y;
  if (name == "point_mass_x0") return SourceKind::point_mass_x0;
  throw std::invalid_argument("unknown source distribution '" + std::string(name) + "'");
}

void SourceDistribution::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be positive");
  if (!(sigma_x >= 0.0) || !std::isfinite(sigma_x)) throw std::invalid_argument("sigma_x must be >= 0");
  if (!(correlation > -1.0 && correlation < 1.0)) throw std::invalid_argument("correlation must lie in (-1, 1)");
}

RateFunction build_rate(const CurveSpec& spec) {
  if (!spec.has_rate()) throw std::invalid_argument("curve family '" + spec.family + "' has no rate function");
  const Family family = parse_family(spec.family);
  return make_rate(family, spec.gamma, spec.b.value_or(default_b(family, spec.gamma)));
}

Curve build_curve(const CurveSpec& spec) {
  if (spec.family == "circle") return Curve::circle(spec.delta, spec.half_range.value_or(std::numbers::pi));
  if (spec.family == "kink") return Curve::kink(spec.half_range.value_or(10.0));
  RateFunction rate = build_rate(spec);
  return spec.simple ? Curve::simple_qcurve(std::move(rate)) : Curve::qcurve(std::move(rate));
}

void ExperimentConfig::validate() const {
  source.validate();
  if (n < 1) throw std::invalid_argument("sample size n must be >= 1");
  if (reps < 1) throw std::invalid_argument("replicate count must be >= 1");
  if (gaussian_shortcut.value_or(false) && !source.is_normal())
    throw std::invalid_argument("the Gaussian shortcut applies to normal sources only");
}

bool ExperimentConfig::uses_gaussian_shortcut() const { return gaussian_shortcut.value_or(source.is_normal()); }

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PML_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<int>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::mt19937_64 replicate_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

PlanarPoint draw_sample_mean(const SourceDistribution& source, std::int64_t n, std::mt19937_64& stream,
                             bool gaussian_shortcut) {
  if (n < 1) throw std::invalid_argument("sample size n must be >= 1");
  const double count = static_cast<double>(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double rho = source.correlation;
  const double rho_c = std::sqrt(1.0 - rho * rho);

  if (gaussian_shortcut) {
    if (!source.is_normal()) throw std::invalid_argument("the Gaussian shortcut applies to normal sources only");
    const double scale = 1.0 / std::sqrt(count);
    const double u = normal(stream);
    if (source.kind == SourceKind::normal_y) return {0.0, scale * source.sigma * u};
    const double v = normal(stream);
    return {scale * source.sigma_x * (rho * u + rho_c * v), scale * source.sigma * u};
  }

  double sx = 0.0;
  double sy = 0.0;
  switch (source.kind) {
    case SourceKind::normal_y:
      for (std::int64_t i = 0; i < n; ++i) sy += source.sigma * normal(stream);
      break;
    case SourceKind::normal_xy:
      for (std::int64_t i = 0; i < n; ++i) {
        const double u = normal(stream);
        const double v = normal(stream);
        sy += source.sigma * u;
        sx += source.sigma_x * (rho * u + rho_c * v);
      }
      break;
    case SourceKind::uniform_y: {
      const double half_width = source.sigma * std::sqrt(3.0);
      std::uniform_real_distribution<double> uniform(-half_width, half_width);
      for (std::int64_t i = 0; i < n; ++i) sy += uniform(stream);
      break;
    }
    case SourceKind::point_mass_x0: {
      std::bernoulli_distribution coin(0.5);
      for (std::int64_t i = 0; i < n; ++i) sy += coin(stream) ? source.sigma : -source.sigma;
      break;
    }
  }
  return {sx / count, sy / count};
}

EmpiricalSummary::EmpiricalSummary(std::vector<double> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
}

double EmpiricalSummary::prob_leq(double threshold) const {
  if (values_.empty()) throw std::logic_error("empty summary");
  const auto it = std::upper_bound(values_.begin(), values_.end(), threshold);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalSummary::prob_geq(double threshold) const {
  if (values_.empty()) throw std::logic_error("empty summary");
  const auto it = std::lower_bound(values_.begin(), values_.end(), threshold);
  return static_cast<double>(values_.end() - it) / static_cast<double>(values_.size());
}

double EmpiricalSummary::ks_distance(const std::function<double(double)>& reference_cdf) const {
  if (values_.empty()) throw std::logic_error("empty summary");
  const double count = static_cast<double>(values_.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double F = reference_cdf(values_[i]);
    worst = std::max({worst, static_cast<double>(i + 1) / count - F, F - static_cast<double>(i) / count});
  }
  return worst;
}

double empirical_prob_leq(const EmpiricalSummary& summary, double threshold) { return summary.prob_leq(threshold); }

double ks_distance(const EmpiricalSummary& summary, const std::function<double(double)>& reference_cdf) {
  return summary.ks_distance(reference_cdf);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Projector projector(build_curve(config.curve));
  return run_experiment(config, projector);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Projector& projector) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.gaussian_shortcut = config.uses_gaussian_shortcut();
  const std::int64_t reps = config.reps;
  result.replicates.resize(static_cast<std::size_t>(reps));

  const int workers = static_cast<int>(std::min<std::int64_t>(resolve_threads(config.threads), reps));
  const auto run_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      std::mt19937_64 stream = replicate_stream(config.seed, static_cast<std::uint64_t>(i));
      const PlanarPoint mean = draw_sample_mean(config.source, config.n, stream, result.gaussian_shortcut);
      const ProjectionResult p = projector(mean);
      const double m1_offset = projector.curve().offset(p.t_star).x;
      result.replicates[static_cast<std::size_t>(i)] = {p.t_star, p.point.x, p.point.y, m1_offset, p.multiplicity};
    }
  };

  if (workers <= 1) {
    run_range(0, reps);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::int64_t chunk = (reps + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t begin = w * chunk;
      const std::int64_t end = std::min(reps, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          run_range(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<double> t, m1, m2;
  t.reserve(result.replicates.size());
  m1.reserve(result.replicates.size());
  m2.reserve(result.replicates.size());
  for (const auto& r : result.replicates) {
    t.push_back(r.t_n);
    m1.push_back(r.m1);
    m2.push_back(r.m2);
  }
  result.t_n = EmpiricalSummary(std::move(t));
  result.m1 = EmpiricalSummary(std::move(m1));
  result.m2 = EmpiricalSummary(std::move(m2));
  return result;
}

namespace {

ComparisonRow make_row(std::string statistic, double s, double empirical, double theoretical, double tolerance) {
  ComparisonRow row;
  row.statistic = std::move(statistic);
  row.s = s;
  row.empirical = empirical;
  row.theoretical = theoretical;
  row.abs_diff = std::abs(empirical - theoretical);
  row.pass = row.abs_diff <= tolerance;
  return row;
}

}  // namespace

std::vector<ComparisonRow> check_theorem1(const ExperimentResult& result, std::span<const double> s_values,
                                          const Theorem1Options& options) {
  const ExperimentConfig& cfg = result.config;
  const RateFunction rate = build_rate(cfg.curve);
  const double root_n = std::sqrt(static_cast<double>(cfg.n));
  const double sigma = cfg.source.sigma;

  const auto threshold_for = [&](double s, bool& underflow) {
    if (!(s >= 0.0)) throw std::invalid_argument("Theorem-1 checks need s >= 0");
    const double y = s / root_n;
    if (y > rate.b()) {
      std::ostringstream os;
      os << "s = " << s << " puts s / sqrt(n) = " << y << " beyond b = " << rate.b();
      throw std::invalid_argument(os.str());
    }
    const double thr = rate.f(y);
    underflow = s > 0.0 && thr == 0.0;
    return thr;
  };

  std::vector<ComparisonRow> rows;
  for (double s : s_values) {
    bool underflow = false;
    const double thr = threshold_for(s, underflow);
    const double target = theorem1_limit(s, sigma);
    const double p_t = result.t_n.prob_leq(thr);
    const double p_neg_t = result.t_n.prob_geq(-thr);
    const double p_m2 = result.m2.prob_leq(thr);
    const double p_neg_m2 = result.m2.prob_geq(-thr);
    for (auto [name, p] : {std::pair{"t_n", p_t}, std::pair{"-t_n", p_neg_t}, std::pair{"m2", p_m2},
                           std::pair{"-m2", p_neg_m2}}) {
      ComparisonRow row = make_row(name, s, p, target, options.tolerance);
      if (underflow) {
        row.underflow = true;
        row.pass = false;
      }
      rows.push_back(std::move(row));
    }
  }
  for (double s : options.vanish_s) {
    bool underflow = false;
    const double thr = threshold_for(s, underflow);
    std::size_t far = 0;
    for (const auto& r : result.replicates)
      if (std::abs(r.m1_offset) >= thr) ++far;
    const double p = static_cast<double>(far) / static_cast<double>(result.replicates.size());
    ComparisonRow row = make_row("|m1-1|>=f", s, p, 0.0, options.vanish_tolerance);
    if (underflow) {
      row.underflow = true;
      row.pass = false;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ComparisonRow> check_theorem1(const ExperimentConfig& config, std::span<const double> s_values,
                                          const Theorem1Options& options) {
  return check_theorem1(run_experiment(config), s_values, options);
}

PolyLawCheck check_poly_law(const ExperimentResult& result, std::span<const double> s_values, double tolerance) {
  const ExperimentConfig& cfg = result.config;
  if (cfg.curve.family != "poly" || cfg.curve.simple)
    throw std::invalid_argument("the polynomial limit law needs a poly-family qcurve");
  const double gamma = cfg.curve.gamma;
  const double sigma = cfg.source.sigma;
  const double scale = std::pow(static_cast<double>(cfg.n), 0.5 * gamma);

  std::vector<double> scaled;
  scaled.reserve(result.t_n.size());
  for (double t : result.t_n.values()) scaled.push_back(scale * t);
  const EmpiricalSummary summary(std::move(scaled));

  PolyLawCheck check;
  check.pass = true;
  for (double s : s_values) {
    ComparisonRow row = make_row("n^(gamma/2)*t_n", s, summary.prob_leq(s), poly_limit_cdf(s, gamma, sigma),
                                 tolerance);
    check.pass = check.pass && row.pass;
    check.rows.push_back(std::move(row));
  }
  check.ks = summary.ks_distance([&](double s) { return poly_limit_cdf(s, gamma, sigma); });
  check.pass = check.pass && check.ks <= tolerance;
  return check;
}

ComparisonRow check_sticky(const ExperimentResult& result, double min_fraction) {
  std::size_t stuck = 0;
  for (const auto& r : result.replicates)
    if (r.m1 == 1.0 && r.m2 == 0.0) ++stuck;
  const double fraction = static_cast<double>(stuck) / static_cast<double>(result.replicates.size());
  ComparisonRow row = make_row("m_n==(1,0)", 0.0, fraction, 1.0, 1.0 - min_fraction);
  row.pass = fraction >= min_fraction;
  return row;
}

EmpiricalSummary rate_scale_summary(const ExperimentResult& result, const Curve& curve) {
  const double root_n = std::sqrt(static_cast<double>(result.config.n));
  std::vector<double> values;
  values.reserve(result.replicates.size());
  for (const auto& r : result.replicates) values.push_back(root_n * curve.signed_rate(r.t_n));
  return EmpiricalSummary(std::move(values));
}

}  // namespace pml
