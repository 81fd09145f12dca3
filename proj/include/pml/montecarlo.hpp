#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pml/curve.hpp"
#include "pml/projection.hpp"

namespace pml {

enum class SourceKind { normal_y, normal_xy, uniform_y, point_mass_x0 };

std::string_view to_string(SourceKind kind);
SourceKind parse_source(std::string_view name);

/// Centered law of Z = (X, Y) with Var(Y) = sigma^2.
///
/// normal_y: X = 0, Y ~ N(0, sigma^2). normal_xy: (X, Y) jointly normal with
/// sd(X) = sigma_x and corr(X, Y) = correlation. uniform_y: X = 0, Y uniform
/// on [-sigma sqrt 3, sigma sqrt 3]. point_mass_x0: X = 0, Y = +-sigma with
/// probability 1/2 each.
struct SourceDistribution {
  SourceKind kind = SourceKind::normal_y;
  double sigma = 1.0;
  double sigma_x = 0.0;
  double correlation = 0.0;

  void validate() const;
  bool is_normal() const { return kind == SourceKind::normal_y || kind == SourceKind::normal_xy; }
};

/// Which curve to build. family: poly | log | exp | circle | kink.
struct CurveSpec {
  std::string family = "poly";
  double gamma = 1.0;
  std::optional<double> b;  // rate families; default_b() when empty
  double delta = 0.3;       // circle
  std::optional<double> half_range;  // circle (default pi) and kink (default 10)
  bool simple = false;      // simple_qcurve construction for rate families

  bool has_rate() const { return family == "poly" || family == "log" || family == "exp"; }
};

RateFunction build_rate(const CurveSpec& spec);
Curve build_curve(const CurveSpec& spec);

struct ExperimentConfig {
  CurveSpec curve;
  SourceDistribution source;
  std::int64_t n = 400;
  std::int64_t reps = 20000;
  std::uint64_t seed = 1;
  /// Draw the sample mean from its exact normal law instead of summing n
  /// draws. Defaults to on for normal sources and off otherwise.
  std::optional<bool> gaussian_shortcut;
  /// Worker count; 0 defers to PML_THREADS, then to the hardware.
  int threads = 0;

  void validate() const;
  bool uses_gaussian_shortcut() const;
};

int resolve_threads(int requested);

/// Independent engine for replicate `index`, seeded from (seed, index) only.
std::mt19937_64 replicate_stream(std::uint64_t seed, std::uint64_t index);

PlanarPoint draw_sample_mean(const SourceDistribution& source, std::int64_t n, std::mt19937_64& stream,
                             bool gaussian_shortcut);

/// Sorted sample of a per-replicate statistic.
class EmpiricalSummary {
 public:
  EmpiricalSummary() = default;
  explicit EmpiricalSummary(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<double>& values() const { return values_; }

  /// Fraction of values <= threshold.
  double prob_leq(double threshold) const;
  /// Fraction of values >= threshold.
  double prob_geq(double threshold) const;
  /// Two-sided Kolmogorov-Smirnov distance to a continuous reference CDF.
  double ks_distance(const std::function<double(double)>& reference_cdf) const;

 private:
  std::vector<double> values_;
};

double empirical_prob_leq(const EmpiricalSummary& summary, double threshold);
double ks_distance(const EmpiricalSummary& summary, const std::function<double(double)>& reference_cdf);

struct ReplicateRecord {
  double t_n = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double m1_offset = 0.0;  // m1 - 1 without cancellation
  int multiplicity = 1;
};

struct ExperimentResult {
  ExperimentConfig config;
  bool gaussian_shortcut = false;
  std::vector<ReplicateRecord> replicates;  // ordered by replicate index
  EmpiricalSummary t_n;
  EmpiricalSummary m1;
  EmpiricalSummary m2;
};

ExperimentResult run_experiment(const ExperimentConfig& config);
/// Same, projecting with an existing projector for config.curve.
ExperimentResult run_experiment(const ExperimentConfig& config, const Projector& projector);

/// One line of a comparison table.
struct ComparisonRow {
  std::string statistic;
  double s = 0.0;
  double empirical = 0.0;
  double theoretical = 0.0;
  double abs_diff = 0.0;
  bool pass = false;
  bool underflow = false;  // threshold f(s / sqrt n) underflowed to 0
};

struct Theorem1Options {
  double tolerance = 0.02;
  /// s values at which the vanishing probability P(|m1 - 1| >= f(s/sqrt n))
  /// is tabulated, and the bound it must satisfy.
  std::vector<double> vanish_s = {1.0};
  double vanish_tolerance = 0.01;
};

/// P(stat <= f(s / sqrt n)) against Phi(s / sigma) for stat in t_n, -t_n,
/// m2, -m2, plus the vanishing rows for |m1 - 1|.
std::vector<ComparisonRow> check_theorem1(const ExperimentResult& result, std::span<const double> s_values,
                                          const Theorem1Options& options = {});
std::vector<ComparisonRow> check_theorem1(const ExperimentConfig& config, std::span<const double> s_values,
                                          const Theorem1Options& options = {});

struct PolyLawCheck {
  std::vector<ComparisonRow> rows;
  double ks = 0.0;
  bool pass = false;
};

/// n^(gamma/2) t_n against T with P(T <= s) = Phi(sgn(s) |s|^(1/gamma) / sigma).
PolyLawCheck check_poly_law(const ExperimentResult& result, std::span<const double> s_values,
                            double tolerance = 0.03);

/// Fraction of replicates with m_n exactly (1, 0).
ComparisonRow check_sticky(const ExperimentResult& result, double min_fraction = 0.99);

/// sqrt(n) * signed_rate(t_n): the statistic that is asymptotically
/// N(0, sigma^2) for every curve of the construction.
EmpiricalSummary rate_scale_summary(const ExperimentResult& result, const Curve& curve);

}  // namespace pml
