#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssc/config.hpp"
#include "ssc/controller.hpp"
#include "ssc/pipeline.hpp"

namespace ssc {

/// One measured quantity. pass <=> max_deviation <= tolerance, unless the
/// check is informative, in which case it never fails the report.
struct Check {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool informative = false;
  std::optional<std::size_t> worst_step;
  std::vector<double> per_step;
  std::string note;
};

struct PropositionReport {
  std::string id;
  std::vector<Check> checks;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] nlohmann::json to_json() const;
  void add(Check c);
};

struct TimescaleOptions {
  double identity_tolerance = 1e-10;
  /// When set, also require fg_update_norm(last) <= ratio * fg_update_norm(first).
  std::optional<double> decay_ratio;
};

struct LyapunovOptions {
  double substep_tolerance = 1e-10;
  double trace_tolerance = 1e-9;
  /// Zero-field run: the whole trace must follow V0 * prod (1 - gamma w)^2.
  bool closed_form = false;
};

struct EnergyOptions {
  double substep_tolerance = 1e-10;
  double trace_tolerance = 1e-9;
  /// Zero-field run with uniform weights: E0 * prod (1 - gamma)^2.
  bool closed_form = false;
};

/// Gated foreground velocity equals (1 - alpha(t)) times the ungated one,
/// with alpha recomputed from the recorded time grid.
PropositionReport check_timescale(const TrajectoryRecord<double> &rec, const TimescaleOptions &opts = {});

/// Per-token contraction (1 - gamma w)^2 across every relaxation sub-step.
PropositionReport check_lyapunov(const TrajectoryRecord<double> &rec, const LyapunovOptions &opts = {});

/// Foreground energy dissipation across relaxation sub-steps.
PropositionReport check_energy(const TrajectoryRecord<double> &rec, const EnergyOptions &opts = {});

struct TranslationConfig {
  int grid_h = 32;
  int grid_w = 24;
  int steps = 100;
  std::uint64_t seed = 1;
  double lambda_s = 0.8;
  ForegroundMask mask;
  double tolerance = 1e-10;
};

/// Runs trajectories from x0 and x0 + lambda s with identical controls and
/// compares their per-token offset with its exact evolution. Pass/fail for
/// constant fields; informative for the others.
PropositionReport check_translation(const VelocityField<double> &field, const StyleDirection<double> &dir,
                                    const TranslationConfig &cfg);

struct ConsistencyStats {
  std::optional<double> mean_pairwise_cosine;
  std::optional<double> mean_cosine_with_s;
  std::vector<std::optional<double>> cosine_with_s;
};

/// Cosine statistics of per-page background-token means. A page without
/// background tokens or with a zero mean makes the aggregates undefined.
ConsistencyStats multipage_consistency(const std::vector<LatentState<double>> &finals,
                                       const std::vector<ForegroundMask> &masks,
                                       const Eigen::VectorXd &s);

struct AblationConfig {
  RunConfig base;
  int pages = 7;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double threshold = 4.5;
};

struct ConditionMetrics {
  Condition condition = Condition::full;
  /// Pooled over every measurable text box of every page and seed.
  double wcag_coverage = 0.0;
  std::size_t text_boxes = 0;
  std::vector<double> wcag_per_seed;
  std::vector<double> pairwise_cosine_per_seed;
  std::vector<double> cosine_with_s_per_seed;
};

struct AblationReport {
  std::vector<ConditionMetrics> conditions;

  [[nodiscard]] const ConditionMetrics &get(Condition c) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Runs {full, no-style-bank, no-SSC} over the synthetic suite, each seed
/// using its own document and the default style label seed % 7.
AblationReport ablation_suite(const AblationConfig &cfg);

/// Seeded linear drift used by the verification suites: A = 0.7 I plus a
/// skew part, mu = 0.
LinearField<double> standard_linear_field(int d, std::uint64_t seed);

struct VerifySummary {
  std::vector<PropositionReport> reports;
  std::optional<AblationReport> ablation;
  bool ablation_pass = true;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] nlohmann::json to_json(const RunConfig &cfg) const;
};

/// suite in {prop1, prop2, prop3, prop4, theorem1, ablation, all}.
VerifySummary verify_suite(const std::string &suite, const RunConfig &cfg);

}  // namespace ssc
