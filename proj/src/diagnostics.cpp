#include "ssc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "ssc/rng.hpp"

namespace ssc {

using nlohmann::json;

namespace {

constexpr double kTiny = 1e-300;

// Recomputed here rather than taken from the controller.
double gate_schedule(double t) { return (1.0 - t) * (1.0 - t); }

double rel_dev(double measured, double expected) {
  if (expected == 0.0) return std::abs(measured);
  return std::abs(measured - expected) / std::max(std::abs(expected), kTiny);
}

void require_nonempty(const TrajectoryRecord<double> &rec) {
  if (rec.steps.empty()) throw InvalidConfig("diagnostics: empty trajectory record");
}

void track(Check &c, std::size_t step, double dev) {
  if (c.per_step.size() <= step) c.per_step.resize(step + 1, 0.0);
  c.per_step[step] = std::max(c.per_step[step], dev);
  if (!c.worst_step || dev > c.max_deviation) {
    c.max_deviation = dev;
    c.worst_step = step;
  }
}

Check make_check(std::string name, double tol) {
  Check c;
  c.name = std::move(name);
  c.tolerance = tol;
  return c;
}

}  // namespace

bool PropositionReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.informative || c.pass; });
}

void PropositionReport::add(Check c) {
  c.pass = c.max_deviation <= c.tolerance;
  checks.push_back(std::move(c));
}

json PropositionReport::to_json() const {
  json j;
  j["id"] = id;
  j["pass"] = pass();
  j["checks"] = json::array();
  for (const auto &c : checks) {
    json jc = {{"name", c.name},
               {"max_deviation", c.max_deviation},
               {"tolerance", c.tolerance},
               {"pass", c.pass},
               {"informative", c.informative}};
    jc["worst_step"] = c.worst_step ? json(*c.worst_step) : json(nullptr);
    if (!c.note.empty()) jc["note"] = c.note;
    j["checks"].push_back(std::move(jc));
  }
  return j;
}

PropositionReport check_timescale(const TrajectoryRecord<double> &rec, const TimescaleOptions &opts) {
  require_nonempty(rec);
  PropositionReport report{"prop1-timescale", {}};

  auto identity = make_check("foreground gating factor equals 1 - alpha(t)", opts.identity_tolerance);
  for (std::size_t i = 0; i < rec.steps.size(); ++i) {
    const auto &st = rec.steps[i];
    const double keep = rec.gating ? 1.0 - gate_schedule(st.t) : 1.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < st.ungated_norm.size(); ++j)
      worst = std::max(worst, rel_dev(st.gated_norm[j], keep * st.ungated_norm[j]));
    track(identity, i, worst);
  }
  if (rec.sample_tokens.empty()) identity.note = "no foreground tokens sampled";
  report.add(std::move(identity));

  if (opts.decay_ratio) {
    auto decay = make_check("final/first foreground update norm", *opts.decay_ratio);
    const double first = rec.steps.front().fg_update_norm;
    const double last = rec.steps.back().fg_update_norm;
    decay.max_deviation = first > 0.0 ? last / first : (last == 0.0 ? 0.0 : 1.0 / 0.0);
    decay.worst_step = rec.steps.size() - 1;
    report.add(std::move(decay));
  }
  return report;
}

PropositionReport check_lyapunov(const TrajectoryRecord<double> &rec, const LyapunovOptions &opts) {
  require_nonempty(rec);
  PropositionReport report{"prop2-lyapunov", {}};
  const std::size_t n = rec.sample_tokens.size();

  auto factor = make_check("V ratio across relaxation equals (1 - gamma w)^2", opts.substep_tolerance);
  auto monotone = make_check("V non-increasing across relaxation", 1e-12);
  for (std::size_t i = 0; i < rec.steps.size(); ++i) {
    const auto &st = rec.steps[i];
    const double g = rec.relaxation ? rec.lambda_s * gate_schedule(st.t) : 0.0;
    double worst = 0.0, rise = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double keep = 1.0 - g * rec.sample_weights[j];
      worst = std::max(worst, rel_dev(st.lyapunov_after[j], keep * keep * st.lyapunov_before[j]));
      rise = std::max(rise, (st.lyapunov_after[j] - st.lyapunov_before[j]) /
                                std::max(st.lyapunov_before[j], kTiny));
    }
    track(factor, i, worst);
    track(monotone, i, std::max(rise, 0.0));
  }
  report.add(std::move(factor));
  report.add(std::move(monotone));

  if (opts.closed_form) {
    auto trace = make_check("V trace equals V0 * prod (1 - gamma w)^2", opts.trace_tolerance);
    auto nonincreasing = make_check("V trace non-increasing", 1e-12);
    std::vector<double> cumulative(n, 1.0);
    std::vector<double> previous(n);
    for (std::size_t j = 0; j < n; ++j) previous[j] = rec.steps.front().lyapunov_before[j];
    for (std::size_t i = 0; i < rec.steps.size(); ++i) {
      const auto &st = rec.steps[i];
      const double g = rec.relaxation ? rec.lambda_s * gate_schedule(st.t) : 0.0;
      double worst = 0.0, rise = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double keep = 1.0 - g * rec.sample_weights[j];
        cumulative[j] *= keep * keep;
        const double v0 = rec.steps.front().lyapunov_before[j];
        worst = std::max(worst, rel_dev(st.lyapunov_after[j], v0 * cumulative[j]));
        rise = std::max(rise, (st.lyapunov_after[j] - previous[j]) / std::max(previous[j], kTiny));
        previous[j] = st.lyapunov_after[j];
      }
      track(trace, i, worst);
      track(nonincreasing, i, std::max(rise, 0.0));
    }
    report.add(std::move(trace));
    report.add(std::move(nonincreasing));
  }
  return report;
}

PropositionReport check_energy(const TrajectoryRecord<double> &rec, const EnergyOptions &opts) {
  require_nonempty(rec);
  PropositionReport report{"prop4-energy", {}};

  // Fraction of relaxation sub-steps with gamma > 0 that fail to strictly
  // lower E_fg; gamma = 0 sub-steps must leave it unchanged.
  auto dissipation = make_check("E_fg strictly decreases on every gamma > 0 sub-step", 0.0);
  std::size_t active = 0, violations = 0;
  for (std::size_t i = 0; i < rec.steps.size(); ++i) {
    const auto &st = rec.steps[i];
    const double g = rec.relaxation ? rec.lambda_s * gate_schedule(st.t) : 0.0;
    bool bad = false;
    if (g > 0.0) {
      ++active;
      bad = !(st.energy_after < st.energy_before);
    } else {
      bad = st.energy_after != st.energy_before;
    }
    violations += bad ? 1 : 0;
    track(dissipation, i, bad ? 1.0 : 0.0);
  }
  dissipation.max_deviation = rec.steps.empty() ? 0.0 : double(violations) / double(rec.steps.size());
  dissipation.note = std::to_string(active) + " sub-steps with gamma > 0, " + std::to_string(violations) +
                     " violations";
  report.add(std::move(dissipation));

  if (opts.closed_form) {
    auto substep = make_check("E_fg ratio across relaxation equals (1 - gamma)^2", opts.substep_tolerance);
    auto trace = make_check("E_fg trace equals E0 * prod (1 - gamma)^2", opts.trace_tolerance);
    if (!rec.uniform_weights) {
      substep.max_deviation = trace.max_deviation = std::numeric_limits<double>::infinity();
      substep.note = trace.note = "closed form requires uniform interior weights";
    } else {
      const double e0 = rec.steps.front().energy_before;
      double cumulative = 1.0;
      for (std::size_t i = 0; i < rec.steps.size(); ++i) {
        const auto &st = rec.steps[i];
        const double g = rec.relaxation ? rec.lambda_s * gate_schedule(st.t) : 0.0;
        const double keep2 = (1.0 - g) * (1.0 - g);
        cumulative *= keep2;
        track(substep, i, rel_dev(st.energy_after, keep2 * st.energy_before));
        track(trace, i, rel_dev(st.energy_after, e0 * cumulative));
      }
    }
    report.add(std::move(substep));
    report.add(std::move(trace));
  }
  return report;
}

PropositionReport check_translation(const VelocityField<double> &field, const StyleDirection<double> &dir,
                                    const TranslationConfig &cfg) {
  const int d = int(dir.dim());
  require_dims(field_dim(field) == d, "translation: field dim != style dim");
  const auto n = std::size_t(cfg.grid_h) * std::size_t(cfg.grid_w);
  const ForegroundMask mask = cfg.mask.size() == n ? cfg.mask : ForegroundMask::empty(n);

  Controls<double> controls;
  controls.lambda_s = cfg.lambda_s;
  controls.backing = BackingLatent<double>::zeros(d);
  const auto schedule = make_schedule<double>(cfg.steps, StyleMode::state);
  const auto x0 = init_state<double>(cfg.grid_h, cfg.grid_w, d, cfg.seed, mask, controls.backing, cfg.lambda_s);
  const auto x1 = inject_state(x0, dir);

  std::vector<TokenMatrix<double>> base, shifted;
  run(field, schedule, mask, std::nullopt, x0, controls,
      [&](std::size_t, const LatentState<double> &x) { base.push_back(x.tokens); });
  run(field, schedule, mask, std::nullopt, x1, controls,
      [&](std::size_t, const LatentState<double> &x) { shifted.push_back(x.tokens); });

  // Exact offset evolution. Constant field: velocities cancel, only the
  // relaxation scales foreground offsets. Linear field: the offset follows
  // the same gated linear map. Mixture: no closed form, compared to the
  // initial offset.
  const bool constant = std::holds_alternative<ConstantField<double>>(field);
  const auto *linear = std::get_if<LinearField<double>>(&field);
  TokenMatrix<double> expected = (dir.lambda_s() * dir.s()).transpose().replicate(Eigen::Index(n), 1);
  const double dt = schedule.dt();

  PropositionReport report{"prop3-translation", {}};
  auto offset = make_check(constant ? "offset preserved under constant field"
                                    : (linear ? "offset follows gated linear recurrence"
                                              : "offset deviation from lambda s (mixture)"),
                           cfg.tolerance);
  offset.informative = !constant;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double t = schedule.t_grid[i];
    const double a = gate_schedule(t);
    const double g = cfg.lambda_s * a;
    if (linear) {
      const TokenMatrix<double> dv = expected * linear->a().transpose();
      for (std::size_t k = 0; k < n; ++k) {
        const double keep = mask.is_foreground(k) ? 1.0 - a : 1.0;
        expected.row(Eigen::Index(k)) -= dt * keep * dv.row(Eigen::Index(k));
      }
    }
    if (constant || linear) {
      for (std::size_t k = 0; k < n; ++k)
        if (mask.is_foreground(k)) expected.row(Eigen::Index(k)) *= 1.0 - g * mask.interior_weight[k];
    }
    const TokenMatrix<double> diff = shifted[i] - base[i] - expected;
    track(offset, i, diff.rowwise().norm().maxCoeff());
  }
  report.add(std::move(offset));
  return report;
}

ConsistencyStats multipage_consistency(const std::vector<LatentState<double>> &finals,
                                       const std::vector<ForegroundMask> &masks, const Eigen::VectorXd &s) {
  if (finals.size() < 2) throw InvalidConfig("consistency: need at least two pages");
  require_dims(finals.size() == masks.size(), "consistency: page and mask counts differ");

  std::vector<std::optional<Eigen::VectorXd>> means;
  for (std::size_t p = 0; p < finals.size(); ++p) {
    const auto &x = finals[p];
    require_dims(masks[p].size() == std::size_t(x.num_tokens()), "consistency: mask length != token count");
    require_dims(s.size() == x.dim(), "consistency: direction dim != state dim");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(x.dim());
    std::size_t count = 0;
    for (Eigen::Index k = 0; k < x.num_tokens(); ++k) {
      if (masks[p].is_foreground(std::size_t(k))) continue;
      sum += x.tokens.row(k).transpose();
      ++count;
    }
    if (count == 0 || sum.norm() == 0.0) means.emplace_back(std::nullopt);
    else means.emplace_back(sum / double(count));
  }

  auto cosine = [](const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
    return a.dot(b) / (a.norm() * b.norm());
  };

  ConsistencyStats out;
  bool degenerate = false;
  double with_s = 0.0;
  for (const auto &m : means) {
    if (!m) {
      degenerate = true;
      out.cosine_with_s.emplace_back(std::nullopt);
      continue;
    }
    out.cosine_with_s.emplace_back(cosine(*m, s));
    with_s += *out.cosine_with_s.back();
  }
  if (degenerate) return out;

  double pair_sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < means.size(); ++a)
    for (std::size_t b = a + 1; b < means.size(); ++b, ++pairs) pair_sum += cosine(*means[a], *means[b]);
  out.mean_pairwise_cosine = pair_sum / double(pairs);
  out.mean_cosine_with_s = with_s / double(means.size());
  return out;
}

const ConditionMetrics &AblationReport::get(Condition c) const {
  for (const auto &m : conditions)
    if (m.condition == c) return m;
  throw NotFound("ablation: condition " + to_string(c) + " missing");
}

json AblationReport::to_json() const {
  json j = json::array();
  for (const auto &m : conditions) {
    j.push_back({{"condition", to_string(m.condition)},
                 {"wcag_coverage", m.wcag_coverage},
                 {"text_boxes", m.text_boxes},
                 {"wcag_per_seed", m.wcag_per_seed},
                 {"pairwise_cosine_per_seed", m.pairwise_cosine_per_seed},
                 {"cosine_with_s_per_seed", m.cosine_with_s_per_seed},
                 {"metric", "proxy: ring-contrast WCAG coverage, latent-mean cosine"}});
  }
  return j;
}

namespace {

struct SeedOutcome {
  std::size_t boxes = 0;
  std::size_t passing = 0;
  double pairwise = 0.0;
  double with_s = 0.0;
};

SeedOutcome run_seed(const AblationConfig &cfg, const Scene &scene, std::uint64_t seed, Condition cond) {
  RunConfig rc = cfg.base;
  rc.seed = seed;
  const auto doc = synthetic_document(cfg.pages, rc.grid_h, rc.grid_w, seed);
  const auto bank = build_default_bank<double>(rc.d, rc.bank_seed, rc.lambda_s);
  const auto labels = default_style_labels();
  const auto &dir = bank.select(labels[std::size_t(seed % labels.size())]);

  SeedOutcome out;
  std::vector<LatentState<double>> finals;
  std::vector<ForegroundMask> masks;
  for (int p = 0; p < cfg.pages; ++p) {
    const auto &page = doc.pages[std::size_t(p)];
    auto res = run_page(rc, page, p, scene, dir, cond);
    for (const auto &bc : text_contrast(res.composited, page)) {
      ++out.boxes;
      out.passing += bc.ratio >= cfg.threshold ? 1 : 0;
    }
    finals.push_back(std::move(res.final_state));
    masks.push_back(std::move(res.mask));
  }
  const auto stats = multipage_consistency(finals, masks, dir.s());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.pairwise = stats.mean_pairwise_cosine.value_or(nan);
  out.with_s = stats.mean_cosine_with_s.value_or(nan);
  return out;
}

}  // namespace

AblationReport ablation_suite(const AblationConfig &cfg) {
  cfg.base.validate();
  if (cfg.pages < 2) throw InvalidConfig("ablation: need at least two pages");
  const Scene scene = make_scene(cfg.base);

  AblationReport report;
  for (auto cond : {Condition::full, Condition::no_style_bank, Condition::no_ssc}) {
    std::vector<std::future<SeedOutcome>> jobs;
    for (auto seed : cfg.seeds)
      jobs.push_back(std::async(std::launch::async, run_seed, std::cref(cfg), std::cref(scene), seed, cond));
    ConditionMetrics m;
    m.condition = cond;
    std::size_t passing = 0;
    for (auto &job : jobs) {
      const auto o = job.get();
      m.text_boxes += o.boxes;
      passing += o.passing;
      m.wcag_per_seed.push_back(o.boxes ? double(o.passing) / double(o.boxes) : 0.0);
      m.pairwise_cosine_per_seed.push_back(o.pairwise);
      m.cosine_with_s_per_seed.push_back(o.with_s);
    }
    m.wcag_coverage = m.text_boxes ? double(passing) / double(m.text_boxes) : 0.0;
    report.conditions.push_back(std::move(m));
  }
  return report;
}

LinearField<double> standard_linear_field(int d, std::uint64_t seed) {
  Eigen::MatrixXd r(d, d);
  for (int i = 0; i < d; ++i) {
    const CounterRng rng(seed, streams::kField, std::uint64_t(i));
    for (int j = 0; j < d; ++j) r(i, j) = rng.normal(std::uint64_t(j));
  }
  const Eigen::MatrixXd a = 0.7 * Eigen::MatrixXd::Identity(d, d) + (0.5 / std::sqrt(double(d))) * (r - r.transpose());
  return LinearField<double>(a, Eigen::VectorXd::Zero(d), 10.0);
}

bool VerifySummary::pass() const {
  return ablation_pass &&
         std::all_of(reports.begin(), reports.end(), [](const PropositionReport &r) { return r.pass(); });
}

json VerifySummary::to_json(const RunConfig &cfg) const {
  json j;
  j["config_hash"] = cfg.hash();
  j["config"] = cfg.to_json();
  j["pass"] = pass();
  j["reports"] = json::array();
  for (const auto &r : reports) j["reports"].push_back(r.to_json());
  if (ablation) j["ablation"] = ablation->to_json();
  return j;
}

namespace {

struct Standard {
  RunConfig cfg;
  LayoutPage page;
};

ForegroundMask standard_mask(const Standard &s, double boundary_weight) {
  return rasterize_mask(s.page, s.cfg.grid_h, s.cfg.grid_w, boundary_weight);
}

RunResult<double> standard_run(const Standard &s, const VelocityField<double> &field, const ForegroundMask &mask,
                               int steps) {
  Controls<double> controls;
  controls.lambda_s = s.cfg.lambda_s;
  controls.backing = BackingLatent<double>::zeros(s.cfg.d);
  controls.sample_cap = s.cfg.sample_cap;
  const auto init = init_state<double>(s.cfg.grid_h, s.cfg.grid_w, s.cfg.d, s.cfg.seed, mask, controls.backing,
                                       s.cfg.lambda_s);
  return run(field, make_schedule<double>(steps, s.cfg.style_mode, s.cfg.style_cap), mask, std::nullopt, init,
             controls);
}

VelocityField<double> zero_field(int d) { return ConstantField<double>{Eigen::VectorXd::Zero(d)}; }

PropositionReport prop1(const Standard &s) {
  const auto mask = standard_mask(s, s.cfg.boundary_weight);
  const VelocityField<double> linear = standard_linear_field(s.cfg.d, s.cfg.seed);
  auto report = check_timescale(standard_run(s, linear, mask, s.cfg.steps).record);

  // Decay leg: a field bounded away from zero, enough steps that the last
  // gate (1 - (1 - dt)^2) falls below the ratio.
  Eigen::VectorXd c = Eigen::VectorXd::Ones(s.cfg.d) / std::sqrt(double(s.cfg.d));
  const VelocityField<double> constant = ConstantField<double>{c};
  TimescaleOptions opts;
  opts.decay_ratio = 0.01;
  auto decay = check_timescale(standard_run(s, constant, mask, std::max(s.cfg.steps, 200)).record, opts);
  for (auto &chk : decay.checks) {
    chk.name = "constant field: " + chk.name;
    report.checks.push_back(chk);
  }
  return report;
}

PropositionReport prop2(const Standard &s) {
  const auto mask = standard_mask(s, 1.0);
  LyapunovOptions opts;
  opts.closed_form = true;
  auto report = check_lyapunov(standard_run(s, zero_field(s.cfg.d), mask, s.cfg.steps).record, opts);

  const auto weighted = standard_mask(s, s.cfg.boundary_weight);
  auto field_report = check_lyapunov(standard_run(s, make_scene(s.cfg).field, weighted, s.cfg.steps).record);
  for (auto &chk : field_report.checks) {
    chk.name = "palette field: " + chk.name;
    report.checks.push_back(chk);
  }
  return report;
}

PropositionReport prop3(const Standard &s) {
  const auto bank = build_default_bank<double>(s.cfg.d, s.cfg.bank_seed, s.cfg.lambda_s);
  const auto &dir = bank.select(s.cfg.style.value_or("muted"));
  TranslationConfig tc;
  tc.grid_h = s.cfg.grid_h;
  tc.grid_w = s.cfg.grid_w;
  tc.steps = s.cfg.steps;
  tc.seed = s.cfg.seed;
  tc.lambda_s = s.cfg.lambda_s;
  tc.mask = standard_mask(s, s.cfg.boundary_weight);

  Eigen::VectorXd c(s.cfg.d);
  const CounterRng rng(s.cfg.seed, streams::kField, 999);
  for (int j = 0; j < s.cfg.d; ++j) c(j) = rng.normal(std::uint64_t(j));
  auto report = check_translation(ConstantField<double>{c}, dir, tc);

  for (const auto &[label, field] :
       {std::pair<std::string, VelocityField<double>>{"linear field: ", standard_linear_field(s.cfg.d, s.cfg.seed)},
        {"palette field: ", make_scene(s.cfg).field}}) {
    auto extra = check_translation(field, dir, tc);
    for (auto &chk : extra.checks) {
      chk.name = label + chk.name;
      report.checks.push_back(chk);
    }
  }
  return report;
}

PropositionReport prop4(const Standard &s) {
  const auto mask = standard_mask(s, 1.0);
  EnergyOptions opts;
  opts.closed_form = true;
  auto report = check_energy(standard_run(s, zero_field(s.cfg.d), mask, s.cfg.steps).record, opts);

  const auto weighted = standard_mask(s, s.cfg.boundary_weight);
  auto field_report = check_energy(standard_run(s, make_scene(s.cfg).field, weighted, s.cfg.steps).record);
  for (auto &chk : field_report.checks) {
    chk.name = "palette field: " + chk.name;
    report.checks.push_back(chk);
  }
  return report;
}

}  // namespace

VerifySummary verify_suite(const std::string &suite, const RunConfig &cfg) {
  static const std::vector<std::string> known = {"prop1", "prop2", "prop3", "prop4", "theorem1", "ablation", "all"};
  if (std::find(known.begin(), known.end(), suite) == known.end())
    throw InvalidConfig("unknown verify suite '" + suite + "'");
  cfg.validate();

  Standard s{cfg, synthetic_document(1, cfg.grid_h, cfg.grid_w, cfg.seed).pages.front()};
  VerifySummary out;
  const bool theorem = suite == "theorem1" || suite == "all";
  if (suite == "prop1" || theorem) out.reports.push_back(prop1(s));
  if (suite == "prop2" || theorem) out.reports.push_back(prop2(s));
  if (suite == "prop3" || theorem) out.reports.push_back(prop3(s));
  if (suite == "prop4" || theorem) out.reports.push_back(prop4(s));

  if (suite == "ablation" || suite == "all") {
    AblationConfig ac;
    ac.base = cfg;
    out.ablation = ablation_suite(ac);
    const auto &full = out.ablation->get(Condition::full);
    const auto &no_style = out.ablation->get(Condition::no_style_bank);
    const auto &no_ssc = out.ablation->get(Condition::no_ssc);

    PropositionReport r{"ablation", {}};
    auto cov = make_check("full-condition WCAG coverage shortfall below 0.95", 0.0);
    cov.max_deviation = std::max(0.0, 0.95 - full.wcag_coverage);
    r.add(std::move(cov));
    auto gap = make_check("no-SSC coverage gap shortfall below 0.10", 0.0);
    gap.max_deviation = std::max(0.0, 0.10 - (full.wcag_coverage - no_ssc.wcag_coverage));
    r.add(std::move(gap));
    std::size_t wins = 0;
    for (std::size_t i = 0; i < full.cosine_with_s_per_seed.size(); ++i)
      wins += full.cosine_with_s_per_seed[i] > no_style.cosine_with_s_per_seed[i] ? 1 : 0;
    auto cos = make_check("seeds where style bank fails to raise cosine-with-s", 1.0);
    cos.max_deviation = double(full.cosine_with_s_per_seed.size() - wins);
    cos.note = std::to_string(wins) + "/" + std::to_string(full.cosine_with_s_per_seed.size()) + " seeds";
    r.add(std::move(cos));
    out.ablation_pass = r.pass();
    out.reports.push_back(std::move(r));
  }
  return out;
}

}  // namespace ssc
