#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ssc/diagnostics.hpp"

using namespace ssc;

namespace {

struct Setup {
  LayoutPage page = synthetic_document(1, 16, 12, 4).pages.front();
  ForegroundMask mask = rasterize_mask(page, 16, 12, 1.0);
  int d = 6;
};

RunResult<double> run_with(const Setup &s, const VelocityField<double> &field, const ForegroundMask &mask,
                           double lambda_s, int steps, std::uint64_t seed = 1) {
  Controls<double> c;
  c.lambda_s = lambda_s;
  c.backing = BackingLatent<double>::zeros(s.d);
  const auto init = init_state<double>(16, 12, s.d, seed, mask, c.backing, lambda_s);
  return run(field, make_schedule<double>(steps), mask, std::nullopt, init, c);
}

VelocityField<double> zero(int d) { return ConstantField<double>{Eigen::VectorXd::Zero(d)}; }

const Check &named(const PropositionReport &r, std::string_view fragment) {
  for (const auto &c : r.checks)
    if (c.name.find(fragment) != std::string::npos) return c;
  throw std::runtime_error("no check named " + std::string(fragment));
}

RunConfig small_config() {
  RunConfig cfg;
  cfg.grid_h = 16;
  cfg.grid_w = 12;
  cfg.d = 8;
  cfg.patch = 4;
  cfg.steps = 30;
  return cfg;
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("timescale check on a linear-field run") {
    Setup s;
    const auto rec = run_with(s, standard_linear_field(s.d, 3), s.mask, 0.8, 100).record;
    const auto report = check_timescale(rec);
    CHECK(report.pass());
    CHECK(named(report, "1 - alpha").max_deviation <= 1e-10);
    // first step has alpha = 0 so gated equals ungated exactly
    for (std::size_t j = 0; j < rec.steps.front().gated_norm.size(); ++j)
      CHECK(rec.steps.front().gated_norm[j] == rec.steps.front().ungated_norm[j]);
  }

  TEST_CASE("timescale check detects a tampered factor") {
    Setup s;
    auto rec = run_with(s, standard_linear_field(s.d, 3), s.mask, 0.8, 40).record;
    rec.steps[17].gated_norm[2] *= 1.0 + 1e-6;
    const auto report = check_timescale(rec);
    CHECK_FALSE(report.pass());
    CHECK(named(report, "1 - alpha").worst_step == 17);
  }

  TEST_CASE("timescale decay leg") {
    Setup s;
    const VelocityField<double> c = ConstantField<double>{Eigen::VectorXd::Ones(s.d)};
    TimescaleOptions opts;
    opts.decay_ratio = 0.01;
    CHECK(check_timescale(run_with(s, c, s.mask, 0.8, 200).record, opts).pass());
    // at 100 steps the last gate still lets 1 - (1 - 0.01)^2 through
    const auto short_run = check_timescale(run_with(s, c, s.mask, 0.8, 100).record, opts);
    CHECK_FALSE(short_run.pass());
    CHECK(named(short_run, "final/first").max_deviation == doctest::Approx(1.0 - 0.99 * 0.99).epsilon(1e-9));
  }

  TEST_CASE("empty record is an error") {
    TrajectoryRecord<double> rec;
    CHECK_THROWS_AS(check_timescale(rec), InvalidConfig);
    CHECK_THROWS_AS(check_lyapunov(rec), InvalidConfig);
    CHECK_THROWS_AS(check_energy(rec), InvalidConfig);
  }

  TEST_CASE("lyapunov closed form against a product oracle") {
    Setup s;
    const auto rec = run_with(s, zero(s.d), s.mask, 0.8, 100).record;
    LyapunovOptions opts;
    opts.closed_form = true;
    const auto report = check_lyapunov(rec, opts);
    CHECK(report.pass());
    const double factor = oracle::relaxation_product(100, 0.8);
    for (std::size_t j = 0; j < rec.sample_tokens.size(); ++j) {
      const double v0 = rec.steps.front().lyapunov_before[j];
      const double v1 = rec.steps.back().lyapunov_after[j];
      CHECK(std::abs(v1 / v0 - factor * factor) <= 1e-9 * factor * factor);
    }
  }

  TEST_CASE("lyapunov with gamma zero everywhere stays constant") {
    Setup s;
    const auto rec = run_with(s, zero(s.d), s.mask, 0.0, 20).record;
    for (const auto &st : rec.steps)
      for (std::size_t j = 0; j < st.lyapunov_before.size(); ++j) CHECK(st.lyapunov_after[j] == st.lyapunov_before[j]);
    LyapunovOptions opts;
    opts.closed_form = true;
    CHECK(check_lyapunov(rec, opts).pass());
  }

  TEST_CASE("lyapunov with full collapse") {
    TrajectoryRecord<double> rec;
    rec.lambda_s = 1.0;
    rec.sample_tokens = {0};
    rec.sample_weights = {1.0};
    StepRecord<double> st;
    st.t = 0.0;
    st.lyapunov_before = {4.0};
    st.lyapunov_after = {0.0};
    rec.steps.push_back(st);
    CHECK(check_lyapunov(rec).pass());
    rec.steps[0].lyapunov_after = {0.5};
    CHECK_FALSE(check_lyapunov(rec).pass());
  }

  TEST_CASE("lyapunov check detects a tampered trace") {
    Setup s;
    auto rec = run_with(s, zero(s.d), s.mask, 0.8, 50).record;
    rec.steps[30].lyapunov_after[0] *= 1.0 + 1e-7;
    LyapunovOptions opts;
    opts.closed_form = true;
    const auto report = check_lyapunov(rec, opts);
    CHECK_FALSE(report.pass());
    CHECK(named(report, "ratio").worst_step == 30);
  }

  TEST_CASE("energy closed form and dissipation") {
    Setup s;
    const auto rec = run_with(s, zero(s.d), s.mask, 0.8, 100).record;
    EnergyOptions opts;
    opts.closed_form = true;
    const auto report = check_energy(rec, opts);
    CHECK(report.pass());
    const double factor = oracle::relaxation_product(100, 0.8);
    CHECK(std::abs(rec.steps.back().energy_after / rec.steps.front().energy_before - factor * factor) <=
          1e-9 * factor * factor);
  }

  TEST_CASE("energy under a mixture field decreases on every active sub-step") {
    Setup s;
    auto cfg = small_config();
    cfg.d = s.d;
    const auto scene = make_scene(cfg);
    const auto weighted = rasterize_mask(s.page, 16, 12, 0.5);
    const auto report = check_energy(run_with(s, scene.field, weighted, 0.8, 100).record);
    CHECK(report.pass());
  }

  TEST_CASE("energy closed form refuses non-uniform weights") {
    Setup s;
    const auto weighted = rasterize_mask(s.page, 16, 12, 0.5);
    EnergyOptions opts;
    opts.closed_form = true;
    CHECK_FALSE(check_energy(run_with(s, zero(s.d), weighted, 0.8, 10).record, opts).pass());
  }

  TEST_CASE("energy check detects an increase") {
    Setup s;
    auto rec = run_with(s, zero(s.d), s.mask, 0.8, 20).record;
    rec.steps[5].energy_after = rec.steps[5].energy_before;
    CHECK_FALSE(check_energy(rec).pass());
  }

  TEST_CASE("translation: lambda zero gives identical trajectories") {
    const auto dir = build_direction<double>("x", label_seed_vectors<double>("x", 5, 1), 0.0);
    TranslationConfig tc;
    tc.grid_h = 6;
    tc.grid_w = 5;
    tc.steps = 30;
    const VelocityField<double> c = ConstantField<double>{Eigen::VectorXd::Constant(5, 0.3)};
    const auto report = check_translation(c, dir, tc);
    CHECK(report.pass());
    CHECK(report.checks.front().max_deviation == 0.0);
  }

  TEST_CASE("translation: constant field preserves the offset") {
    Setup s;
    const auto dir = build_direction<double>("x", label_seed_vectors<double>("x", s.d, 2), 0.5);
    TranslationConfig tc;
    tc.grid_h = 16;
    tc.grid_w = 12;
    tc.steps = 100;
    tc.mask = ForegroundMask::empty(16 * 12);
    const VelocityField<double> c = ConstantField<double>{Eigen::VectorXd::LinSpaced(s.d, -1.0, 1.0)};
    const auto report = check_translation(c, dir, tc);
    CHECK(report.pass());
    CHECK(report.checks.front().max_deviation <= 1e-12);
    CHECK_FALSE(report.checks.front().informative);

    tc.mask = rasterize_mask(s.page, 16, 12, 0.5);
    CHECK(check_translation(c, dir, tc).pass());
  }

  TEST_CASE("translation: identity linear field decays geometrically") {
    const int d = 3;
    const auto dir = build_direction<double>("x", label_seed_vectors<double>("x", d, 5), 0.5);
    TranslationConfig tc;
    tc.grid_h = 4;
    tc.grid_w = 3;
    tc.steps = 20;
    tc.mask = ForegroundMask::empty(12);
    const VelocityField<double> f =
        LinearField<double>(Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d), 10.0);
    const auto report = check_translation(f, dir, tc);
    REQUIRE(report.checks.size() == 1);
    CHECK(report.checks.front().informative);
    CHECK(report.checks.front().max_deviation <= 1e-12);

    // independent geometric oracle on a single paired run
    Controls<double> c;
    c.lambda_s = 0.5;
    c.backing = BackingLatent<double>::zeros(d);
    const auto x0 = init_state<double>(4, 3, d, 1, tc.mask, c.backing, 0.5);
    const auto x1 = inject_state(x0, dir);
    const auto a = run(f, make_schedule<double>(20, StyleMode::state), tc.mask, std::nullopt, x0, c).final_state;
    const auto b = run(f, make_schedule<double>(20, StyleMode::state), tc.mask, std::nullopt, x1, c).final_state;
    const Eigen::VectorXd expected = std::pow(1.0 - 1.0 / 20.0, 20) * 0.5 * dir.s();
    for (Eigen::Index k = 0; k < 12; ++k)
      CHECK((b.tokens.row(k) - a.tokens.row(k) - expected.transpose()).norm() <= 1e-12);
  }

  TEST_CASE("multipage consistency examples") {
    auto page = [](std::initializer_list<double> v) {
      LatentState<double> x;
      x.tokens.resize(1, Eigen::Index(v.size()));
      Eigen::Index j = 0;
      for (double e : v) x.tokens(0, j++) = e;
      return x;
    };
    const auto m = ForegroundMask::empty(1);
    const Eigen::Vector2d s(1.0, 0.0);
    auto same = multipage_consistency({page({1, 2}), page({1, 2})}, {m, m}, s);
    CHECK(*same.mean_pairwise_cosine == doctest::Approx(1.0).epsilon(1e-15));
    auto opposite = multipage_consistency({page({1, 0}), page({-1, 0})}, {m, m}, s);
    CHECK(*opposite.mean_pairwise_cosine == -1.0);
    CHECK(*opposite.mean_cosine_with_s == 0.0);

    auto degenerate = multipage_consistency({page({0, 0}), page({1, 0})}, {m, m}, s);
    CHECK_FALSE(degenerate.mean_pairwise_cosine.has_value());
    CHECK_FALSE(degenerate.cosine_with_s[0].has_value());
    CHECK(*degenerate.cosine_with_s[1] == 1.0);

    const auto all_fg = ForegroundMask::full(1);
    CHECK_FALSE(multipage_consistency({page({1, 0}), page({1, 0})}, {all_fg, m}, s).mean_pairwise_cosine);
    CHECK_THROWS_AS(multipage_consistency({page({1, 0})}, {m}, s), InvalidConfig);
  }

  TEST_CASE("injected style raises cosine with s") {
    auto cfg = small_config();
    const auto scene = make_scene(cfg);
    const auto doc = synthetic_document(3, cfg.grid_h, cfg.grid_w, 8);
    const auto bank = build_default_bank<double>(cfg.d, 0);
    const auto &dir = bank.select("colorful");
    auto mean_with_s = [&](double strength) {
      std::vector<LatentState<double>> finals;
      std::vector<ForegroundMask> masks;
      for (int p = 0; p < 3; ++p) {
        auto res = run_page(cfg, doc.pages[std::size_t(p)], p, scene, dir.with_strength(strength));
        finals.push_back(res.final_state);
        masks.push_back(res.mask);
      }
      return *multipage_consistency(finals, masks, dir.s()).mean_cosine_with_s;
    };
    CHECK(mean_with_s(0.8) > mean_with_s(0.0));
  }

  TEST_CASE("ablation is deterministic") {
    AblationConfig ac;
    ac.base = small_config();
    ac.pages = 2;
    ac.seeds = {1, 2};
    const auto a = ablation_suite(ac).to_json();
    const auto b = ablation_suite(ac).to_json();
    CHECK(a.dump() == b.dump());
    CHECK(a.size() == 3);
  }

  TEST_CASE("verify rejects out-of-range lambda") {
    auto cfg = small_config();
    cfg.lambda_s = 1.5;
    CHECK_THROWS_AS(verify_suite("prop2", cfg), InvalidConfig);
    CHECK_THROWS_AS(verify_suite("prop9", small_config()), InvalidConfig);
  }

  TEST_CASE("theorem suite passes on a small config") {
    const auto summary = verify_suite("theorem1", small_config());
    CHECK(summary.reports.size() == 4);
    for (const auto &r : summary.reports) {
      INFO(r.to_json().dump());
      CHECK(r.pass());
    }
  }

  TEST_CASE("report json carries pass flags and tolerances") {
    PropositionReport r{"x", {}};
    Check ok;
    ok.name = "a";
    ok.max_deviation = 1e-12;
    ok.tolerance = 1e-10;
    r.add(ok);
    Check info;
    info.name = "b";
    info.max_deviation = 5.0;
    info.tolerance = 1e-10;
    info.informative = true;
    r.add(info);
    CHECK(r.pass());
    const auto j = r.to_json();
    CHECK(j["pass"] == true);
    CHECK(j["checks"][1]["pass"] == false);
    CHECK(j["checks"][1]["informative"] == true);
    CHECK(j["checks"][0]["tolerance"] == 1e-10);
  }
}
