// Command-line front end: generate, verify, stylebank, sample-layout.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssc/config.hpp"
#include "ssc/diagnostics.hpp"
#include "ssc/generate.hpp"
#include "ssc/layout.hpp"
#include "ssc/report.hpp"
#include "ssc/style_bank.hpp"

namespace {

using nlohmann::json;

constexpr int kExitFailedCheck = 1;
constexpr int kExitError = 2;

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::string> layout, bank, style, style_mode, grid, out;
  std::optional<int> steps, dim, patch;
  std::optional<double> lambda_s, style_cap, boundary_weight;
  std::optional<std::uint64_t> seed;
  bool force = false;
};

void add_run_flags(CLI::App *cmd, Overrides &o, bool with_inputs) {
  cmd->add_option("--config", o.config, "JSON run config; flags override its keys")->envname("SSC_CONFIG");
  if (with_inputs) {
    cmd->add_option("--layout", o.layout, "layout JSON file")->envname("SSC_LAYOUT");
    cmd->add_option("--bank", o.bank, "style bank JSON file (default: built-in bank)")->envname("SSC_BANK");
    cmd->add_flag("--force", o.force, "overwrite results of a different config");
  }
  cmd->add_option("--style", o.style, "style label")->envname("SSC_STYLE");
  cmd->add_option("--steps", o.steps, "denoising steps")->envname("SSC_STEPS");
  cmd->add_option("--lambda", o.lambda_s, "style / stabilization strength in [0, 1]")->envname("SSC_LAMBDA");
  cmd->add_option("--style-mode", o.style_mode, "state | velocity")->envname("SSC_STYLE_MODE");
  cmd->add_option("--style-cap", o.style_cap, "bound on velocity-mode steering")->envname("SSC_STYLE_CAP");
  cmd->add_option("--seed", o.seed, "run seed")->envname("SSC_SEED");
  cmd->add_option("--grid", o.grid, "token grid HxW")->envname("SSC_GRID");
  cmd->add_option("--dim", o.dim, "latent dimension")->envname("SSC_DIM");
  cmd->add_option("--patch", o.patch, "pixels per token side")->envname("SSC_PATCH");
  cmd->add_option("--boundary-weight", o.boundary_weight, "relaxation weight of partial cells")
      ->envname("SSC_BOUNDARY_WEIGHT");
  cmd->add_option("--out", o.out, "output directory")->envname("SSC_OUT");
}

std::pair<int, int> parse_grid(const std::string &s) {
  const auto x = s.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument("no separator");
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception &) {
    throw ssc::InvalidConfig("--grid expects HxW, got '" + s + "'");
  }
}

ssc::RunConfig resolve(const Overrides &o) {
  ssc::RunConfig cfg;
  if (o.config) cfg = ssc::merge_config(cfg, json::parse(ssc::read_text(*o.config)));
  if (o.layout) cfg.layout_path = *o.layout;
  if (o.bank) cfg.bank_path = *o.bank;
  if (o.style) cfg.style = *o.style;
  if (o.style_mode) cfg.style_mode = ssc::parse_style_mode(*o.style_mode);
  if (o.grid) std::tie(cfg.grid_h, cfg.grid_w) = parse_grid(*o.grid);
  if (o.out) cfg.out_dir = *o.out;
  if (o.steps) cfg.steps = *o.steps;
  if (o.dim) cfg.d = *o.dim;
  if (o.patch) cfg.patch = *o.patch;
  if (o.lambda_s) cfg.lambda_s = *o.lambda_s;
  if (o.style_cap) cfg.style_cap = *o.style_cap;
  if (o.boundary_weight) cfg.boundary_weight = *o.boundary_weight;
  if (o.seed) cfg.seed = *o.seed;
  cfg.validate();
  return cfg;
}

int cmd_generate(const Overrides &o) {
  auto cfg = resolve(o);
  if (cfg.layout_path.empty()) throw ssc::InvalidConfig("generate needs --layout");
  const bool lambda_given = o.lambda_s || (o.config && json::parse(ssc::read_text(*o.config)).contains("lambda_s"));
  if (cfg.style && !cfg.bank_path.empty() && !lambda_given) {
    cfg.lambda_s = ssc::load_bank(cfg.bank_path).select(*cfg.style).lambda_s();
    cfg.validate();
  }
  const auto summary = ssc::generate(cfg, o.force);
  std::cout << "config " << summary.config_hash << ": wrote " << summary.artifacts.size() << " artifacts to "
            << summary.out_dir.string() << "\n";
  return 0;
}

int cmd_verify(const std::string &suite, const Overrides &o) {
  const auto cfg = resolve(o);
  const auto summary = ssc::verify_suite(suite, cfg);
  for (const auto &r : summary.reports) {
    for (const auto &c : r.checks) {
      std::printf("[%s] %-18s %-62s dev=%.3e tol=%.1e%s\n",
                  c.informative ? "INFO" : (c.pass ? "PASS" : "FAIL"), r.id.c_str(), c.name.c_str(),
                  c.max_deviation, c.tolerance,
                  c.worst_step && !c.pass ? (" step " + std::to_string(*c.worst_step)).c_str() : "");
    }
  }
  if (summary.ablation) {
    for (const auto &m : summary.ablation->conditions)
      std::printf("[ABLATION] %-14s wcag_coverage=%.4f text_boxes=%zu\n", ssc::to_string(m.condition).c_str(),
                  m.wcag_coverage, m.text_boxes);
  }
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = std::filesystem::path(cfg.out_dir) / ("verify_" + suite + ".json");
  ssc::write_text(path, summary.to_json(cfg).dump(2) + "\n");
  std::cout << (summary.pass() ? "verify " + suite + ": PASS" : "verify " + suite + ": FAIL") << " (report "
            << path.string() << ")\n";
  return summary.pass() ? 0 : kExitFailedCheck;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Diffusion state-space control engine"};
  app.require_subcommand(1);

  Overrides gen_opts;
  auto *gen = app.add_subcommand("generate", "run the controlled pipeline over a layout");
  add_run_flags(gen, gen_opts, true);

  Overrides ver_opts;
  std::string suite = "all";
  auto *ver = app.add_subcommand("verify", "run property suites");
  ver->add_option("suite", suite, "prop1|prop2|prop3|prop4|theorem1|ablation|all")
      ->check(CLI::IsMember({"prop1", "prop2", "prop3", "prop4", "theorem1", "ablation", "all"}));
  add_run_flags(ver, ver_opts, false);

  auto *sb = app.add_subcommand("stylebank", "build or list a style bank");
  std::string action;
  std::vector<std::string> labels;
  int sb_dim = 16;
  std::uint64_t sb_seed = 0;
  double sb_lambda = 0.8;
  std::string sb_path = "style_bank.json";
  sb->add_option("action", action, "build | list")->required()->check(CLI::IsMember({"build", "list"}));
  sb->add_option("--labels", labels, "comma-separated labels (default: seven built-in categories)")->delimiter(',');
  sb->add_option("--dim", sb_dim, "latent dimension")->envname("SSC_DIM");
  sb->add_option("--seed", sb_seed, "seed for label latents")->envname("SSC_SEED");
  sb->add_option("--lambda", sb_lambda, "stored style strength");
  sb->add_option("--path", sb_path, "bank file");

  auto *sample = app.add_subcommand("sample-layout", "write a synthetic layout document");
  int sample_pages = 3;
  std::string sample_grid = "32x24";
  std::uint64_t sample_seed = 1;
  std::string sample_out = "layout.json";
  sample->add_option("--pages", sample_pages, "page count");
  sample->add_option("--grid", sample_grid, "token grid HxW the boxes are placed on");
  sample->add_option("--seed", sample_seed, "layout seed");
  sample->add_option("--out", sample_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_opts);
    if (ver->parsed()) return cmd_verify(suite, ver_opts);
    if (sb->parsed()) {
      if (action == "build") {
        if (labels.empty())
          for (auto l : ssc::default_style_labels()) labels.emplace_back(l);
        const auto bank = ssc::build_bank<double>(labels, sb_dim, sb_seed, sb_lambda);
        ssc::save_bank(bank, sb_path);
        std::cout << "wrote " << bank.size() << " directions (d=" << bank.dim() << ") to " << sb_path << "\n";
      } else {
        const auto bank = ssc::load_bank(sb_path);
        for (const auto &e : bank.entries())
          std::printf("%-20s norm=%.12f lambda_s=%.4f\n", e.label().c_str(), e.s().norm(), e.lambda_s());
      }
      return 0;
    }
    if (sample->parsed()) {
      const auto [h, w] = parse_grid(sample_grid);
      ssc::write_text(sample_out, ssc::serialize_layout(ssc::synthetic_document(sample_pages, h, w, sample_seed)) + "\n");
      std::cout << "wrote " << sample_pages << "-page layout to " << sample_out << "\n";
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
