#include "ssc/generate.hpp"

#include <future>

#include "ssc/diagnostics.hpp"
#include "ssc/layout.hpp"
#include "ssc/pipeline.hpp"
#include "ssc/report.hpp"
#include "ssc/style_bank.hpp"

namespace ssc {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void claim_output_dir(const fs::path &dir, const std::string &hash, bool force) {
  fs::create_directories(dir);
  const auto manifest = dir / "manifest.json";
  if (fs::exists(manifest) && !force) {
    const auto prior = json::parse(read_text(manifest)).value("config_hash", std::string());
    if (prior != hash)
      throw Error("output directory '" + dir.string() + "' holds results of config " + prior +
                  "; pass --force or choose another --out");
  }
}

}  // namespace

GenerateSummary generate(const RunConfig &cfg, bool force) {
  cfg.validate();
  const auto doc = load_layout(cfg.layout_path);
  const auto bank = cfg.bank_path.empty() ? build_default_bank<double>(cfg.d, cfg.bank_seed, cfg.lambda_s)
                                          : load_bank(cfg.bank_path);
  if (bank.dim() != cfg.d)
    throw InvalidConfig("style bank dim " + std::to_string(bank.dim()) + " != latent dim " + std::to_string(cfg.d));
  std::optional<StyleDirection<double>> dir;
  if (cfg.style) dir = bank.select(*cfg.style).with_strength(cfg.lambda_s);

  const auto hash = cfg.hash();
  const fs::path out = cfg.out_dir;
  claim_output_dir(out, hash, force);

  const Scene scene = make_scene(cfg);
  std::vector<std::future<PageResult>> jobs;
  for (std::size_t p = 0; p < doc.pages.size(); ++p)
    jobs.push_back(std::async(std::launch::async, [&, p] {
      return run_page(cfg, doc.pages[p], int(p), scene, dir, Condition::full);
    }));

  GenerateSummary summary{out, hash, {}};
  json metrics;
  metrics["config_hash"] = hash;
  metrics["metric_note"] = "proxy metrics: ring-contrast WCAG coverage at 4.5:1 and latent-mean cosine";
  metrics["pages"] = json::object();
  std::vector<LatentState<double>> finals;
  std::vector<ForegroundMask> masks;

  auto emit = [&](const fs::path &name, const std::string &text) {
    write_text(out / name, text);
    summary.artifacts.push_back(out / name);
  };

  for (std::size_t p = 0; p < jobs.size(); ++p) {
    auto res = jobs[p].get();
    const auto stem = "page_" + std::to_string(p);
    emit(stem + "_latent.json", latent_to_json(res.final_state, hash).dump() + "\n");
    emit(stem + "_trajectory.json", record_to_json(res.record, int(p), hash).dump() + "\n");
    emit(stem + "_background.ppm", encode_ppm(res.background));
    emit(stem + "_composite.ppm", encode_ppm(res.composited));

    const auto boxes = text_contrast(res.composited, doc.pages[p]);
    json page = {{"config_hash", hash},
                 {"text_boxes", boxes.size()},
                 {"wcag_coverage", res.wcag ? json(*res.wcag) : json(nullptr)},
                 {"final_fg_energy", res.record.steps.back().energy_after},
                 {"foreground_tokens", res.mask.count()}};
    json ratios = json::array();
    for (const auto &b : boxes) ratios.push_back({{"box", b.box_index}, {"contrast", b.ratio}});
    page["box_contrast"] = std::move(ratios);
    metrics["pages"][std::to_string(p)] = std::move(page);
    finals.push_back(std::move(res.final_state));
    masks.push_back(std::move(res.mask));
  }

  if (finals.size() >= 2) {
    const Eigen::VectorXd s = dir ? dir->s() : Eigen::VectorXd(Eigen::VectorXd::Unit(cfg.d, 0));
    const auto stats = multipage_consistency(finals, masks, s);
    metrics["consistency"] = {
        {"mean_pairwise_cosine", stats.mean_pairwise_cosine ? json(*stats.mean_pairwise_cosine) : json(nullptr)},
        {"mean_cosine_with_s", dir && stats.mean_cosine_with_s ? json(*stats.mean_cosine_with_s) : json(nullptr)}};
  }
  emit("metrics.json", metrics.dump(2) + "\n");
  write_text(out / "manifest.json", json{{"config_hash", hash}, {"config", cfg.to_json()}}.dump(2) + "\n");
  return summary;
}

}  // namespace ssc
