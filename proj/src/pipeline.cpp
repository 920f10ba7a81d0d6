#include "ssc/pipeline.hpp"

#include "ssc/rng.hpp"

namespace ssc {

using nlohmann::json;

std::string to_string(Condition c) {
  switch (c) {
    case Condition::full: return "full";
    case Condition::no_style_bank: return "no-style-bank";
    case Condition::no_ssc: return "no-ssc";
  }
  return "?";
}

MixtureField<double> palette_field(const ToyDecoder &dec, int components, double variance,
                                   std::uint64_t seed) {
  if (components < 1) throw InvalidConfig("palette: components must be >= 1");
  const Eigen::Index d = dec.W.cols();
  if (d < 3) throw InvalidConfig("palette: needs latent dim >= 3 to reach every tone");
  const Eigen::MatrixXd w = dec.W;
  // Minimum-norm right inverse and the projector onto null(W).
  const Eigen::MatrixXd pinv = w.transpose() * (w * w.transpose()).inverse();
  const Eigen::MatrixXd null_proj = Eigen::MatrixXd::Identity(d, d) - pinv * w;

  TokenMatrix<double> means(components, d);
  for (int i = 0; i < components; ++i) {
    const CounterRng rng(seed, streams::kPalette, std::uint64_t(i));
    std::uint64_t draw = 0;
    Rgb tone;
    for (int c = 0; c < 3; ++c) tone(c) = 0.08 + 0.42 * rng.uniform(draw++);
    Eigen::VectorXd z(d);
    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal(1000 + std::uint64_t(j));
    means.row(i) = (pinv * (tone - dec.bias) + null_proj * z).transpose();
  }
  return MixtureField<double>(Eigen::VectorXd::Constant(components, 1.0 / components),
                              std::move(means), variance);
}

namespace {

Eigen::VectorXd vector_from(const json &j, const char *what) {
  if (!j.is_array()) throw InvalidConfig(std::string("field spec: '") + what + "' must be an array");
  Eigen::VectorXd v(Eigen::Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(Eigen::Index(i)) = j[i].get<double>();
  return v;
}

Eigen::MatrixXd matrix_from(const json &j, const char *what) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw InvalidConfig(std::string("field spec: '") + what + "' must be an array of rows");
  Eigen::MatrixXd m(Eigen::Index(j.size()), Eigen::Index(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != j[0].size()) throw InvalidConfig(std::string("field spec: ragged '") + what + "'");
    for (std::size_t c = 0; c < j[r].size(); ++c) m(Eigen::Index(r), Eigen::Index(c)) = j[r][c].get<double>();
  }
  return m;
}

}  // namespace

VelocityField<double> build_field(const json &spec, const ToyDecoder &dec, int d) {
  const auto kind = spec.value("kind", std::string("palette"));
  VelocityField<double> field = ConstantField<double>{Eigen::VectorXd::Zero(d)};
  try {
    if (kind == "constant") {
      field = ConstantField<double>{spec.contains("c") ? vector_from(spec.at("c"), "c")
                                                       : Eigen::VectorXd::Zero(d)};
    } else if (kind == "linear") {
      field = LinearField<double>(matrix_from(spec.at("A"), "A"), vector_from(spec.at("mu"), "mu"),
                                  spec.value("cap", 10.0));
    } else if (kind == "mixture") {
      field = MixtureField<double>(vector_from(spec.at("weights"), "weights"),
                                   matrix_from(spec.at("means"), "means"),
                                   spec.value("variance", 1.0), spec.value("time_scaled", false));
    } else if (kind == "palette") {
      field = palette_field(dec, spec.value("components", 6), spec.value("variance", 0.25),
                            spec.value("seed", std::uint64_t(0)));
    } else {
      throw InvalidConfig("field spec: unknown kind '" + kind + "'");
    }
  } catch (const json::exception &e) {
    throw InvalidConfig(std::string("field spec: ") + e.what());
  }
  if (field_dim(field) != d)
    throw InvalidConfig("field spec: dimension " + std::to_string(field_dim(field)) +
                        " does not match latent dim " + std::to_string(d));
  return field;
}

Scene make_scene(const RunConfig &cfg) {
  cfg.validate();
  auto dec = ToyDecoder::seeded(cfg.d, cfg.decoder_seed);
  auto field = build_field(cfg.field, dec, cfg.d);
  return Scene{std::move(dec), std::move(field)};
}

PageResult run_page(const RunConfig &cfg, const LayoutPage &page, int page_id, const Scene &scene,
                    const std::optional<StyleDirection<double>> &dir, Condition condition) {
  cfg.validate();
  const bool ssc_on = condition != Condition::no_ssc;
  const auto style = condition == Condition::no_style_bank ? std::nullopt : dir;

  PageResult out;
  out.page_id = page_id;
  RasterOptions opts;
  opts.include_figures = cfg.include_figures;
  out.mask = rasterize_mask(page, cfg.grid_h, cfg.grid_w, cfg.boundary_weight, opts);

  Controls<double> controls;
  controls.lambda_s = cfg.lambda_s;
  controls.backing = BackingLatent<double>::zeros(cfg.d);
  controls.gating = ssc_on;
  controls.relaxation = ssc_on;
  controls.sample_cap = cfg.sample_cap;

  const auto init = init_state<double>(cfg.grid_h, cfg.grid_w, cfg.d, cfg.seed, out.mask,
                                       controls.backing, ssc_on ? cfg.lambda_s : 0.0, page_id);
  const auto schedule = make_schedule<double>(cfg.steps, cfg.style_mode, cfg.style_cap);
  auto result = run(scene.field, schedule, out.mask, style, init, controls);
  out.final_state = std::move(result.final_state);
  out.record = std::move(result.record);

  out.background = decode(out.final_state, scene.decoder, cfg.patch);
  out.background.config_hash = cfg.hash();
  out.composited = composite(out.background, page);
  out.wcag = wcag_coverage(out.composited, page);
  return out;
}

}  // namespace ssc
