#include "ssc/config.hpp"

#include <cstdio>

#include "ssc/rng.hpp"

namespace ssc {

using nlohmann::json;

StyleMode parse_style_mode(const std::string &s) {
  if (s == "state") return StyleMode::state;
  if (s == "velocity") return StyleMode::velocity;
  throw InvalidConfig("style mode must be 'state' or 'velocity', got '" + s + "'");
}

std::string to_string(StyleMode mode) { return mode == StyleMode::state ? "state" : "velocity"; }

void RunConfig::validate() const {
  if (steps < 1) throw InvalidConfig("steps must be >= 1");
  if (!(lambda_s >= 0.0 && lambda_s <= 1.0))
    throw InvalidConfig("lambda_s must lie in [0, 1], got " + std::to_string(lambda_s));
  if (!(style_cap > 0.0)) throw InvalidConfig("style_cap must be > 0");
  if (grid_h < 1 || grid_w < 1) throw InvalidConfig("grid dims must be >= 1");
  if (d < 1) throw InvalidConfig("latent dim must be >= 1");
  if (patch < 1) throw InvalidConfig("patch size must be >= 1");
  if (!(boundary_weight > 0.0 && boundary_weight <= 1.0))
    throw InvalidConfig("boundary_weight must lie in (0, 1]");
  if (!field.is_object() || !field.contains("kind"))
    throw InvalidConfig("field spec must be an object with a 'kind'");
}

json RunConfig::to_json() const {
  return {{"layout", layout_path},
          {"bank", bank_path},
          {"style", style ? json(*style) : json(nullptr)},
          {"steps", steps},
          {"lambda_s", lambda_s},
          {"style_mode", to_string(style_mode)},
          {"style_cap", style_cap},
          {"seed", seed},
          {"grid", {grid_h, grid_w}},
          {"dim", d},
          {"patch", patch},
          {"boundary_weight", boundary_weight},
          {"include_figures", include_figures},
          {"decoder_seed", decoder_seed},
          {"bank_seed", bank_seed},
          {"sample_cap", sample_cap},
          {"field", field}};
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json().dump())));
  return buf;
}

RunConfig merge_config(RunConfig base, const json &j) {
  if (!j.is_object()) throw InvalidConfig("run config must be a JSON object");
  try {
    if (j.contains("layout")) base.layout_path = j.at("layout").get<std::string>();
    if (j.contains("bank")) base.bank_path = j.at("bank").get<std::string>();
    if (j.contains("style")) {
      if (j.at("style").is_null()) base.style.reset();
      else base.style = j.at("style").get<std::string>();
    }
    if (j.contains("out")) base.out_dir = j.at("out").get<std::string>();
    if (j.contains("steps")) base.steps = j.at("steps").get<int>();
    if (j.contains("lambda_s")) base.lambda_s = j.at("lambda_s").get<double>();
    if (j.contains("style_mode")) base.style_mode = parse_style_mode(j.at("style_mode").get<std::string>());
    if (j.contains("style_cap")) base.style_cap = j.at("style_cap").get<double>();
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("grid")) {
      const auto &g = j.at("grid");
      if (!g.is_array() || g.size() != 2) throw InvalidConfig("grid must be [h, w]");
      base.grid_h = g[0].get<int>();
      base.grid_w = g[1].get<int>();
    }
    if (j.contains("dim")) base.d = j.at("dim").get<int>();
    if (j.contains("patch")) base.patch = j.at("patch").get<int>();
    if (j.contains("boundary_weight")) base.boundary_weight = j.at("boundary_weight").get<double>();
    if (j.contains("include_figures")) base.include_figures = j.at("include_figures").get<bool>();
    if (j.contains("decoder_seed")) base.decoder_seed = j.at("decoder_seed").get<std::uint64_t>();
    if (j.contains("bank_seed")) base.bank_seed = j.at("bank_seed").get<std::uint64_t>();
    if (j.contains("sample_cap")) base.sample_cap = j.at("sample_cap").get<std::size_t>();
    if (j.contains("field")) base.field = j.at("field");
  } catch (const json::exception &e) {
    throw InvalidConfig(std::string("run config: ") + e.what());
  }
  return base;
}

}  // namespace ssc
