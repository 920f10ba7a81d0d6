#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "ssc/controller.hpp"

namespace ssc {

/// Everything a generate or verify run depends on. Validated before use;
/// its hash is stamped on every artifact.
struct RunConfig {
  std::string layout_path;
  std::string bank_path;
  std::optional<std::string> style;
  std::string out_dir = "ssc_out";

  int steps = 100;
  double lambda_s = 0.8;
  StyleMode style_mode = StyleMode::velocity;
  double style_cap = 1.0;
  std::uint64_t seed = 1;
  int grid_h = 32;
  int grid_w = 24;
  int d = 16;
  int patch = 8;
  double boundary_weight = 0.5;
  bool include_figures = true;
  std::uint64_t decoder_seed = 0;
  std::uint64_t bank_seed = 0;
  std::size_t sample_cap = 64;
  nlohmann::json field = default_field_spec();

  static nlohmann::json default_field_spec() {
    return {{"kind", "palette"}, {"components", 6}, {"variance", 0.25}, {"seed", 0}};
  }

  /// Throws InvalidConfig naming the first bad field.
  void validate() const;

  /// Semantic content only (no output location or overwrite flag).
  [[nodiscard]] nlohmann::json to_json() const;
  /// 16 hex digits of FNV-1a over the canonical JSON form.
  [[nodiscard]] std::string hash() const;
};

/// Applies the keys present in `j` on top of `base`.
RunConfig merge_config(RunConfig base, const nlohmann::json &j);

StyleMode parse_style_mode(const std::string &s);
std::string to_string(StyleMode mode);

}  // namespace ssc
