#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ssc/config.hpp"
#include "ssc/controller.hpp"
#include "ssc/layout.hpp"
#include "ssc/render.hpp"
#include "ssc/style_bank.hpp"
#include "ssc/velocity.hpp"

namespace ssc {

/// Which parts of the control loop are active.
enum class Condition { full, no_style_bank, no_ssc };

std::string to_string(Condition c);

/// Gaussian-mixture score field whose component means decode (through `dec`)
/// to a palette of muted and deep background tones. Each mean also carries a
/// random component in the decoder's null space.
MixtureField<double> palette_field(const ToyDecoder &dec, int components, double variance,
                                   std::uint64_t seed);

/// Builds a field from its JSON spec: constant {c}, linear {A, mu, cap},
/// mixture {weights, means, variance, time_scaled} or palette
/// {components, variance, seed}.
VelocityField<double> build_field(const nlohmann::json &spec, const ToyDecoder &dec, int d);

/// Everything shared by the pages of one run.
struct Scene {
  ToyDecoder decoder;
  VelocityField<double> field;
};

Scene make_scene(const RunConfig &cfg);

struct PageResult {
  int page_id = 0;
  ForegroundMask mask;
  LatentState<double> final_state;
  TrajectoryRecord<double> record;
  PageImage background;
  PageImage composited;
  std::optional<double> wcag;
};

/// Mask, initialize, run and render one page.
PageResult run_page(const RunConfig &cfg, const LayoutPage &page, int page_id, const Scene &scene,
                    const std::optional<StyleDirection<double>> &dir,
                    Condition condition = Condition::full);

}  // namespace ssc
