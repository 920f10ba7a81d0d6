#pragma once

#include <filesystem>
#include <vector>

#include "ssc/config.hpp"

namespace ssc {

struct GenerateSummary {
  std::filesystem::path out_dir;
  std::string config_hash;
  std::vector<std::filesystem::path> artifacts;
};

/// Full pipeline over every page of the configured layout. Writes per page
/// the final latent, trajectory record, background and composited PPMs, and
/// one metrics report. Refuses to write into a directory holding results of
/// a different config unless `force`.
GenerateSummary generate(const RunConfig &cfg, bool force = false);

}  // namespace ssc
