#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ssc/controller.hpp"
#include "ssc/latent.hpp"

namespace ssc {

nlohmann::json latent_to_json(const LatentState<double> &state, const std::string &config_hash);
LatentState<double> latent_from_json(const nlohmann::json &j);
nlohmann::json record_to_json(const TrajectoryRecord<double> &rec, int page_id, const std::string &config_hash);

void write_text(const std::filesystem::path &path, const std::string &text);
std::string read_text(const std::filesystem::path &path);

}  // namespace ssc
