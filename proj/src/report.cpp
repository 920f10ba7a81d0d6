#include "ssc/report.hpp"

#include <fstream>
#include <sstream>

namespace ssc {

using nlohmann::json;

json latent_to_json(const LatentState<double> &state, const std::string &config_hash) {
  json tokens = json::array();
  for (Eigen::Index k = 0; k < state.num_tokens(); ++k) {
    json row = json::array();
    for (Eigen::Index j = 0; j < state.dim(); ++j) row.push_back(state.tokens(k, j));
    tokens.push_back(std::move(row));
  }
  return {{"config_hash", config_hash},
          {"page_id", state.page_id},
          {"seed", state.seed},
          {"t", state.t},
          {"grid", {state.grid_h, state.grid_w}},
          {"dim", state.dim()},
          {"tokens", std::move(tokens)}};
}

LatentState<double> latent_from_json(const json &j) {
  LatentState<double> s;
  s.page_id = j.at("page_id").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.t = j.at("t").get<double>();
  s.grid_h = j.at("grid")[0].get<int>();
  s.grid_w = j.at("grid")[1].get<int>();
  const auto d = j.at("dim").get<Eigen::Index>();
  const auto &tokens = j.at("tokens");
  require_dims(tokens.size() == std::size_t(s.grid_h) * std::size_t(s.grid_w), "latent: token count != grid");
  s.tokens.resize(Eigen::Index(tokens.size()), d);
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    require_dims(tokens[k].size() == std::size_t(d), "latent: ragged token row");
    for (Eigen::Index c = 0; c < d; ++c) s.tokens(Eigen::Index(k), c) = tokens[k][std::size_t(c)].get<double>();
  }
  return s;
}

json record_to_json(const TrajectoryRecord<double> &rec, int page_id, const std::string &config_hash) {
  json steps = json::array();
  for (const auto &st : rec.steps) {
    steps.push_back({{"t", st.t},
                     {"alpha", st.alpha},
                     {"gamma", st.gamma},
                     {"style_gain", st.style_gain},
                     {"fg_update_norm", st.fg_update_norm},
                     {"bg_update_norm", st.bg_update_norm},
                     {"energy_before", st.energy_before},
                     {"energy_after", st.energy_after},
                     {"temperature", st.temperature},
                     {"effective_temperature", st.effective_temperature},
                     {"ungated_norm", st.ungated_norm},
                     {"gated_norm", st.gated_norm},
                     {"lyapunov_before", st.lyapunov_before},
                     {"lyapunov_after", st.lyapunov_after}});
  }
  return {{"config_hash", config_hash},
          {"page_id", page_id},
          {"lambda_s", rec.lambda_s},
          {"dt", rec.dt},
          {"gating", rec.gating},
          {"relaxation", rec.relaxation},
          {"sample_tokens", rec.sample_tokens},
          {"sample_weights", rec.sample_weights},
          {"steps", std::move(steps)}};
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("short write on '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ssc
