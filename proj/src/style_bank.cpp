#include "ssc/style_bank.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace ssc {

using nlohmann::json;

StyleBank<double> parse_bank(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("style bank: malformed JSON: ") + e.what());
  }
  if (!root.is_array() || root.empty())
    throw ValidationError("style bank: expected a non-empty array of entries");

  std::optional<StyleBank<double>> bank;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const auto &e = root[i];
    const auto where = "style bank entry " + std::to_string(i);
    if (!e.is_object() || !e.contains("label") || !e.contains("s") || !e.at("s").is_array())
      throw ValidationError(where + ": needs 'label' and 's'");
    const auto label = e.at("label").get<std::string>();
    const double lambda_s = e.value("lambda_s", 0.8);
    const auto &js = e.at("s");
    Eigen::VectorXd s(Eigen::Index(js.size()));
    for (std::size_t j = 0; j < js.size(); ++j) {
      if (!js[j].is_number()) throw ValidationError(where + ": 's' must hold numbers");
      s(Eigen::Index(j)) = js[j].get<double>();
    }
    if (!bank) bank.emplace(s.size());
    bank->add(StyleDirection<double>(label, s, lambda_s));
  }
  return std::move(*bank);
}

StyleBank<double> load_bank(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open style bank '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bank(ss.str());
}

std::string serialize_bank(const StyleBank<double> &bank) {
  json root = json::array();
  for (const auto &e : bank.entries()) {
    json s = json::array();
    for (Eigen::Index j = 0; j < e.s().size(); ++j) s.push_back(e.s()(j));
    root.push_back({{"label", e.label()}, {"lambda_s", e.lambda_s()}, {"s", std::move(s)}});
  }
  return root.dump(2) + "\n";
}

void save_bank(const StyleBank<double> &bank, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write style bank '" + path.string() + "'");
  out << serialize_bank(bank);
  if (!out) throw Error("short write on '" + path.string() + "'");
}

}  // namespace ssc
