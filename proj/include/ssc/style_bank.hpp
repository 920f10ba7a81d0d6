#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssc/common.hpp"
#include "ssc/latent.hpp"
#include "ssc/rng.hpp"

namespace ssc {

/// A cached unit direction in latent space with its strength. The vector
/// is fixed once constructed.
template <typename Scalar = double>
class StyleDirection {
 public:
  static constexpr double kUnitTolerance = 1e-9;

  StyleDirection(std::string label, Vector<Scalar> s, Scalar lambda_s)
      : label_(std::move(label)), s_(std::move(s)), lambda_s_(lambda_s) {
    if (s_.size() < 1) throw InvalidConfig("style direction must have d >= 1");
    if (!s_.allFinite() || std::abs(double(s_.norm()) - 1.0) > kUnitTolerance)
      throw ValidationError("style direction '" + label_ + "' is not unit norm");
    if (!(lambda_s_ >= Scalar(0))) throw InvalidConfig("lambda_s must be >= 0");
  }

  [[nodiscard]] const std::string &label() const { return label_; }
  [[nodiscard]] const Vector<Scalar> &s() const { return s_; }
  [[nodiscard]] Scalar lambda_s() const { return lambda_s_; }
  [[nodiscard]] Eigen::Index dim() const { return s_.size(); }

  /// Same direction, different strength.
  [[nodiscard]] StyleDirection with_strength(Scalar lambda_s) const {
    return StyleDirection(label_, s_, lambda_s);
  }

 private:
  std::string label_;
  Vector<Scalar> s_;
  Scalar lambda_s_;
};

/// Aggregate seed latents into one direction: normalized mean.
template <typename Scalar = double>
StyleDirection<Scalar> build_direction(std::string label,
                                       const std::vector<Vector<Scalar>> &seed_vectors,
                                       Scalar lambda_s = Scalar(0.8)) {
  if (seed_vectors.empty())
    throw InvalidConfig("style '" + label + "': no seed vectors");
  const Eigen::Index d = seed_vectors.front().size();
  Vector<Scalar> mean = Vector<Scalar>::Zero(d);
  for (const auto &v : seed_vectors) {
    require_dims(v.size() == d, "style '" + label + "': seed vector dims differ");
    mean += v;
  }
  mean /= Scalar(seed_vectors.size());
  const Scalar norm = mean.norm();
  if (!(norm > Scalar(0)) || !std::isfinite(double(norm)))
    throw DegenerateDirection("style '" + label + "': seed vectors average to zero");
  return StyleDirection<Scalar>(std::move(label), mean / norm, lambda_s);
}

inline const std::array<std::string_view, 7> &default_style_labels() {
  static constexpr std::array<std::string_view, 7> labels = {
      "geometric", "shapes", "textures", "colorful",
      "muted",     "professional", "real-and-natural"};
  return labels;
}

/// Deterministic stand-in for prompt-encoded latents: `count` standard
/// normal vectors keyed by (seed, label).
template <typename Scalar = double>
std::vector<Vector<Scalar>> label_seed_vectors(std::string_view label, Eigen::Index d,
                                               std::uint64_t seed, int count = 4) {
  std::vector<Vector<Scalar>> out;
  out.reserve(std::size_t(count));
  for (int i = 0; i < count; ++i) {
    const CounterRng rng(seed, mix64(streams::kStyleSeeds) ^ fnv1a(label), std::uint64_t(i));
    Vector<Scalar> v(d);
    for (Eigen::Index j = 0; j < d; ++j) v(j) = Scalar(rng.normal(std::uint64_t(j)));
    out.push_back(std::move(v));
  }
  return out;
}

template <typename Scalar = double>
class StyleBank {
 public:
  explicit StyleBank(Eigen::Index d) : d_(d) {
    if (d_ < 1) throw InvalidConfig("style bank dim must be >= 1");
  }

  void add(StyleDirection<Scalar> dir) {
    require_dims(dir.dim() == d_, "style '" + dir.label() + "' dim differs from bank dim");
    if (contains(dir.label()))
      throw ValidationError("duplicate style label '" + dir.label() + "'");
    entries_.push_back(std::move(dir));
  }

  [[nodiscard]] bool contains(std::string_view label) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto &e) { return e.label() == label; });
  }

  /// Returns the cached entry for `label`; throws NotFound listing what exists.
  [[nodiscard]] const StyleDirection<Scalar> &select(std::string_view label) const {
    for (const auto &e : entries_)
      if (e.label() == label) return e;
    std::string known;
    for (const auto &e : entries_) known += (known.empty() ? "" : ", ") + e.label();
    throw NotFound("unknown style '" + std::string(label) + "' (available: " + known + ")");
  }

  [[nodiscard]] const std::vector<StyleDirection<Scalar>> &entries() const { return entries_; }
  [[nodiscard]] Eigen::Index dim() const { return d_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }

 private:
  Eigen::Index d_;
  std::vector<StyleDirection<Scalar>> entries_;
};

/// Bank with one direction per label built from label_seed_vectors.
template <typename Scalar = double>
StyleBank<Scalar> build_bank(const std::vector<std::string> &labels, Eigen::Index d,
                             std::uint64_t seed, Scalar lambda_s = Scalar(0.8)) {
  StyleBank<Scalar> bank(d);
  for (const auto &label : labels)
    bank.add(build_direction<Scalar>(label, label_seed_vectors<Scalar>(label, d, seed),
                                     lambda_s));
  return bank;
}

template <typename Scalar = double>
StyleBank<Scalar> build_default_bank(Eigen::Index d, std::uint64_t seed,
                                     Scalar lambda_s = Scalar(0.8)) {
  std::vector<std::string> labels;
  for (auto l : default_style_labels()) labels.emplace_back(l);
  return build_bank<Scalar>(labels, d, seed, lambda_s);
}

/// Uniform displacement x_k <- x_k + lambda_s * s on every token.
template <typename Scalar>
LatentState<Scalar> inject_state(LatentState<Scalar> state, const StyleDirection<Scalar> &dir) {
  require_dims(state.dim() == dir.dim(), "inject_state: state dim != style dim");
  state.tokens.rowwise() += (dir.lambda_s() * dir.s()).transpose();
  return state;
}

/// Velocity-mode steering gain: min(lambda_s * (1 - t)^2, cap). Closed at
/// t = 1, opens as denoising proceeds.
template <typename Scalar>
Scalar style_gate(Scalar t, Scalar lambda_s, Scalar cap) {
  const Scalar u = Scalar(1) - t;
  return std::min(lambda_s * u * u, cap);
}

// JSON persistence (double precision).
StyleBank<double> parse_bank(std::string_view text);
StyleBank<double> load_bank(const std::filesystem::path &path);
std::string serialize_bank(const StyleBank<double> &bank);
void save_bank(const StyleBank<double> &bank, const std::filesystem::path &path);

}  // namespace ssc
