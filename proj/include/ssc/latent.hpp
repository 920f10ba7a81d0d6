#pragma once

#include <cstdint>
#include <vector>

#include "ssc/common.hpp"
#include "ssc/rng.hpp"

namespace ssc {

/// System state x_t: N = grid_h * grid_w tokens of dimension d at time t.
/// t runs from 1 (start of denoising) down to 0.
template <typename Scalar = double>
struct LatentState {
  TokenMatrix<Scalar> tokens;
  Scalar t = Scalar(1);
  int page_id = 0;
  std::uint64_t seed = 0;
  int grid_h = 0;
  int grid_w = 0;

  [[nodiscard]] Eigen::Index num_tokens() const { return tokens.rows(); }
  [[nodiscard]] Eigen::Index dim() const { return tokens.cols(); }
};

/// Neutral reference point foreground tokens relax toward. Zero by default.
template <typename Scalar = double>
struct BackingLatent {
  Vector<Scalar> b;

  static BackingLatent zeros(Eigen::Index d) { return {Vector<Scalar>::Zero(d)}; }
};

/// Binary foreground indicator plus interior confidence weights.
/// weight is 0 off the mask and in (0, 1] on it.
struct ForegroundMask {
  std::vector<std::uint8_t> m;
  std::vector<double> interior_weight;

  static ForegroundMask empty(std::size_t n) {
    return {std::vector<std::uint8_t>(n, 0), std::vector<double>(n, 0.0)};
  }
  static ForegroundMask full(std::size_t n) {
    return {std::vector<std::uint8_t>(n, 1), std::vector<double>(n, 1.0)};
  }

  [[nodiscard]] std::size_t size() const { return m.size(); }
  [[nodiscard]] std::size_t count() const {
    std::size_t c = 0;
    for (auto v : m) c += v ? 1 : 0;
    return c;
  }
  [[nodiscard]] bool is_foreground(std::size_t k) const { return m[k] != 0; }

  /// Throws ValidationError when the weight invariants do not hold.
  void validate() const {
    if (interior_weight.size() != m.size())
      throw ValidationError("mask weight length differs from indicator length");
    for (std::size_t k = 0; k < m.size(); ++k) {
      const double w = interior_weight[k];
      if (m[k] == 0 && w != 0.0)
        throw ValidationError("nonzero interior weight on background token " +
                              std::to_string(k));
      if (m[k] != 0 && !(w > 0.0 && w <= 1.0))
        throw ValidationError("foreground weight outside (0,1] at token " +
                              std::to_string(k));
    }
  }
};

/// Background-aware initialization. Every token draws standard normal noise
/// from its own substream; foreground tokens are then blended toward b with
/// weight lambda_s, so lambda_s = 0 is plain Gaussian initialization.
template <typename Scalar = double>
LatentState<Scalar> init_state(int grid_h, int grid_w, int d, std::uint64_t seed,
                               const ForegroundMask &mask,
                               const BackingLatent<Scalar> &backing,
                               Scalar lambda_s, int page_id = 0) {
  if (grid_h < 1 || grid_w < 1 || d < 1)
    throw InvalidConfig("grid dimensions and latent dim must be >= 1");
  if (!(lambda_s >= Scalar(0) && lambda_s <= Scalar(1)))
    throw InvalidConfig("lambda_s must lie in [0, 1]");
  const Eigen::Index n = Eigen::Index(grid_h) * grid_w;
  require_dims(mask.size() == std::size_t(n), "mask length != grid_h*grid_w");
  require_dims(backing.b.size() == d, "backing latent dim != d");

  LatentState<Scalar> state;
  state.tokens.resize(n, d);
  state.t = Scalar(1);
  state.page_id = page_id;
  state.seed = seed;
  state.grid_h = grid_h;
  state.grid_w = grid_w;

  const std::uint64_t stream = mix64(streams::kInitNoise) ^ std::uint64_t(page_id);
  for (Eigen::Index k = 0; k < n; ++k) {
    const CounterRng rng(seed, stream, std::uint64_t(k));
    for (Eigen::Index j = 0; j < d; ++j)
      state.tokens(k, j) = static_cast<Scalar>(rng.normal(std::uint64_t(j)));
    if (mask.is_foreground(std::size_t(k))) {
      state.tokens.row(k) = (Scalar(1) - lambda_s) * state.tokens.row(k) +
                            lambda_s * backing.b.transpose();
    }
  }
  return state;
}

/// V(x) = ||x - b||^2.
template <typename Derived, typename Scalar>
Scalar lyapunov(const Eigen::MatrixBase<Derived> &token,
                const BackingLatent<Scalar> &backing) {
  require_dims(token.size() == backing.b.size(), "token dim != backing dim");
  Scalar v(0);
  for (Eigen::Index j = 0; j < token.size(); ++j) {
    const Scalar diff = token(j) - backing.b(j);
    v += diff * diff;
  }
  return v;
}

/// E_fg = sum over masked tokens of V(token).
template <typename Scalar>
Scalar foreground_energy(const LatentState<Scalar> &state, const ForegroundMask &mask,
                         const BackingLatent<Scalar> &backing) {
  require_dims(mask.size() == std::size_t(state.num_tokens()),
               "mask length != token count");
  require_dims(state.dim() == backing.b.size(), "state dim != backing dim");
  Scalar e(0);
  for (Eigen::Index k = 0; k < state.num_tokens(); ++k)
    if (mask.is_foreground(std::size_t(k))) e += lyapunov(state.tokens.row(k), backing);
  return e;
}

}  // namespace ssc
