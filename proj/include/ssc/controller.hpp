#pragma once

#include <functional>
#include <type_traits>
#include <optional>
#include <vector>

#include "ssc/common.hpp"
#include "ssc/latent.hpp"
#include "ssc/style_bank.hpp"
#include "ssc/velocity.hpp"

namespace ssc {

enum class StyleMode { state, velocity };

/// Uniform time grid t_i = 1 - i/S for i = 0..S-1.
template <typename Scalar = double>
struct Schedule {
  int steps = 100;
  std::vector<Scalar> t_grid;
  StyleMode style_mode = StyleMode::velocity;
  Scalar style_cap = Scalar(1);

  [[nodiscard]] Scalar dt() const { return Scalar(1) / Scalar(steps); }
};

template <typename Scalar = double>
Schedule<Scalar> make_schedule(int steps, StyleMode mode = StyleMode::velocity,
                               Scalar style_cap = Scalar(1)) {
  if (steps < 1) throw InvalidConfig("steps must be >= 1");
  if (!(style_cap > Scalar(0))) throw InvalidConfig("style cap must be > 0");
  Schedule<Scalar> s;
  s.steps = steps;
  s.style_mode = mode;
  s.style_cap = style_cap;
  s.t_grid.resize(std::size_t(steps));
  for (int i = 0; i < steps; ++i) s.t_grid[std::size_t(i)] = Scalar(steps - i) / Scalar(steps);
  return s;
}

/// Strengths and switches of the control loop. Disabling both gating and
/// relaxation gives uncontrolled dynamics.
template <typename Scalar = double>
struct Controls {
  Scalar lambda_s = Scalar(0.8);
  BackingLatent<Scalar> backing;
  bool gating = true;
  bool relaxation = true;
  /// Foreground tokens tracked individually in the record.
  std::size_t sample_cap = 64;
};

template <typename Scalar = double>
struct StepRecord {
  Scalar t{};
  Scalar alpha{};
  Scalar gamma{};
  Scalar style_gain{};
  Scalar fg_update_norm{};
  Scalar bg_update_norm{};
  Scalar energy_before{};
  Scalar energy_after{};
  Scalar temperature{};
  Scalar effective_temperature{};
  std::vector<Scalar> ungated_norm;
  std::vector<Scalar> gated_norm;
  std::vector<Scalar> lyapunov_before;
  std::vector<Scalar> lyapunov_after;
};

template <typename Scalar = double>
struct TrajectoryRecord {
  Scalar lambda_s{};
  Scalar dt{};
  bool gating = true;
  bool relaxation = true;
  bool uniform_weights = true;
  std::vector<Eigen::Index> sample_tokens;
  std::vector<double> sample_weights;
  std::vector<StepRecord<Scalar>> steps;
};

/// Foreground gating schedule (1 - t)^2.
template <typename Scalar>
Scalar alpha(Scalar t) {
  if (!(t >= Scalar(0) && t <= Scalar(1))) throw InvalidConfig("alpha: t outside [0, 1]");
  const Scalar u = Scalar(1) - t;
  return u * u;
}

/// Relaxation strength lambda_s * alpha(t).
template <typename Scalar>
Scalar gamma(Scalar t, Scalar lambda_s) {
  if (!(lambda_s >= Scalar(0) && lambda_s <= Scalar(1)))
    throw InvalidConfig("gamma: lambda_s outside [0, 1]");
  return lambda_s * alpha(t);
}

/// Foreground rows scaled by (1 - a); background rows untouched.
template <typename Scalar>
TokenMatrix<Scalar> gate_velocity(TokenMatrix<Scalar> v, const ForegroundMask &mask, Scalar a) {
  if (!(a >= Scalar(0) && a <= Scalar(1))) throw InvalidConfig("gate: factor outside [0, 1]");
  require_dims(mask.size() == std::size_t(v.rows()), "gate: mask length != token count");
  const Scalar keep = Scalar(1) - a;
  for (Eigen::Index k = 0; k < v.rows(); ++k)
    if (mask.is_foreground(std::size_t(k))) v.row(k) *= keep;
  return v;
}

/// Convex pull of foreground token k toward b with strength g * weight_k.
template <typename Scalar>
LatentState<Scalar> relax_foreground(LatentState<Scalar> state, const ForegroundMask &mask,
                                     Scalar g, const BackingLatent<Scalar> &backing) {
  if (!(g >= Scalar(0) && g <= Scalar(1))) throw InvalidConfig("relax: g outside [0, 1]");
  require_dims(mask.size() == std::size_t(state.num_tokens()), "relax: mask length != token count");
  require_dims(backing.b.size() == state.dim(), "relax: backing dim != state dim");
  if (g == Scalar(0)) return state;
  const auto b = backing.b.transpose();
  for (Eigen::Index k = 0; k < state.num_tokens(); ++k) {
    if (!mask.is_foreground(std::size_t(k))) continue;
    const Scalar keep = Scalar(1) - g * Scalar(mask.interior_weight[std::size_t(k)]);
    state.tokens.row(k) = b + keep * (state.tokens.row(k) - b);
  }
  return state;
}

/// x <- x - v dt, t <- t - dt.
template <typename Scalar>
LatentState<Scalar> euler_step(LatentState<Scalar> state, const TokenMatrix<Scalar> &v, Scalar dt) {
  if (!(dt > Scalar(0))) throw InvalidConfig("euler: dt must be > 0");
  if (dt > state.t + Scalar(1e-12)) throw InvalidConfig("euler: step overshoots t = 0");
  require_dims(v.rows() == state.tokens.rows() && v.cols() == state.tokens.cols(),
               "euler: velocity shape != state shape");
  state.tokens -= v * dt;
  state.t = std::max(state.t - dt, Scalar(0));
  return state;
}

/// T_fg = (1 - g) T.
template <typename Scalar>
Scalar effective_temperature(Scalar /*t*/, Scalar g, Scalar temperature) {
  return (Scalar(1) - g) * temperature;
}

/// Nominal cooling schedule T(t) = t.
template <typename Scalar>
Scalar nominal_temperature(Scalar t) {
  return t;
}

namespace detail {

inline std::vector<Eigen::Index> sample_foreground(const ForegroundMask &mask, std::size_t cap) {
  std::vector<Eigen::Index> fg;
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask.is_foreground(k)) fg.push_back(Eigen::Index(k));
  if (fg.size() <= cap) return fg;
  std::vector<Eigen::Index> out(cap);
  for (std::size_t j = 0; j < cap; ++j) out[j] = fg[j * fg.size() / cap];
  return out;
}

template <typename Scalar>
Scalar rows_norm(const TokenMatrix<Scalar> &v, const ForegroundMask &mask, bool foreground) {
  Scalar acc(0);
  for (Eigen::Index k = 0; k < v.rows(); ++k)
    if (mask.is_foreground(std::size_t(k)) == foreground) acc += v.row(k).squaredNorm();
  return std::sqrt(acc);
}

}  // namespace detail

template <typename Scalar>
struct RunResult {
  LatentState<Scalar> final_state;
  TrajectoryRecord<Scalar> record;
};

/// Controlled denoising loop. Per step at t_i:
///   v = eval(field, x, t_i), minus style_gate(t_i) * s in velocity mode
///   v <- gate_velocity(v, m, alpha(t_i))
///   x <- euler_step(x, v, dt)
///   x <- relax_foreground(x, m, gamma(t_i), b)
/// In state mode the style displacement is applied once before step 0.
/// Style displacement uses dir.lambda_s(); relaxation uses controls.lambda_s.
/// `on_step` sees the state after each completed step.
template <typename Scalar>
RunResult<Scalar> run(const VelocityField<Scalar> &field, const Schedule<Scalar> &schedule,
                      const ForegroundMask &mask,
                      const std::type_identity_t<std::optional<StyleDirection<Scalar>>> &dir,
                      const LatentState<Scalar> &init, const Controls<Scalar> &controls,
                      const std::type_identity_t<std::function<void(std::size_t, const LatentState<Scalar> &)>>
                          &on_step = {}) {
  if (schedule.steps < 1 || schedule.t_grid.size() != std::size_t(schedule.steps))
    throw InvalidConfig("run: invalid schedule");
  if (std::abs(double(init.t - schedule.t_grid.front())) > 1e-12)
    throw InvalidConfig("run: initial state must be at t = 1");
  if (!(controls.lambda_s >= Scalar(0) && controls.lambda_s <= Scalar(1)))
    throw InvalidConfig("run: lambda_s outside [0, 1]");
  require_dims(mask.size() == std::size_t(init.num_tokens()), "run: mask length != token count");
  require_dims(controls.backing.b.size() == init.dim(), "run: backing dim != state dim");
  if (dir) require_dims(dir->dim() == init.dim(), "run: style dim != state dim");
  mask.validate();

  const Scalar dt = schedule.dt();
  const auto n_steps = std::size_t(schedule.steps);

  RunResult<Scalar> out;
  auto &rec = out.record;
  rec.lambda_s = controls.lambda_s;
  rec.dt = dt;
  rec.gating = controls.gating;
  rec.relaxation = controls.relaxation;
  rec.sample_tokens = detail::sample_foreground(mask, controls.sample_cap);
  for (auto k : rec.sample_tokens) rec.sample_weights.push_back(mask.interior_weight[std::size_t(k)]);
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask.is_foreground(k) && mask.interior_weight[k] != 1.0) rec.uniform_weights = false;
  rec.steps.reserve(n_steps);

  LatentState<Scalar> x = init;
  if (dir && schedule.style_mode == StyleMode::state) x = inject_state(std::move(x), *dir);

  const auto &b = controls.backing;
  for (std::size_t i = 0; i < n_steps; ++i) {
    StepRecord<Scalar> step;
    const Scalar t = schedule.t_grid[i];
    step.t = t;

    TokenMatrix<Scalar> v = eval(field, x, t);
    if (dir && schedule.style_mode == StyleMode::velocity) {
      step.style_gain = style_gate(t, dir->lambda_s(), schedule.style_cap);
      v.rowwise() -= (step.style_gain * dir->s()).transpose();
    }
    for (auto k : rec.sample_tokens) step.ungated_norm.push_back(v.row(k).norm());

    step.alpha = controls.gating ? alpha(t) : Scalar(0);
    v = gate_velocity(std::move(v), mask, step.alpha);
    for (auto k : rec.sample_tokens) step.gated_norm.push_back(v.row(k).norm());
    step.fg_update_norm = detail::rows_norm(v, mask, true) * dt;
    step.bg_update_norm = detail::rows_norm(v, mask, false) * dt;

    x = euler_step(std::move(x), v, dt);
    x.t = schedule.t_grid.size() > i + 1 ? schedule.t_grid[i + 1] : Scalar(0);

    step.gamma = controls.relaxation ? gamma(t, controls.lambda_s) : Scalar(0);
    step.energy_before = foreground_energy(x, mask, b);
    for (auto k : rec.sample_tokens) step.lyapunov_before.push_back(lyapunov(x.tokens.row(k), b));
    x = relax_foreground(std::move(x), mask, step.gamma, b);
    step.energy_after = foreground_energy(x, mask, b);
    for (auto k : rec.sample_tokens) step.lyapunov_after.push_back(lyapunov(x.tokens.row(k), b));

    step.temperature = nominal_temperature(t);
    step.effective_temperature = effective_temperature(t, step.gamma, step.temperature);

    if (!x.tokens.allFinite() || !std::isfinite(double(step.energy_after)))
      throw NonFiniteState("run: non-finite latent values", i);
    rec.steps.push_back(std::move(step));
    if (on_step) on_step(i, x);
  }
  out.final_state = std::move(x);
  return out;
}

}  // namespace ssc
