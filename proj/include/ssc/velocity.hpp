#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <variant>

#include "ssc/common.hpp"
#include "ssc/latent.hpp"

namespace ssc {

/// v(x, t) = c for every token.
template <typename Scalar = double>
struct ConstantField {
  Vector<Scalar> c;
};

/// v(x, t) = A (x - mu). The spectrum of A is bounded at construction so
/// trajectories over t in [0, 1] stay bounded.
template <typename Scalar = double>
class LinearField {
 public:
  LinearField(Matrix<Scalar> a, Vector<Scalar> mu, Scalar spectral_cap)
      : a_(std::move(a)), mu_(std::move(mu)), cap_(spectral_cap) {
    if (a_.rows() != a_.cols()) throw InvalidConfig("linear field: A must be square");
    require_dims(a_.rows() == mu_.size(), "linear field: A and mu dims differ");
    if (!a_.allFinite() || !mu_.allFinite())
      throw InvalidConfig("linear field: non-finite parameters");
    if (!(cap_ > Scalar(0))) throw InvalidConfig("linear field: spectral cap must be > 0");
    const Eigen::EigenSolver<Matrix<Scalar>> solver(a_, false);
    if (solver.info() != Eigen::Success)
      throw InvalidConfig("linear field: eigenvalue computation failed");
    for (const auto &ev : solver.eigenvalues()) {
      if (std::abs(ev.real()) > cap_)
        throw InvalidConfig("linear field: eigenvalue real part " +
                            std::to_string(double(ev.real())) + " exceeds cap " +
                            std::to_string(double(cap_)));
    }
  }

  [[nodiscard]] const Matrix<Scalar> &a() const { return a_; }
  [[nodiscard]] const Vector<Scalar> &mu() const { return mu_; }
  [[nodiscard]] Scalar spectral_cap() const { return cap_; }

 private:
  Matrix<Scalar> a_;
  Vector<Scalar> mu_;
  Scalar cap_;
};

/// Isotropic Gaussian mixture p(x) = sum_i w_i N(x; mu_i, sigma^2 I).
/// The velocity is the negated score, -grad log p(x), so dx/dt = -v moves
/// tokens uphill in density as t decreases. With time_scaled the velocity is
/// multiplied by t.
template <typename Scalar = double>
class MixtureField {
 public:
  MixtureField(Vector<Scalar> weights, TokenMatrix<Scalar> means, Scalar variance,
               bool time_scaled = false)
      : weights_(std::move(weights)),
        means_(std::move(means)),
        variance_(variance),
        time_scaled_(time_scaled) {
    if (weights_.size() < 1) throw InvalidConfig("mixture: need at least one component");
    require_dims(weights_.size() == means_.rows(), "mixture: weights/means count differ");
    if ((weights_.array() <= Scalar(0)).any())
      throw InvalidConfig("mixture: weights must be positive");
    if (std::abs(weights_.sum() - Scalar(1)) > Scalar(1e-9))
      throw InvalidConfig("mixture: weights must sum to 1");
    if (!(variance_ > Scalar(0))) throw InvalidConfig("mixture: variance must be > 0");
    if (!means_.allFinite()) throw InvalidConfig("mixture: non-finite means");
    log_weights_ = weights_.array().log().matrix();
  }

  [[nodiscard]] const Vector<Scalar> &weights() const { return weights_; }
  [[nodiscard]] const TokenMatrix<Scalar> &means() const { return means_; }
  [[nodiscard]] Scalar variance() const { return variance_; }
  [[nodiscard]] bool time_scaled() const { return time_scaled_; }
  [[nodiscard]] Eigen::Index dim() const { return means_.cols(); }

  /// Posterior component responsibilities at x, via log-sum-exp.
  template <typename Derived>
  Vector<Scalar> responsibilities(const Eigen::MatrixBase<Derived> &x) const {
    const Eigen::Index k = means_.rows();
    Vector<Scalar> logits(k);
    for (Eigen::Index i = 0; i < k; ++i)
      logits(i) = log_weights_(i) -
                  (x.transpose() - means_.row(i)).squaredNorm() / (Scalar(2) * variance_);
    const Scalar top = logits.maxCoeff();
    Vector<Scalar> r = (logits.array() - top).exp().matrix();
    return r / r.sum();
  }

  /// -grad_x log p(x) for a single token.
  template <typename Derived>
  Vector<Scalar> negated_score(const Eigen::MatrixBase<Derived> &x) const {
    const Vector<Scalar> r = responsibilities(x);
    Vector<Scalar> out = Vector<Scalar>::Zero(x.size());
    for (Eigen::Index i = 0; i < means_.rows(); ++i)
      out += r(i) * (x - means_.row(i).transpose());
    return out / variance_;
  }

 private:
  Vector<Scalar> weights_;
  Vector<Scalar> log_weights_;
  TokenMatrix<Scalar> means_;
  Scalar variance_;
  bool time_scaled_;
};

/// Stand-in for the learned drift. A backbone adapter would become a fourth
/// alternative behind the same eval().
template <typename Scalar = double>
using VelocityField =
    std::variant<ConstantField<Scalar>, LinearField<Scalar>, MixtureField<Scalar>>;

template <typename Scalar>
Eigen::Index field_dim(const VelocityField<Scalar> &field) {
  return std::visit(
      [](const auto &f) -> Eigen::Index {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, ConstantField<Scalar>>) return f.c.size();
        else if constexpr (std::is_same_v<F, LinearField<Scalar>>) return f.mu().size();
        else return f.dim();
      },
      field);
}

template <typename Scalar>
std::string field_kind(const VelocityField<Scalar> &field) {
  static constexpr const char *names[] = {"constant", "linear", "gaussian-mixture-score"};
  return names[field.index()];
}

/// Per-token velocity v(x_t, t), one row per token.
template <typename Scalar>
TokenMatrix<Scalar> eval(const VelocityField<Scalar> &field, const LatentState<Scalar> &state,
                         Scalar t) {
  if (!(t >= Scalar(0) && t <= Scalar(1))) throw InvalidConfig("eval: t outside [0, 1]");
  require_dims(field_dim(field) == state.dim(), "velocity field dim != state dim");
  const auto &x = state.tokens;
  return std::visit(
      [&](const auto &f) -> TokenMatrix<Scalar> {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, ConstantField<Scalar>>) {
          return f.c.transpose().replicate(x.rows(), 1);
        } else if constexpr (std::is_same_v<F, LinearField<Scalar>>) {
          return (x.rowwise() - f.mu().transpose()) * f.a().transpose();
        } else {
          TokenMatrix<Scalar> v(x.rows(), x.cols());
          for (Eigen::Index k = 0; k < x.rows(); ++k)
            v.row(k) = f.negated_score(x.row(k).transpose()).transpose();
          if (f.time_scaled()) v *= t;
          return v;
        }
      },
      field);
}

template <typename Scalar>
struct Decomposition {
  TokenMatrix<Scalar> parallel;
  TokenMatrix<Scalar> orthogonal;
};

/// Splits each velocity row into its component along unit s and the rest.
template <typename Scalar>
Decomposition<Scalar> decompose(const TokenMatrix<Scalar> &v, const Vector<Scalar> &s) {
  require_dims(v.cols() == s.size(), "decompose: direction dim != velocity dim");
  if (std::abs(s.norm() - Scalar(1)) > Scalar(1e-9))
    throw InvalidConfig("decompose: direction is not unit norm");
  const Vector<Scalar> coeff = v * s;
  Decomposition<Scalar> out;
  out.parallel = coeff * s.transpose();
  out.orthogonal = v - out.parallel;
  return out;
}

}  // namespace ssc
