#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssc {

/// Packed latent tokens, one token per row.
template <typename Scalar>
using TokenMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidConfig : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NotFound : Error {
  using Error::Error;
};

struct DegenerateDirection : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct NonFiniteState : Error {
  NonFiniteState(const std::string &what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step(step) {}
  std::size_t step;
};

inline void require_dims(bool ok, const std::string &what) {
  if (!ok) throw DimensionMismatch(what);
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived> &m) {
  return m.allFinite();
}

}  // namespace ssc
