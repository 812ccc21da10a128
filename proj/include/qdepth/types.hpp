#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace qdepth {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Observations stored row-wise: one row per point, one column per coordinate.
using DataSet = Matrix<double>;

/// One depth value per query row, each in [0, 1].
template <typename Scalar = double>
using DepthVector = Vector<Scalar>;

/// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad shapes, out-of-range arguments, bad files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a result (singular covariance,
/// zero scale, non-convergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Throws InputError unless `data` has at least one row and column and only
/// finite entries.
template <typename Derived>
void check_dataset(const Eigen::MatrixBase<Derived>& data, const std::string& name) {
  if (data.rows() < 1 || data.cols() < 1) {
    throw InputError(name + ": data set must have at least one row and one column");
  }
  if (!data.allFinite()) {
    throw InputError(name + ": data set contains non-finite values");
  }
}

template <typename DerivedA, typename DerivedB>
void check_same_dim(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.cols()) {
    throw InputError("dimension mismatch: " + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.cols()) + " columns");
  }
}

}  // namespace qdepth
