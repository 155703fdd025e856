#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace illumdepth {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ILLUMDEPTH_ERROR(Name)                \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  };

// Geometry failures map to CLI exit code 3.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class EmptyRegion : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class DegenerateRegion : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class SingularScatter : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

ILLUMDEPTH_ERROR(DimensionMismatch)
ILLUMDEPTH_ERROR(DomainError)
ILLUMDEPTH_ERROR(ModeUnsupported)
ILLUMDEPTH_ERROR(QuantileUndefined)
ILLUMDEPTH_ERROR(InsufficientTail)
ILLUMDEPTH_ERROR(InflationOverflow)
ILLUMDEPTH_ERROR(ConfigError)

#undef ILLUMDEPTH_ERROR

// Immutable n x d sample. Rows are points.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(RowMatrix points);
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  int n() const { return static_cast<int>(points_.rows()); }
  int d() const { return static_cast<int>(points_.cols()); }
  bool empty() const { return points_.rows() == 0; }

  const RowMatrix& matrix() const { return points_; }
  const double* row_data(int i) const { return points_.data() + static_cast<std::ptrdiff_t>(i) * points_.cols(); }
  Vector point(int i) const { return points_.row(i).transpose(); }

  Vector mean() const;
  PointCloud transformed(const Matrix& A, const Vector& b) const;
  PointCloud concatenated(const PointCloud& other) const;
  PointCloud subset(const std::vector<int>& indices) const;

 private:
  RowMatrix points_;
};

void require_dim(const Vector& x, int d, const char* where);

}  // namespace illumdepth
