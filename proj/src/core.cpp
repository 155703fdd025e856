#include "illumdepth/core.hpp"

#include <cmath>

namespace illumdepth {

PointCloud::PointCloud(RowMatrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) throw DegenerateInput("point cloud needs n >= 1 and d >= 1");
  if (!points_.allFinite()) throw DomainError("point cloud contains non-finite entries");
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DegenerateInput("no points");
  const auto d = rows.front().size();
  RowMatrix m(static_cast<int>(rows.size()), static_cast<int>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw DimensionMismatch("ragged point rows");
    for (std::size_t j = 0; j < d; ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  }
  return PointCloud(std::move(m));
}

Vector PointCloud::mean() const { return points_.colwise().mean().transpose(); }

PointCloud PointCloud::transformed(const Matrix& A, const Vector& b) const {
  if (A.cols() != d() || A.rows() != b.size()) throw DimensionMismatch("affine map does not match point dimension");
  RowMatrix out = points_ * A.transpose();
  out.rowwise() += b.transpose();
  return PointCloud(std::move(out));
}

PointCloud PointCloud::concatenated(const PointCloud& other) const {
  if (other.d() != d()) throw DimensionMismatch("cannot concatenate clouds of different dimension");
  RowMatrix out(n() + other.n(), d());
  out.topRows(n()) = points_;
  out.bottomRows(other.n()) = other.points_;
  return PointCloud(std::move(out));
}

PointCloud PointCloud::subset(const std::vector<int>& indices) const {
  RowMatrix out(static_cast<int>(indices.size()), d());
  for (std::size_t i = 0; i < indices.size(); ++i) out.row(static_cast<int>(i)) = points_.row(indices[i]);
  return PointCloud(std::move(out));
}

void require_dim(const Vector& x, int d, const char* where) {
  if (x.size() != d)
    throw DimensionMismatch(std::string(where) + ": expected dimension " + std::to_string(d) + ", got " +
                            std::to_string(x.size()));
}

}  // namespace illumdepth
