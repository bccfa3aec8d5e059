#pragma once

// Point-cloud side of the pipeline: calibrated camera->global transforms,
// concatenation of views, a-priori box filtering and axis-aligned sizing.
// Clouds are in meters; the global frame has z pointing up.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "gripkit/errors.hpp"

namespace gripkit {

inline constexpr const char* kGlobalFrame = "global";

template <typename Scalar>
struct PointCloud {
  using Points = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;

  Points points = Points(3, 0);
  std::string frame_id = kGlobalFrame;

  Eigen::Index size() const { return points.cols(); }
  bool empty() const { return points.cols() == 0; }
};

using Cloud = PointCloud<double>;

/// Homogeneous camera->global transform.
template <typename Scalar>
struct ScenePose {
  Eigen::Matrix<Scalar, 4, 4> transform = Eigen::Matrix<Scalar, 4, 4>::Identity();

  auto rotation() const { return transform.template topLeftCorner<3, 3>(); }
  auto translation() const { return transform.template topRightCorner<3, 1>(); }
};

template <typename Scalar>
struct RegionOfInterest {
  Eigen::Matrix<Scalar, 3, 1> min_corner;
  Eigen::Matrix<Scalar, 3, 1> max_corner;

  bool contains(const Eigen::Matrix<Scalar, 3, 1>& p) const {
    return (p.array() >= min_corner.array()).all() && (p.array() <= max_corner.array()).all();
  }
};

enum class Axis { X = 0, Y = 1, Z = 2 };

template <typename Scalar>
struct ObjectEstimate {
  Eigen::Matrix<Scalar, 3, 1> centroid = Eigen::Matrix<Scalar, 3, 1>::Zero();
  Eigen::Matrix<Scalar, 3, 1> extents = Eigen::Matrix<Scalar, 3, 1>::Zero();
  std::size_t point_count = 0;
  Axis dominant_axis = Axis::X;

  Scalar height() const { return extents.z(); }
};

using Estimate = ObjectEstimate<double>;

/// argmax of the extents; ties resolve X before Y before Z.
template <typename Derived>
Axis dominant_axis(const Eigen::MatrixBase<Derived>& extents) {
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (extents(i) > extents(best)) best = i;
  }
  return static_cast<Axis>(best);
}

template <typename Scalar>
void validate(const ScenePose<Scalar>& pose, Scalar tolerance = Scalar(1e-6)) {
  using std::abs;
  const auto& m = pose.transform;
  if (!m.allFinite()) throw InvalidPose("pose contains non-finite entries");
  if (m(3, 0) != Scalar(0) || m(3, 1) != Scalar(0) || m(3, 2) != Scalar(0) || m(3, 3) != Scalar(1)) {
    throw InvalidPose("pose bottom row must be (0, 0, 0, 1)");
  }
  const Eigen::Matrix<Scalar, 3, 3> r = pose.rotation();
  const Eigen::Matrix<Scalar, 3, 3> gram = r.transpose() * r;
  if ((gram - Eigen::Matrix<Scalar, 3, 3>::Identity()).cwiseAbs().maxCoeff() > tolerance) {
    throw InvalidPose("pose rotation block is not orthonormal");
  }
}

template <typename Scalar>
void validate(const RegionOfInterest<Scalar>& roi) {
  if (!roi.min_corner.allFinite() || !roi.max_corner.allFinite() ||
      !(roi.min_corner.array() < roi.max_corner.array()).all()) {
    throw InvalidRange("region of interest needs min < max on every axis");
  }
}

/// p' = R p + t for every point; the result is labeled with the global frame.
template <typename Scalar>
PointCloud<Scalar> transform_cloud(const PointCloud<Scalar>& cloud, const ScenePose<Scalar>& pose) {
  validate(pose);
  PointCloud<Scalar> out;
  out.points = (pose.rotation() * cloud.points).colwise() + pose.translation();
  out.frame_id = kGlobalFrame;
  return out;
}

/// Concatenation of views sharing one frame.
template <typename Scalar>
PointCloud<Scalar> merge_clouds(std::span<const PointCloud<Scalar>> clouds) {
  PointCloud<Scalar> out;
  if (clouds.empty()) return out;
  Eigen::Index total = 0;
  for (const auto& c : clouds) {
    if (c.frame_id != clouds.front().frame_id) {
      throw FrameMismatch("cannot merge '" + c.frame_id + "' into '" + clouds.front().frame_id + "'");
    }
    total += c.size();
  }
  out.frame_id = clouds.front().frame_id;
  out.points.resize(3, total);
  Eigen::Index col = 0;
  for (const auto& c : clouds) {
    out.points.middleCols(col, c.size()) = c.points;
    col += c.size();
  }
  return out;
}

/// Keeps the points inside `roi`, bounds inclusive.
template <typename Scalar>
PointCloud<Scalar> crop_cloud(const PointCloud<Scalar>& cloud, const RegionOfInterest<Scalar>& roi) {
  validate(roi);
  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<std::size_t>(cloud.size()));
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    if (roi.contains(cloud.points.col(i))) keep.push_back(i);
  }
  PointCloud<Scalar> out;
  out.frame_id = cloud.frame_id;
  out.points = cloud.points(Eigen::all, keep);
  return out;
}

namespace detail {

// Linear interpolation between closest ranks over sorted samples.
template <typename Scalar>
Scalar quantile_sorted(const std::vector<Scalar>& sorted, Scalar p) {
  using std::floor;
  const Scalar pos = p * Scalar(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const Scalar frac = pos - Scalar(i);
  if (frac == Scalar(0)) return sorted[i];
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

}  // namespace detail

/// Percentile-trimmed axis-aligned extents. Per axis the range is
/// [q(p), q(1 - p)]; the centroid averages the points inside all three ranges,
/// summed in lexicographic order so the result does not depend on point order.
template <typename Scalar>
ObjectEstimate<Scalar> estimate_object(const PointCloud<Scalar>& cloud, Scalar trim_percentile = Scalar(0.01)) {
  if (!(trim_percentile >= Scalar(0) && trim_percentile < Scalar(0.5))) {
    throw InvalidRange("trim percentile must lie in [0, 0.5)");
  }
  if (cloud.empty()) throw EmptyCloud("cannot estimate an object from an empty cloud");

  const auto n = static_cast<std::size_t>(cloud.size());
  Eigen::Matrix<Scalar, 3, 1> lower, upper;
  std::vector<Scalar> values(n);
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t i = 0; i < n; ++i) values[i] = cloud.points(axis, static_cast<Eigen::Index>(i));
    std::sort(values.begin(), values.end());
    lower(axis) = detail::quantile_sorted(values, trim_percentile);
    upper(axis) = detail::quantile_sorted(values, Scalar(1) - trim_percentile);
  }

  std::vector<std::array<Scalar, 3>> retained;
  retained.reserve(n);
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.points.col(i);
    if ((p.array() >= lower.array()).all() && (p.array() <= upper.array()).all()) {
      retained.push_back({p.x(), p.y(), p.z()});
    }
  }
  if (retained.empty()) throw EmptyCloud("no points survive percentile trimming");
  std::sort(retained.begin(), retained.end());

  Eigen::Matrix<Scalar, 3, 1> sum = Eigen::Matrix<Scalar, 3, 1>::Zero();
  for (const auto& p : retained) sum += Eigen::Matrix<Scalar, 3, 1>(p[0], p[1], p[2]);

  ObjectEstimate<Scalar> est;
  est.centroid = sum / Scalar(retained.size());
  est.extents = upper - lower;
  est.point_count = retained.size();
  est.dominant_axis = dominant_axis(est.extents);
  return est;
}

}  // namespace gripkit
