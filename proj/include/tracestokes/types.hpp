#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tracestokes {

using Point3 = Eigen::Vector3d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

using Index = std::int64_t;

/// Axis-aligned bounding box.
struct Box {
  Point3 lo{-2.0, -2.0, -2.0};
  Point3 hi{2.0, 2.0, 2.0};

  [[nodiscard]] bool contains(const Point3& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
};

/// Invalid user input: bad mesh size, empty mesh, unknown preset.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Degenerate geometry, e.g. vanishing level-set gradient or zero-volume tet.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear solver breakdown or non-convergence.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured resource limit would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Orthogonal projection I - n n^T onto the plane normal to a unit vector.
inline Mat3 tangential_projector(const Vec3& n) {
  return Mat3::Identity() - n * n.transpose();
}

}  // namespace tracestokes
