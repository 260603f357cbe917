#include "tracestokes/levelset.hpp"

#include <cmath>
#include <utility>

namespace tracestokes {

Vec3 LevelSet::normal(const Point3& x) const {
  const Vec3 g = gradient(x);
  const double norm = g.norm();
  if (norm < 1e-12) {
    throw GeometryError("level-set gradient vanishes");
  }
  return g / norm;
}

SphereLevelSet::SphereLevelSet(double radius, Point3 center)
    : radius_(radius), center_(std::move(center)) {
  if (!(radius > 0.0)) {
    throw InputError("sphere radius must be positive");
  }
}

double SphereLevelSet::value(const Point3& x) const { return (x - center_).norm() - radius_; }

Vec3 SphereLevelSet::gradient(const Point3& x) const {
  const Vec3 d = x - center_;
  const double r = d.norm();
  if (r == 0.0) {
    throw GeometryError("sphere level-set gradient undefined at the center");
  }
  return d / r;
}

Point3 SphereLevelSet::closest_point(const Point3& x) const {
  return center_ + radius_ * gradient(x);
}

QuadraticSphereLevelSet::QuadraticSphereLevelSet(double radius, Point3 center)
    : radius_(radius), center_(std::move(center)) {
  if (!(radius > 0.0)) {
    throw InputError("sphere radius must be positive");
  }
}

double QuadraticSphereLevelSet::value(const Point3& x) const {
  return (x - center_).squaredNorm() - radius_ * radius_;
}

Vec3 QuadraticSphereLevelSet::gradient(const Point3& x) const { return 2.0 * (x - center_); }

Point3 QuadraticSphereLevelSet::closest_point(const Point3& x) const {
  const Vec3 d = x - center_;
  const double r = d.norm();
  if (r == 0.0) {
    throw GeometryError("closest point undefined at the center");
  }
  return center_ + (radius_ / r) * d;
}

PlaneLevelSet::PlaneLevelSet(Vec3 normal, double offset) : normal_(std::move(normal)), offset_(offset) {
  const double norm = normal_.norm();
  if (!(norm > 0.0)) {
    throw InputError("plane normal must be nonzero");
  }
  normal_ /= norm;
  offset_ /= norm;
}

double PlaneLevelSet::value(const Point3& x) const { return normal_.dot(x) - offset_; }

Vec3 PlaneLevelSet::gradient(const Point3& /*x*/) const { return normal_; }

Point3 PlaneLevelSet::closest_point(const Point3& x) const { return x - value(x) * normal_; }

NegatedLevelSet::NegatedLevelSet(std::shared_ptr<const LevelSet> inner) : inner_(std::move(inner)) {}

double NegatedLevelSet::value(const Point3& x) const { return -inner_->value(x); }

Vec3 NegatedLevelSet::gradient(const Point3& x) const { return -inner_->gradient(x); }

Point3 NegatedLevelSet::closest_point(const Point3& x) const { return inner_->closest_point(x); }

}  // namespace tracestokes
