#pragma once

#include "tracestokes/types.hpp"

#include <memory>

namespace tracestokes {

/// Smooth level-set function describing a closed surface as its zero level.
///
/// Implementations provide the value, the analytic gradient and the
/// closest-point projection onto the zero level. Values increase in the
/// direction of the outward normal.
class LevelSet {
 public:
  virtual ~LevelSet() = default;

  [[nodiscard]] virtual double value(const Point3& x) const = 0;
  [[nodiscard]] virtual Vec3 gradient(const Point3& x) const = 0;
  [[nodiscard]] virtual Point3 closest_point(const Point3& x) const = 0;

  /// Unit normal of the level set through x.
  [[nodiscard]] Vec3 normal(const Point3& x) const;
};

/// Signed distance |x - c| - r of a sphere.
class SphereLevelSet final : public LevelSet {
 public:
  explicit SphereLevelSet(double radius = 1.0, Point3 center = Point3::Zero());

  [[nodiscard]] double value(const Point3& x) const override;
  [[nodiscard]] Vec3 gradient(const Point3& x) const override;
  [[nodiscard]] Point3 closest_point(const Point3& x) const override;

  [[nodiscard]] double radius() const { return radius_; }
  [[nodiscard]] const Point3& center() const { return center_; }

 private:
  double radius_;
  Point3 center_;
};

/// |x - c|^2 - r^2; same zero level as the sphere, but a quadratic polynomial.
class QuadraticSphereLevelSet final : public LevelSet {
 public:
  explicit QuadraticSphereLevelSet(double radius = 1.0, Point3 center = Point3::Zero());

  [[nodiscard]] double value(const Point3& x) const override;
  [[nodiscard]] Vec3 gradient(const Point3& x) const override;
  [[nodiscard]] Point3 closest_point(const Point3& x) const override;

 private:
  double radius_;
  Point3 center_;
};

/// Affine level set a.x - b with unit normal a / |a|.
class PlaneLevelSet final : public LevelSet {
 public:
  PlaneLevelSet(Vec3 normal, double offset);

  [[nodiscard]] double value(const Point3& x) const override;
  [[nodiscard]] Vec3 gradient(const Point3& x) const override;
  [[nodiscard]] Point3 closest_point(const Point3& x) const override;

 private:
  Vec3 normal_;
  double offset_;
};

/// Wraps another level set and flips its sign.
class NegatedLevelSet final : public LevelSet {
 public:
  explicit NegatedLevelSet(std::shared_ptr<const LevelSet> inner);

  [[nodiscard]] double value(const Point3& x) const override;
  [[nodiscard]] Vec3 gradient(const Point3& x) const override;
  [[nodiscard]] Point3 closest_point(const Point3& x) const override;

 private:
  std::shared_ptr<const LevelSet> inner_;
};

}  // namespace tracestokes
