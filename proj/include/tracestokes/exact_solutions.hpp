#pragma once

#include "tracestokes/dual.hpp"
#include "tracestokes/types.hpp"

#include <array>
#include <cmath>
#include <string_view>

namespace tracestokes {

struct TraceGeometry;

/// Closed-form unit-sphere benchmark: stream function, vorticity, velocity
/// and pressure of a smooth surface Stokes solution with alpha = 1, K = 1.
///
/// All fields are homogeneous of degree 0, i.e. constant along rays from the
/// origin, which is the constant normal extension off the unit sphere.
namespace benchmark_fields {

inline const double kCos6 = std::cos(6.0);
inline const double kCos36 = std::cos(36.0);

template <class T>
T psi(const std::array<T, 3>& x) {
  using std::sqrt;
  const T r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const T r = sqrt(r2);
  return (x[0] * (6.0 * x[2] + x[1]) * r - x[1] * x[1] * x[2] * kCos6) / (r2 * r);
}

template <class T>
T phi(const std::array<T, 3>& x) {
  using std::sqrt;
  const T r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const T r = sqrt(r2);
  return -6.0 *
         (x[0] * (6.0 * x[2] + x[1]) * r +
          (1.0 / 3.0) * kCos6 * x[2] * (x[0] * x[0] - 5.0 * x[1] * x[1] + x[2] * x[2])) /
         (r2 * r);
}

template <class T>
T pressure(const std::array<T, 3>& x) {
  using std::sqrt;
  const T r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const T r = sqrt(r2);
  return (216.0 * x[1] * x[2] + x[0] * kCos36 * r) * x[0] / (r2 * r);
}

template <class T>
std::array<T, 3> velocity(const std::array<T, 3>& x) {
  using std::sqrt;
  const T r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const T r = sqrt(r2);
  const T r3 = r2 * r;
  return {
      (x[0] * (6.0 * x[1] - x[2]) * r - x[1] * kCos6 * (x[1] * x[1] - 2.0 * x[2] * x[2])) / r3,
      -(-kCos6 * x[0] * x[1] * x[1] + (6.0 * x[0] * x[0] - 6.0 * x[2] * x[2] - x[1] * x[2]) * r) / r3,
      -((6.0 * x[1] * x[2] - x[0] * x[0] + x[1] * x[1]) * r + 2.0 * kCos6 * x[0] * x[1] * x[2]) / r3,
  };
}

}  // namespace benchmark_fields

enum class ScalarField { Psi, Phi, Pressure };

[[nodiscard]] std::string_view to_string(ScalarField field);

/// Value and ambient first derivatives of the closed-form fields, computed
/// with forward-mode dual numbers.
class ExactFields {
 public:
  static constexpr double kAlpha = 1.0;
  static constexpr double kGaussCurvature = 1.0;

  /// Throws GeometryError at the origin.
  [[nodiscard]] double value(ScalarField field, const Point3& x) const;
  [[nodiscard]] Vec3 velocity(const Point3& x) const;

  /// Ambient gradient of the degree-0 extension.
  [[nodiscard]] Vec3 gradient(ScalarField field, const Point3& x) const;
  /// P(x) gradient with n = x / |x|.
  [[nodiscard]] Vec3 surface_gradient(ScalarField field, const Point3& x) const;
  /// Ambient Jacobian, entry (i, j) = d u_i / d x_j.
  [[nodiscard]] Mat3 velocity_jacobian(const Point3& x) const;
  /// P grad(u) P with n = x / |x|.
  [[nodiscard]] Mat3 velocity_surface_gradient(const Point3& x) const;

  /// Surface divergence of the velocity.
  [[nodiscard]] double velocity_divergence(const Point3& x) const;
  /// Laplace-Beltrami operator of a scalar field, from exact second derivatives.
  [[nodiscard]] double laplace_beltrami(ScalarField field, const Point3& x) const;

  /// Force f = -1/2 n x grad_G(phi) + grad_G(p), evaluated at x / |x|.
  [[nodiscard]] Vec3 force(const Point3& x) const;
};

/// Tag-based evaluation. Vector-valued tags are served by ExactFields::velocity
/// and ExactFields::force.
[[nodiscard]] double eval_exact(ScalarField field, const Point3& x);
[[nodiscard]] Vec3 eval_force(const Point3& x);
[[nodiscard]] Vec3 eval_surface_gradient(ScalarField field, const Point3& x);

/// Both sides of the stream-function energy identity integrated over the
/// discrete surface with exact fields evaluated at the closest point:
/// lhs = int E_s(u):E_s(u) + alpha |u|^2, rhs = int 1/2 phi^2 + (alpha - K)|grad psi|^2.
struct EnergyIdentity {
  double lhs = 0.0;
  double rhs = 0.0;

  [[nodiscard]] double relative_gap() const { return std::abs(lhs - rhs) / std::abs(rhs); }
};

[[nodiscard]] EnergyIdentity check_energy_identity(const TraceGeometry& geometry);

}  // namespace tracestokes
