#include "tracestokes/exact_solutions.hpp"

#include "tracestokes/surface.hpp"

namespace tracestokes {

namespace {

using D1 = Dual<double>;
using D2 = Dual<D1>;

std::array<double, 3> as_array(const Point3& x) {
  if (x.squaredNorm() == 0.0) {
    throw GeometryError("benchmark fields are singular at the origin");
  }
  return {x.x(), x.y(), x.z()};
}

template <class T>
T scalar(ScalarField field, const std::array<T, 3>& x) {
  switch (field) {
    case ScalarField::Psi:
      return benchmark_fields::psi(x);
    case ScalarField::Phi:
      return benchmark_fields::phi(x);
    case ScalarField::Pressure:
      return benchmark_fields::pressure(x);
  }
  return T{};
}

Vec3 unit(const Point3& x) { return x / x.norm(); }

}  // namespace

std::string_view to_string(ScalarField field) {
  switch (field) {
    case ScalarField::Psi:
      return "psi";
    case ScalarField::Phi:
      return "phi";
    case ScalarField::Pressure:
      return "p";
  }
  return "?";
}

double ExactFields::value(ScalarField field, const Point3& x) const { return scalar(field, as_array(x)); }

Vec3 ExactFields::velocity(const Point3& x) const {
  const auto u = benchmark_fields::velocity(as_array(x));
  return {u[0], u[1], u[2]};
}

Vec3 ExactFields::gradient(ScalarField field, const Point3& x) const {
  const D1 f = scalar(field, seed(as_array(x)));
  return {f.d[0], f.d[1], f.d[2]};
}

Vec3 ExactFields::surface_gradient(ScalarField field, const Point3& x) const {
  return tangential_projector(unit(x)) * gradient(field, x);
}

Mat3 ExactFields::velocity_jacobian(const Point3& x) const {
  const auto u = benchmark_fields::velocity(seed(as_array(x)));
  Mat3 jac;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      jac(i, j) = u[i].d[j];
    }
  }
  return jac;
}

Mat3 ExactFields::velocity_surface_gradient(const Point3& x) const {
  const Mat3 p = tangential_projector(unit(x));
  return p * velocity_jacobian(x) * p;
}

double ExactFields::velocity_divergence(const Point3& x) const {
  return (tangential_projector(unit(x)) * velocity_jacobian(x)).trace();
}

double ExactFields::laplace_beltrami(ScalarField field, const Point3& x) const {
  const auto x1 = seed(as_array(x));
  const D2 f = scalar(field, seed<D1>(x1));
  // Extension w(x) = P(x) grad f(x) of the surface gradient; div_G w = tr(P grad w).
  const D1 r2 = x1[0] * x1[0] + x1[1] * x1[1] + x1[2] * x1[2];
  std::array<std::array<D1, 3>, 3> p;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      p[i][j] = (i == j ? D1(1.0) : D1(0.0)) - x1[i] * x1[j] / r2;
    }
  }
  std::array<D1, 3> w;
  for (int i = 0; i < 3; ++i) {
    w[i] = p[i][0] * f.d[0] + p[i][1] * f.d[1] + p[i][2] * f.d[2];
  }
  double div = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l) {
      div += p[j][l].v * w[j].d[l];
    }
  }
  return div;
}

Vec3 ExactFields::force(const Point3& x) const {
  const Point3 y = unit(x);
  const Vec3 n = y;
  return -0.5 * n.cross(surface_gradient(ScalarField::Phi, y)) + surface_gradient(ScalarField::Pressure, y);
}

double eval_exact(ScalarField field, const Point3& x) { return ExactFields{}.value(field, x); }

Vec3 eval_force(const Point3& x) { return ExactFields{}.force(x); }

Vec3 eval_surface_gradient(ScalarField field, const Point3& x) { return ExactFields{}.surface_gradient(field, x); }

EnergyIdentity check_energy_identity(const TraceGeometry& geometry) {
  const ExactFields exact;
  EnergyIdentity out;
  for (const auto& patch : geometry.patches) {
    for (const auto& q : patch.quad_points) {
      const Point3 y = geometry.levelset->closest_point(q.x);
      const Mat3 grad_u = exact.velocity_surface_gradient(y);
      const Mat3 strain = 0.5 * (grad_u + grad_u.transpose());
      const Vec3 u = exact.velocity(y);
      out.lhs += q.w * (strain.squaredNorm() + ExactFields::kAlpha * u.squaredNorm());
      const double phi = exact.value(ScalarField::Phi, y);
      const Vec3 grad_psi = exact.surface_gradient(ScalarField::Psi, y);
      out.rhs += q.w * (0.5 * phi * phi +
                        (ExactFields::kAlpha - ExactFields::kGaussCurvature) * grad_psi.squaredNorm());
    }
  }
  return out;
}

}  // namespace tracestokes
