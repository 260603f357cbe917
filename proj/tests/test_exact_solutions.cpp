#include "tracestokes/exact_solutions.hpp"
#include "tracestokes/surface.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

using namespace tracestokes;

namespace {

std::vector<Point3> sphere_samples(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Point3> pts;
  for (int i = 0; i < n; ++i) pts.push_back(Vec3(g(rng), g(rng), g(rng)).normalized());
  return pts;
}

// Ambient Laplacian by central differences; equals the Laplace-Beltrami
// operator on the unit sphere for fields constant along rays.
double fd_laplacian(const std::function<double(const Point3&)>& f, const Point3& x, double h) {
  double lap = 0.0;
  for (int k = 0; k < 3; ++k) {
    Point3 xp = x;
    Point3 xm = x;
    xp[k] += h;
    xm[k] -= h;
    lap += (f(xp) - 2.0 * f(x) + f(xm)) / (h * h);
  }
  return lap;
}

const ExactFields kExact;

}  // namespace

TEST_CASE("closed-form values at reference points") {
  CHECK(kExact.value(ScalarField::Psi, Point3(0, 0, 1)) == 0.0);
  CHECK(kExact.value(ScalarField::Phi, Point3(0, 0, 1)) == doctest::Approx(-2.0 * std::cos(6.0)).epsilon(1e-15));
  const Vec3 u = kExact.velocity(Point3(1, 0, 0));
  CHECK(u.x() == doctest::Approx(0.0));
  CHECK(u.y() == doctest::Approx(-6.0));
  CHECK(u.z() == doctest::Approx(1.0));
  CHECK(kExact.value(ScalarField::Pressure, Point3(1, 0, 0)) == doctest::Approx(std::cos(36.0)));
  CHECK_THROWS_AS((void)kExact.value(ScalarField::Psi, Point3::Zero()), GeometryError);
  CHECK_THROWS_AS((void)kExact.velocity(Point3::Zero()), GeometryError);
  CHECK(to_string(ScalarField::Pressure) == "p");
}

TEST_CASE("fields are constant along rays and the velocity is tangential") {
  for (const Point3& y : sphere_samples(1000, 1)) {
    for (const double s : {0.5, 1.7}) {
      for (const auto f : {ScalarField::Psi, ScalarField::Phi, ScalarField::Pressure}) {
        CHECK(kExact.value(f, s * y) == doctest::Approx(kExact.value(f, y)).epsilon(1e-12).scale(1.0));
      }
      CHECK((kExact.velocity(s * y) - kExact.velocity(y)).norm() < 1e-12);
      CHECK((kExact.force(s * y) - kExact.force(y)).norm() < 1e-12);
    }
    CHECK(std::abs(kExact.velocity(y).dot(y)) < 1e-12);
    CHECK(std::abs(kExact.force(y).dot(y)) < 1e-12);
    // u = n x grad_G psi
    CHECK((kExact.velocity(y) - y.cross(kExact.surface_gradient(ScalarField::Psi, y))).norm() < 1e-12);
    CHECK(std::abs(kExact.velocity_divergence(y)) < 1e-11);
  }
}

TEST_CASE("dual-number derivatives agree with finite differences") {
  for (const Point3& y : sphere_samples(20, 2)) {
    const Point3 x = 1.3 * y;
    for (const auto f : {ScalarField::Psi, ScalarField::Phi, ScalarField::Pressure}) {
      const Vec3 fd = oracle::fd_gradient([&](const Point3& p) { return kExact.value(f, p); }, x, 1e-5);
      CHECK((kExact.gradient(f, x) - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
      CHECK(std::abs(kExact.surface_gradient(f, x).dot(y)) < 1e-12);
      CHECK((eval_surface_gradient(f, x) - kExact.surface_gradient(f, x)).norm() == 0.0);
    }
    Mat3 fd_jac;
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) {
        fd_jac(i, j) = oracle::fd_gradient([&](const Point3& p) { return kExact.velocity(p)[i]; }, x, 1e-5)[j];
      }
    }
    CHECK((kExact.velocity_jacobian(x) - fd_jac).norm() <= 1e-6 * std::max(1.0, fd_jac.norm()));
  }
}

TEST_CASE("vorticity is the Laplace-Beltrami operator of the stream function") {
  for (const Point3& y : sphere_samples(50, 3)) {
    const double lap_psi = kExact.laplace_beltrami(ScalarField::Psi, y);
    CHECK(lap_psi == doctest::Approx(kExact.value(ScalarField::Phi, y)).epsilon(1e-10).scale(1.0));
    const double fd = fd_laplacian([](const Point3& p) { return kExact.value(ScalarField::Psi, p); }, y, 1e-4);
    CHECK(lap_psi == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("force matches the Stokes operator applied to the closed-form solution") {
  for (const Point3& y : sphere_samples(20, 4)) {
    const Vec3 f = kExact.force(y);
    const Vec3 fd = oracle::fd_stokes_force(y, 1e-4);
    CHECK((f - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()));
    CHECK((eval_force(y) - f).norm() == 0.0);
  }
}

TEST_CASE("surface means of the closed-form fields") {
  const auto sphere = std::make_shared<SphereLevelSet>(1.0);
  const TraceGeometry geo = build_level_geometry(sphere, Box{}, 3);
  double psi = 0.0;
  double phi = 0.0;
  double p = 0.0;
  double abs_psi = 0.0;
  double abs_phi = 0.0;
  for (const auto& patch : geo.patches) {
    for (const auto& q : patch.quad_points) {
      const Point3 y = q.x.normalized();
      psi += q.w * kExact.value(ScalarField::Psi, y);
      phi += q.w * kExact.value(ScalarField::Phi, y);
      p += q.w * kExact.value(ScalarField::Pressure, y);
      abs_psi += q.w * std::abs(kExact.value(ScalarField::Psi, y));
      abs_phi += q.w * std::abs(kExact.value(ScalarField::Phi, y));
    }
  }
  CHECK(std::abs(psi) < 1e-3 * abs_psi);
  CHECK(std::abs(phi) < 1e-3 * abs_phi);
  // the pressure is not mean-free: int x^2 = 4 pi / 3
  CHECK(p == doctest::Approx(4.0 * std::numbers::pi * std::cos(36.0) / 3.0).epsilon(2e-2));
}

TEST_CASE("energy identity") {
  const auto sphere = std::make_shared<SphereLevelSet>(1.0);
  std::vector<double> gaps;
  for (int level = 0; level <= 3; ++level) {
    const TraceGeometry geo = build_level_geometry(sphere, Box{}, level);
    const EnergyIdentity e = check_energy_identity(geo);
    CHECK(e.lhs > 0.0);
    CHECK(e.rhs > 0.0);
    double half_phi2 = 0.0;
    for (const auto& patch : geo.patches) {
      for (const auto& q : patch.quad_points) {
        const double v = kExact.value(ScalarField::Phi, geo.levelset->closest_point(q.x));
        half_phi2 += 0.5 * q.w * v * v;
      }
    }
    CHECK(e.rhs == doctest::Approx(half_phi2).epsilon(1e-13));
    gaps.push_back(e.relative_gap());
  }
  CHECK(gaps.back() < 1e-2);
  for (std::size_t l = 2; l < gaps.size(); ++l) CHECK(std::log2(gaps[l - 1] / gaps[l]) > 1.7);
}
