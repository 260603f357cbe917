#include "tracestokes/assembly.hpp"
#include "tracestokes/surface.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <memory>
#include <numbers>

using namespace tracestokes;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.size(), a.size());
  const auto rp = a.row_offsets();
  const auto ci = a.column_indices();
  const auto v = a.values();
  for (Index r = 0; r < a.size(); ++r) {
    for (Index k = rp[static_cast<std::size_t>(r)]; k < rp[static_cast<std::size_t>(r) + 1]; ++k) {
      d(r, ci[static_cast<std::size_t>(k)]) += v[static_cast<std::size_t>(k)];
    }
  }
  return d;
}

Eigen::VectorXd as_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

TraceGeometry sphere_level(int level) { return build_level_geometry(std::make_shared<SphereLevelSet>(1.0), Box{}, level); }

// A single lattice cube of side h with a small sphere around one corner.
TraceGeometry tiny_geometry(double h) {
  Box box;
  box.lo = Point3::Zero();
  box.hi = Point3(h, h, h);
  auto ls = std::make_shared<SphereLevelSet>(0.45 * h, Point3(h, 0.0, 0.0));
  BackgroundMesh mesh = build_lattice(*ls, h, box);
  return build_trace_geometry(ls, std::move(mesh));
}

const auto kCurvature = [](const Point3& x) { return 0.5 + x.z() - x.x() * x.y(); };
const auto kForce = [](const Point3& x) { return Vec3(x.y() * x.z(), 1.0 - x.x(), x.x() * x.x() + 0.5 * x.y()); };

void compare_with_oracle(const TraceGeometry& geo, int order, double tol) {
  const DofMap dofs(geo.mesh, geo.active_tets, order);
  const double rho = 0.7;
  const auto psi = dofs.interpolate([](const Point3& x) { return x.x() * x.y() - x.z(); });
  const oracle::Forms ref =
      oracle::assemble_forms(geo.mesh, geo.nodal_values, geo.active_tets, dofs, rho, kCurvature, kForce, psi);

  CHECK(rel(dense(assemble_mass(geo, dofs).matrix), ref.mass) < tol);
  CHECK(rel(dense(assemble_stiffness(geo, dofs).matrix), ref.stiffness) < tol);
  CHECK(rel(dense(assemble_bK(geo, dofs, kCurvature).matrix), ref.curvature_stiffness) < tol);
  CHECK(rel(dense(assemble_stabilization(geo, dofs, rho).matrix), ref.stabilization) < tol);
  CHECK(rel(as_eigen(assemble_mean_vector(geo, dofs)), ref.mean) < tol);
  CHECK(rel(as_eigen(assemble_rhs_g(geo, dofs, kForce)), ref.load) < tol);
  const auto vel = assemble_velocity_rhs(geo, dofs, dofs, psi, NormalChoice::Discrete);
  for (int c = 0; c < 3; ++c) CHECK(rel(as_eigen(vel[static_cast<std::size_t>(c)]), ref.velocity_load[static_cast<std::size_t>(c)]) < tol);
}

}  // namespace

TEST_CASE("forms agree with an independent dense assembly on a single cube") {
  const TraceGeometry geo = tiny_geometry(0.5);
  REQUIRE(geo.active_tets.size() <= 5);
  REQUIRE(!geo.active_tets.empty());
  compare_with_oracle(geo, 1, 1e-10);
  compare_with_oracle(geo, 2, 1e-10);
}

TEST_CASE("forms agree with an independent dense assembly on the coarsest sphere mesh") {
  const TraceGeometry geo = sphere_level(0);
  compare_with_oracle(geo, 1, 1e-10);
  compare_with_oracle(geo, 2, 1e-10);
}

TEST_CASE("mass matrix and mean vector") {
  const TraceGeometry geo = sphere_level(1);
  for (const int order : {1, 2}) {
    const DofMap dofs(geo.mesh, geo.active_tets, order);
    const auto m = assemble_mass(geo, dofs).matrix;
    const auto c = assemble_mean_vector(geo, dofs);
    const std::vector<double> ones(static_cast<std::size_t>(dofs.num_dofs()), 1.0);
    const auto row_sums = matvec(m, ones);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(row_sums[i] == doctest::Approx(c[i]).epsilon(1e-12).scale(1e-3));
    CHECK(dot(ones, c) == doctest::Approx(geo.area()).epsilon(1e-13));
    CHECK(dot(ones, row_sums) == doctest::Approx(geo.area()).epsilon(1e-13));
    CHECK(m.symmetry_defect() < 1e-15 * m.max_abs() + 1e-300);
  }
}

TEST_CASE("stiffness annihilates constants and integrates linear functions") {
  const TraceGeometry geo = sphere_level(1);
  const Vec3 a(0.3, -1.2, 0.8);
  for (const int order : {1, 2}) {
    const DofMap dofs(geo.mesh, geo.active_tets, order);
    const auto b = assemble_stiffness(geo, dofs).matrix;
    const std::vector<double> ones(static_cast<std::size_t>(dofs.num_dofs()), 1.0);
    CHECK(norm2(matvec(b, ones)) < 1e-13);
    const auto xi = dofs.interpolate([&](const Point3& x) { return a.dot(x); });
    double expected = 0.0;
    for (const auto& patch : geo.patches) expected += (tangential_projector(patch.n_h) * a).squaredNorm() * patch.area;
    CHECK(dot(xi, matvec(b, xi)) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("curvature weighting") {
  const TraceGeometry geo = sphere_level(0);
  const DofMap dofs(geo.mesh, geo.active_tets, 2);
  const Eigen::MatrixXd b = dense(assemble_stiffness(geo, dofs).matrix);
  CHECK(dense(assemble_bK(geo, dofs, [](const Point3&) { return 1.0; }).matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK(rel(dense(assemble_bK(geo, dofs, [](const Point3&) { return 0.0; }).matrix), 2.0 * b) < 1e-14);
  CHECK(rel(dense(assemble_bK(geo, dofs, [](const Point3&) { return 0.5; }).matrix), b) < 1e-14);
}

TEST_CASE("stabilization scaling and kernel") {
  const auto plane = std::make_shared<PlaneLevelSet>(Vec3(0, 0, 1), 0.3);
  const TraceGeometry geo = build_level_geometry(plane, Box{}, 0);
  for (const int order : {1, 2}) {
    const DofMap dofs(geo.mesh, geo.active_tets, order);
    CHECK(assemble_stabilization(geo, dofs, 0.0).matrix.max_abs() == 0.0);
    CHECK_THROWS_AS((void)assemble_stabilization(geo, dofs, -1.0), InputError);
    const Eigen::MatrixXd s1 = dense(assemble_stabilization(geo, dofs, 1.0).matrix);
    CHECK(rel(dense(assemble_stabilization(geo, dofs, 2.5).matrix), 2.5 * s1) < 1e-14);

    const SparseMatrix s = assemble_stabilization(geo, dofs, 1.0).matrix;
    const auto tangential = dofs.interpolate([](const Point3& x) { return x.x() - 3.0 * x.y() + x.x() * x.y(); });
    CHECK(norm2(matvec(s, tangential)) < 1e-13);

    const auto normal = dofs.interpolate([](const Point3& x) { return x.z(); });
    double volume = 0.0;
    for (const auto& tet : geo.tets) volume += tet.volume;
    CHECK(dot(normal, matvec(s, normal)) == doctest::Approx(volume).epsilon(1e-13));
  }
}

TEST_CASE("load vector special cases") {
  const TraceGeometry geo = sphere_level(0);
  const DofMap dofs(geo.mesh, geo.active_tets, 2);
  CHECK(norm2(assemble_rhs_g(geo, dofs, [](const Point3&) { return Vec3::Zero(); })) == 0.0);

  const auto plane = std::make_shared<PlaneLevelSet>(Vec3(0, 1, 0), -0.2);
  const TraceGeometry flat = build_level_geometry(plane, Box{}, 0);
  const DofMap fdofs(flat.mesh, flat.active_tets, 2);
  CHECK(norm2(assemble_rhs_g(flat, fdofs, [](const Point3&) { return Vec3(0, 1, 0); })) < 1e-14);
  // a tangential constant force is a rotated gradient: g(1) = 0
  const auto g = assemble_rhs_g(flat, fdofs, [](const Point3&) { return Vec3(1, 0, 0); });
  double total = 0.0;
  for (double v : g) total += v;
  CHECK(std::abs(total) < 1e-13);
}

TEST_CASE("pressure load of a constant force is the stiffness of a linear function") {
  const TraceGeometry geo = sphere_level(1);
  const Vec3 a(1.0, 0.5, -2.0);
  for (const int order : {1, 2}) {
    const DofMap dofs(geo.mesh, geo.active_tets, order);
    const std::vector<double> psi(static_cast<std::size_t>(dofs.num_dofs()), 0.0);
    const auto rhs = assemble_pressure_rhs(
        geo, dofs, dofs, psi, [&](const Point3&) { return a; }, [](const Point3&) { return 1.0; });
    const auto expected = matvec(assemble_stiffness(geo, dofs).matrix, dofs.interpolate([&](const Point3& x) { return a.dot(x); }));
    CHECK(rel(as_eigen(rhs), as_eigen(expected)) < 1e-12);
  }
}

TEST_CASE("assembled forms are symmetric positive semidefinite") {
  const TraceGeometry geo = sphere_level(0);
  const DofMap dofs(geo.mesh, geo.active_tets, 2);
  const std::vector<SparseMatrix> forms{assemble_mass(geo, dofs).matrix, assemble_stiffness(geo, dofs).matrix,
                                        assemble_stabilization(geo, dofs, 0.6).matrix};
  for (const auto& f : forms) {
    CHECK(f.symmetry_defect() <= 1e-15 * f.max_abs());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(f));
    CHECK(es.eigenvalues().minCoeff() > -1e-12 * f.max_abs());
  }
  // stiffness plus stabilization only has the constants in its kernel
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(forms[1]) + dense(forms[2]));
  CHECK(std::abs(es.eigenvalues()[0]) < 1e-10);
  CHECK(es.eigenvalues()[1] > 1e-6);
}

TEST_CASE("incompatible inputs are rejected") {
  const TraceGeometry a = sphere_level(0);
  const TraceGeometry b = sphere_level(1);
  const DofMap dofs(b.mesh, b.active_tets, 1);
  CHECK_THROWS_AS((void)assemble_mass(a, dofs), InputError);
  const DofMap ok(a.mesh, a.active_tets, 1);
  CHECK_THROWS_AS((void)assemble_velocity_rhs(a, ok, ok, std::vector<double>(3, 0.0), NormalChoice::Discrete),
                  InputError);
}

TEST_CASE("P1 Laplace-Beltrami problem converges at second order in L2") {
  // -Lap u = 6 u for u = xy on the unit sphere
  const auto exact = [](const Point3& x) { return x.x() * x.y(); };
  std::vector<double> errors;
  for (int level = 1; level <= 3; ++level) {
    const TraceGeometry geo = sphere_level(level);
    const DofMap dofs(geo.mesh, geo.active_tets, 1);
    const SparseMatrix a =
        add(assemble_stiffness(geo, dofs).matrix, 1.0, assemble_stabilization(geo, dofs, geo.h()).matrix, 1.0);
    const SparseMatrix m = assemble_mass(geo, dofs).matrix;
    const auto f = dofs.interpolate([&](const Point3& x) { return 6.0 * exact(geo.levelset->closest_point(x)); });
    const auto c = assemble_mean_vector(geo, dofs);
    const ConstrainedSolver solver(a, c);
    const auto sol = solver.solve(matvec(m, f));
    double err = 0.0;
    for (std::size_t i = 0; i < geo.patches.size(); ++i) {
      for (const auto& q : geo.patches[i].quad_points) {
        const double d = evaluate_fe(geo, dofs, sol.x, i, q.x).value - exact(geo.levelset->closest_point(q.x));
        err += q.w * d * d;
      }
    }
    errors.push_back(std::sqrt(err));
  }
  for (std::size_t l = 1; l < errors.size(); ++l) {
    CHECK(std::log2(errors[l - 1] / errors[l]) == doctest::Approx(2.0).epsilon(0.15));
  }
}
