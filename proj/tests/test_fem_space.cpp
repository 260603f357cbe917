#include "tracestokes/assembly.hpp"
#include "tracestokes/fem_space.hpp"
#include "tracestokes/surface.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <memory>
#include <random>
#include <set>

using namespace tracestokes;

namespace {

const std::array<Point3, 4> kTet{Point3(0.1, 0.0, -0.2), Point3(1.0, 0.3, 0.0), Point3(-0.2, 0.9, 0.1),
                                 Point3(0.2, 0.1, 1.2)};

std::vector<Point3> local_nodes(const std::array<Point3, 4>& v, int order) {
  std::vector<Point3> nodes(v.begin(), v.end());
  if (order == 2) {
    for (const auto& [a, b] : kTetEdges) {
      nodes.push_back(0.5 * (v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]));
    }
  }
  return nodes;
}

}  // namespace

TEST_CASE("basis functions are nodal, sum to one and match the oracle") {
  const TetGeometry tet = TetGeometry::from_vertices(kTet);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const int order : {1, 2}) {
    const auto nodes = local_nodes(kTet, order);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const BasisEval b = eval_basis(tet, order, nodes[i]);
      REQUIRE(b.count == local_dof_count(order));
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        CHECK(b.values[j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13).scale(1.0));
      }
    }
    for (int s = 0; s < 20; ++s) {
      double l[4] = {u(rng), u(rng), u(rng), u(rng)};
      const double sum = l[0] + l[1] + l[2] + l[3];
      Point3 x = Point3::Zero();
      for (int a = 0; a < 4; ++a) x += l[a] / sum * kTet[static_cast<std::size_t>(a)];
      const BasisEval b = eval_basis(tet, order, x);
      const oracle::Basis ref = oracle::lagrange_basis(kTet, order, x);
      double total = 0.0;
      Vec3 grad_total = Vec3::Zero();
      for (int i = 0; i < b.count; ++i) {
        total += b.values[static_cast<std::size_t>(i)];
        grad_total += b.gradients[static_cast<std::size_t>(i)];
        CHECK(b.values[static_cast<std::size_t>(i)] == doctest::Approx(ref.values[static_cast<std::size_t>(i)]).epsilon(1e-12));
        CHECK((b.gradients[static_cast<std::size_t>(i)] - ref.gradients[static_cast<std::size_t>(i)]).norm() < 1e-11);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(grad_total.norm() < 1e-12);
    }
  }
  CHECK_THROWS_AS((void)eval_basis(tet, 3, kTet[0]), InputError);
}

TEST_CASE("barycentric coordinates and gradients") {
  const TetGeometry tet = TetGeometry::from_vertices(kTet);
  const auto l = tet.barycentric(kTet[2]);
  CHECK(l[2] == doctest::Approx(1.0));
  CHECK(std::abs(l[0]) < 1e-14);
  Vec3 sum = Vec3::Zero();
  for (const auto& g : tet.grad_lambda) sum += g;
  CHECK(sum.norm() < 1e-13);
  const Vec3 e1 = kTet[1] - kTet[0];
  const Vec3 e2 = kTet[2] - kTet[0];
  const Vec3 e3 = kTet[3] - kTet[0];
  CHECK(tet.volume == doctest::Approx(std::abs(e1.dot(e2.cross(e3))) / 6.0));
}

TEST_CASE("single tet dof counts") {
  BackgroundMesh mesh;
  mesh.vertices.assign(kTet.begin(), kTet.end());
  mesh.tets.push_back({{0, 1, 2, 3}, {0, 0, 0}});
  mesh.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  mesh.tet_edges = {{0, 1, 2, 3, 4, 5}};
  const std::vector<Index> active{0};
  CHECK(DofMap(mesh, active, 1).num_dofs() == 4);
  CHECK(DofMap(mesh, active, 2).num_dofs() == 10);
  CHECK_THROWS_AS(DofMap(mesh, active, 3), InputError);
  CHECK_THROWS_AS(DofMap(mesh, std::vector<Index>{}, 1), InputError);
}

TEST_CASE("two tets sharing a face") {
  BackgroundMesh mesh;
  mesh.vertices = {Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1), Point3(1, 1, 1)};
  mesh.tets.push_back({{0, 1, 2, 3}, {0, 0, 0}});
  mesh.tets.push_back({{1, 2, 3, 4}, {0, 0, 0}});
  mesh.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}, {3, 4}};
  mesh.tet_edges = {{0, 1, 2, 3, 4, 5}, {3, 4, 6, 5, 7, 8}};
  const std::vector<Index> active{0, 1};
  CHECK(DofMap(mesh, active, 1).num_dofs() == 5);
  const DofMap p2(mesh, active, 2);
  CHECK(p2.num_dofs() == 14);
  std::set<Index> shared;
  for (Index g : p2.local_to_global(0)) shared.insert(g);
  int common = 0;
  for (Index g : p2.local_to_global(1)) common += static_cast<int>(shared.count(g));
  CHECK(common == 6);
  // every local node maps to a global node at the same location
  for (std::size_t t = 0; t < 2; ++t) {
    const auto nodes = local_nodes(mesh.tet_vertices(static_cast<Index>(t)), 2);
    const auto map = p2.local_to_global(t);
    for (std::size_t i = 0; i < nodes.size(); ++i) CHECK((p2.node_point(map[i]) - nodes[i]).norm() < 1e-15);
  }
}

TEST_CASE("interpolation reproduces polynomials of the element degree") {
  const auto sphere = std::make_shared<SphereLevelSet>(1.0);
  const TraceGeometry geo = build_level_geometry(sphere, Box{}, 0);
  const auto quad = [](const Point3& x) { return 1.0 + x.x() - 2.0 * x.y() * x.z() + 0.5 * x.z() * x.z(); };
  const auto quad_grad = [](const Point3& x) { return Vec3(1.0, -2.0 * x.z(), -2.0 * x.y() + x.z()); };
  const auto lin = [](const Point3& x) { return 0.3 - x.x() + 4.0 * x.y() + x.z(); };
  const DofMap p1(geo.mesh, geo.active_tets, 1);
  const DofMap p2(geo.mesh, geo.active_tets, 2);
  const auto c1 = p1.interpolate(lin);
  const auto c2 = p2.interpolate(quad);
  double e1 = 0.0;
  double e2 = 0.0;
  double g2 = 0.0;
  for (std::size_t i = 0; i < geo.patches.size(); ++i) {
    for (const auto& q : geo.patches[i].quad_points) {
      const FeValue v1 = evaluate_fe(geo, p1, c1, i, q.x);
      const FeValue v2 = evaluate_fe(geo, p2, c2, i, q.x);
      e1 = std::max(e1, std::abs(v1.value - lin(q.x)) + (v1.gradient - Vec3(-1, 4, 1)).norm());
      e2 = std::max(e2, std::abs(v2.value - quad(q.x)));
      g2 = std::max(g2, (v2.gradient - quad_grad(q.x)).norm());
    }
  }
  CHECK(e1 < 1e-12);
  CHECK(e2 < 1e-12);
  CHECK(g2 < 1e-11);
}

TEST_CASE("dof numbering is deterministic with vertices first") {
  const auto sphere = std::make_shared<SphereLevelSet>(1.0);
  const TraceGeometry geo = build_level_geometry(sphere, Box{}, 0);
  const DofMap a(geo.mesh, geo.active_tets, 2);
  const DofMap b(geo.mesh, geo.active_tets, 2);
  REQUIRE(a.num_dofs() == b.num_dofs());
  for (std::size_t t = 0; t < a.num_tets(); ++t) {
    const auto la = a.local_to_global(t);
    const auto lb = b.local_to_global(t);
    CHECK(std::equal(la.begin(), la.end(), lb.begin()));
  }
  const DofMap p1(geo.mesh, geo.active_tets, 1);
  for (Index d = 0; d < p1.num_dofs(); ++d) CHECK((a.node_point(d) - p1.node_point(d)).norm() == 0.0);
  for (Index d = p1.num_dofs(); d < a.num_dofs(); ++d) {
    // edge dofs sit on midpoints, not on lattice vertices
    const Vec3 s = (a.node_point(d) - geo.mesh.box.lo) / geo.h();
    CHECK((s.array() - s.array().round()).abs().maxCoeff() > 0.25);
  }
}
