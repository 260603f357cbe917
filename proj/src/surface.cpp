#include "tracestokes/surface.hpp"

#include <cmath>
#include <ostream>
#include <utility>

namespace tracestokes {

namespace {

Point3 crossing(const Point3& a, const Point3& b, double phi_a, double phi_b) {
  const double t = phi_a / (phi_a - phi_b);
  return a + t * (b - a);
}

}  // namespace

CutPolygon cut_tet(const std::array<Point3, 4>& vertices, const std::array<double, 4>& phi) {
  std::array<int, 4> neg{};
  std::array<int, 4> pos{};
  int nneg = 0;
  int npos = 0;
  for (int a = 0; a < 4; ++a) {
    if (phi[a] < 0.0) {
      neg[nneg++] = a;
    } else {
      pos[npos++] = a;
    }
  }
  CutPolygon poly;
  auto edge_point = [&](int a, int b) { return crossing(vertices[a], vertices[b], phi[a], phi[b]); };
  if (nneg == 1 || npos == 1) {
    const int lone = nneg == 1 ? neg[0] : pos[0];
    const auto& others = nneg == 1 ? pos : neg;
    poly.count = 3;
    for (int i = 0; i < 3; ++i) {
      poly.vertices[i] = edge_point(lone, others[i]);
    }
  } else if (nneg == 2) {
    const int a = neg[0];
    const int b = neg[1];
    const int c = pos[0];
    const int d = pos[1];
    poly.count = 4;
    poly.vertices = {edge_point(a, c), edge_point(a, d), edge_point(b, d), edge_point(b, c)};
  }
  return poly;
}

Vec3 discrete_normal(const TetGeometry& tet, const std::array<double, 4>& phi) {
  Vec3 g = Vec3::Zero();
  for (int a = 0; a < 4; ++a) {
    g += phi[a] * tet.grad_lambda[a];
  }
  const double norm = g.norm();
  if (!(norm > 1e-12)) {
    throw GeometryError("gradient of the level-set interpolant vanishes on an active tet");
  }
  return g / norm;
}

Vec3 improved_normal(const TetGeometry& tet, const std::array<double, 10>& phi, const Point3& x) {
  const BasisEval basis = eval_basis(tet, 2, x);
  Vec3 g = Vec3::Zero();
  for (int i = 0; i < 10; ++i) {
    g += phi[i] * basis.gradients[i];
  }
  const double norm = g.norm();
  if (!(norm > 1e-12)) {
    throw GeometryError("gradient of the quadratic level-set interpolant vanishes");
  }
  return g / norm;
}

int triangulate_polygon(const CutPolygon& polygon, const Vec3& normal, std::array<std::array<int, 3>, 2>& triangles) {
  const auto& v = polygon.vertices;
  auto oriented = [&](std::array<int, 3> tri) {
    const Vec3 cr = (v[tri[1]] - v[tri[0]]).cross(v[tri[2]] - v[tri[0]]);
    if (cr.dot(normal) < 0.0) {
      std::swap(tri[1], tri[2]);
    }
    return tri;
  };
  if (polygon.count == 3) {
    triangles[0] = oriented({0, 1, 2});
    return 1;
  }
  if (polygon.count == 4) {
    if ((v[0] - v[2]).squaredNorm() <= (v[1] - v[3]).squaredNorm()) {
      triangles[0] = oriented({0, 1, 2});
      triangles[1] = oriented({0, 2, 3});
    } else {
      triangles[0] = oriented({0, 1, 3});
      triangles[1] = oriented({1, 2, 3});
    }
    return 2;
  }
  return 0;
}

std::vector<QuadPoint> surface_quadrature(const CutPolygon& polygon, std::span<const std::array<int, 3>> triangles,
                                          int degree) {
  std::vector<QuadPoint> out;
  for (const auto& tri : triangles) {
    map_triangle_rule({polygon.vertices[tri[0]], polygon.vertices[tri[1]], polygon.vertices[tri[2]]}, degree, out);
  }
  return out;
}

double TraceGeometry::area() const {
  double a = 0.0;
  for (const auto& p : patches) {
    a += p.area;
  }
  return a;
}

std::array<double, 4> TraceGeometry::local_values(std::size_t active_index) const {
  const auto& ids = mesh.tets[static_cast<std::size_t>(active_tets[active_index])].vertex_ids;
  return {nodal_values[ids[0]], nodal_values[ids[1]], nodal_values[ids[2]], nodal_values[ids[3]]};
}

TraceGeometry build_trace_geometry(std::shared_ptr<const LevelSet> levelset, BackgroundMesh mesh,
                                   const GeometryOptions& options) {
  TraceGeometry geo;
  geo.levelset = std::move(levelset);
  geo.mesh = std::move(mesh);
  geo.options = options;
  geo.nodal_values = interpolate_levelset(geo.mesh, *geo.levelset);
  geo.active_tets = active_mesh(geo.mesh, geo.nodal_values);
  if (geo.active_tets.empty()) {
    throw InputError("the discrete surface does not cut any tet");
  }
  geo.tets.reserve(geo.active_tets.size());
  geo.patches.reserve(geo.active_tets.size());
  for (std::size_t i = 0; i < geo.active_tets.size(); ++i) {
    const Index t = geo.active_tets[i];
    const auto vertices = geo.mesh.tet_vertices(t);
    geo.tets.push_back(TetGeometry::from_vertices(vertices));
    const TetGeometry& tet = geo.tets.back();
    const auto phi = geo.local_values(i);

    SurfacePatch patch;
    patch.tet_id = t;
    patch.polygon = cut_tet(vertices, phi);
    patch.n_h = discrete_normal(tet, phi);
    patch.num_triangles = triangulate_polygon(patch.polygon, patch.n_h, patch.triangles);
    patch.quad_points = surface_quadrature(
        patch.polygon, std::span(patch.triangles.data(), static_cast<std::size_t>(patch.num_triangles)),
        options.surface_degree);
    for (const auto& q : patch.quad_points) {
      patch.area += q.w;
    }

    std::array<double, 10> phi2{};
    for (int a = 0; a < 4; ++a) {
      phi2[a] = geo.levelset->value(vertices[a]);
    }
    for (int e = 0; e < 6; ++e) {
      phi2[4 + e] = geo.levelset->value(0.5 * (vertices[kTetEdges[e][0]] + vertices[kTetEdges[e][1]]));
    }
    patch.ntilde_h.reserve(patch.quad_points.size());
    for (const auto& q : patch.quad_points) {
      patch.ntilde_h.push_back(improved_normal(tet, phi2, q.x));
    }
    geo.patches.push_back(std::move(patch));
  }
  return geo;
}

TraceGeometry build_level_geometry(std::shared_ptr<const LevelSet> levelset, const Box& box, int level,
                                   const GeometryOptions& options, const MeshLimits& limits) {
  BackgroundMesh mesh = refine(*levelset, box, level, limits);
  return build_trace_geometry(std::move(levelset), std::move(mesh), options);
}

void write_obj(std::ostream& out, const TraceGeometry& geometry) {
  out.precision(17);
  std::size_t base = 1;
  for (const auto& patch : geometry.patches) {
    for (int i = 0; i < patch.polygon.count; ++i) {
      const Point3& p = patch.polygon.vertices[i];
      out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    }
    for (int t = 0; t < patch.num_triangles; ++t) {
      const auto& tri = patch.triangles[t];
      out << "f " << base + tri[0] << ' ' << base + tri[1] << ' ' << base + tri[2] << '\n';
    }
    base += static_cast<std::size_t>(patch.polygon.count);
  }
}

}  // namespace tracestokes
