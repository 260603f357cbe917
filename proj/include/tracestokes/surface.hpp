#pragma once

#include "tracestokes/background_mesh.hpp"
#include "tracestokes/fem_space.hpp"
#include "tracestokes/levelset.hpp"
#include "tracestokes/quadrature.hpp"
#include "tracestokes/types.hpp"

#include <array>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace tracestokes {

/// Default polynomial degree of the surface quadrature.
inline constexpr int kSurfaceQuadratureDegree = 5;
/// Default polynomial degree of the volume quadrature on active tets.
inline constexpr int kVolumeQuadratureDegree = 4;

/// Zero level of a linear function on a tet: empty, a triangle or a quad.
struct CutPolygon {
  int count = 0;
  std::array<Point3, 4> vertices{};

  [[nodiscard]] bool empty() const { return count == 0; }
};

/// Intersection of the zero level of the P1 interpolant with one tet.
///
/// Zero values count as positive. Quad vertices are ordered along the
/// polygon boundary.
[[nodiscard]] CutPolygon cut_tet(const std::array<Point3, 4>& vertices, const std::array<double, 4>& phi);

/// Planar piece of the discrete surface inside one active tet.
struct SurfacePatch {
  Index tet_id = -1;
  CutPolygon polygon;
  int num_triangles = 0;
  std::array<std::array<int, 3>, 2> triangles{};
  std::vector<QuadPoint> quad_points;
  Vec3 n_h = Vec3::Zero();
  std::vector<Vec3> ntilde_h;  // one per quad point
  double area = 0.0;
};

/// Normalized gradient of the P1 interpolant on a tet.
[[nodiscard]] Vec3 discrete_normal(const TetGeometry& tet, const std::array<double, 4>& phi);

/// Normalized gradient of the P2 interpolant (vertex values, then edge
/// midpoint values in kTetEdges order) at x.
[[nodiscard]] Vec3 improved_normal(const TetGeometry& tet, const std::array<double, 10>& phi, const Point3& x);

/// Splits a cut polygon into 1 or 2 triangles oriented along `normal`; quads
/// are split along the shorter diagonal.
[[nodiscard]] int triangulate_polygon(const CutPolygon& polygon, const Vec3& normal,
                                      std::array<std::array<int, 3>, 2>& triangles);

/// Quadrature on the triangles of a patch.
[[nodiscard]] std::vector<QuadPoint> surface_quadrature(const CutPolygon& polygon,
                                                        std::span<const std::array<int, 3>> triangles, int degree);

struct GeometryOptions {
  int surface_degree = kSurfaceQuadratureDegree;
  int volume_degree = kVolumeQuadratureDegree;
};

/// Everything one refinement level needs: background mesh, P1 level-set
/// interpolant, active tets with their affine data and their surface patches.
///
/// `tets[i]` and `patches[i]` belong to active tet `active_tets[i]`.
struct TraceGeometry {
  std::shared_ptr<const LevelSet> levelset;
  BackgroundMesh mesh;
  std::vector<double> nodal_values;
  std::vector<Index> active_tets;
  std::vector<TetGeometry> tets;
  std::vector<SurfacePatch> patches;
  GeometryOptions options;

  [[nodiscard]] double h() const { return mesh.h; }
  [[nodiscard]] double area() const;
  [[nodiscard]] std::array<double, 4> local_values(std::size_t active_index) const;
};

[[nodiscard]] TraceGeometry build_trace_geometry(std::shared_ptr<const LevelSet> levelset, BackgroundMesh mesh,
                                                 const GeometryOptions& options = {});

/// Convenience: refine + build_trace_geometry on the given level.
[[nodiscard]] TraceGeometry build_level_geometry(std::shared_ptr<const LevelSet> levelset, const Box& box, int level,
                                                 const GeometryOptions& options = {}, const MeshLimits& limits = {});

/// Wavefront OBJ dump of the discrete surface triangles.
void write_obj(std::ostream& out, const TraceGeometry& geometry);

}  // namespace tracestokes
