#pragma once

#include "tracestokes/levelset.hpp"
#include "tracestokes/types.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace tracestokes {

/// Local edge numbering shared by the mesh edge table and the P2 basis.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Starting mesh size of the refinement hierarchy.
inline constexpr double kCoarsestMeshSize = 0.6;

/// Relative shift applied to exactly-zero nodal level-set values (times h).
inline constexpr double kZeroValueShift = 1e-10;

struct Tet {
  std::array<Index, 4> vertex_ids{};
  std::array<int, 3> parent_cube{};
};

/// Near-surface portion of a Kuhn-subdivided cube lattice.
///
/// Vertex and edge ids are assigned in order of first appearance while cubes
/// are scanned lexicographically (z slowest), so the numbering depends only on
/// the inputs.
struct BackgroundMesh {
  std::vector<Point3> vertices;
  std::vector<Tet> tets;
  std::vector<std::array<Index, 2>> edges;      // sorted vertex pairs
  std::vector<std::array<Index, 6>> tet_edges;  // per tet, in kTetEdges order
  double h = 0.0;
  Box box;

  [[nodiscard]] std::size_t num_vertices() const { return vertices.size(); }
  [[nodiscard]] std::size_t num_tets() const { return tets.size(); }
  [[nodiscard]] std::size_t num_edges() const { return edges.size(); }

  [[nodiscard]] std::array<Point3, 4> tet_vertices(Index tet) const;
  [[nodiscard]] double signed_volume(Index tet) const;
};

struct MeshLimits {
  /// Upper bound on the estimated number of active tets.
  std::size_t max_active_tets = 4'000'000;
};

/// Materializes the 6-tet Kuhn subdivision of every lattice cube of side h
/// (anchored at box.lo) whose corner values change sign or come within sqrt(3) h
/// of zero. Throws InputError when no cube qualifies.
[[nodiscard]] BackgroundMesh build_lattice(const LevelSet& levelset, double h, const Box& box,
                                           const MeshLimits& limits = {});

/// Mesh size of refinement level L: 0.6 * 2^-L.
[[nodiscard]] double level_mesh_size(int level);

/// build_lattice at level_mesh_size(level).
[[nodiscard]] BackgroundMesh refine(const LevelSet& levelset, const Box& box, int level,
                                    const MeshLimits& limits = {});

/// Nodal values of the P1 interpolant, with exact zeros moved to +kZeroValueShift*h.
[[nodiscard]] std::vector<double> interpolate_levelset(const BackgroundMesh& mesh, const LevelSet& levelset);

/// Zero values count as positive (same rule as interpolate_levelset).
[[nodiscard]] bool is_cut(std::span<const double, 4> values);

/// Tets on which the interpolant attains both signs, in increasing id order.
[[nodiscard]] std::vector<Index> active_mesh(const BackgroundMesh& mesh, std::span<const double> nodal_values);

/// ASCII OFF dump of the given tets as polyhedra (4 triangles each).
void write_off(std::ostream& out, const BackgroundMesh& mesh, std::span<const Index> tets);

}  // namespace tracestokes
