#pragma once

#include "tracestokes/background_mesh.hpp"
#include "tracestokes/types.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace tracestokes {

inline constexpr int kMaxLocalDofs = 10;

[[nodiscard]] constexpr int local_dof_count(int order) { return order == 1 ? 4 : 10; }

/// Affine tet data: vertices, barycentric gradients and volume.
struct TetGeometry {
  std::array<Point3, 4> vertices;
  std::array<Vec3, 4> grad_lambda;
  double volume = 0.0;

  /// Throws GeometryError for (near) zero volume.
  [[nodiscard]] static TetGeometry from_vertices(const std::array<Point3, 4>& vertices);

  [[nodiscard]] std::array<double, 4> barycentric(const Point3& x) const;
};

/// Values and ambient gradients of the local Lagrange basis at one point.
///
/// Local dof order: vertex functions 0..3, then (for P2) edge functions in
/// kTetEdges order.
struct BasisEval {
  int count = 0;
  std::array<double, kMaxLocalDofs> values{};
  std::array<Vec3, kMaxLocalDofs> gradients{};
};

[[nodiscard]] BasisEval eval_basis(const TetGeometry& tet, int order, const Point3& x);

/// Global numbering of the P1 or P2 Lagrange space on the active tets.
///
/// Vertex dofs come first in increasing vertex id, then edge dofs in
/// increasing edge id.
class DofMap {
 public:
  DofMap(const BackgroundMesh& mesh, std::span<const Index> active_tets, int order);

  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] int dofs_per_tet() const { return local_dof_count(order_); }
  [[nodiscard]] Index num_dofs() const { return static_cast<Index>(node_points_.size()); }
  [[nodiscard]] std::size_t num_tets() const { return tet_ids_.size(); }

  /// Background-mesh id of the i-th active tet.
  [[nodiscard]] Index tet_id(std::size_t i) const { return tet_ids_[i]; }
  [[nodiscard]] std::span<const Index> tet_ids() const { return tet_ids_; }

  [[nodiscard]] std::span<const Index> local_to_global(std::size_t i) const {
    return {local_to_global_.data() + i * static_cast<std::size_t>(dofs_per_tet()),
            static_cast<std::size_t>(dofs_per_tet())};
  }

  /// Lagrange node of a global dof (vertex or edge midpoint).
  [[nodiscard]] const Point3& node_point(Index dof) const { return node_points_[static_cast<std::size_t>(dof)]; }

  /// Nodal interpolation of a scalar field.
  [[nodiscard]] std::vector<double> interpolate(const std::function<double(const Point3&)>& f) const;

 private:
  int order_;
  std::vector<Index> tet_ids_;
  std::vector<Index> local_to_global_;
  std::vector<Point3> node_points_;
};

[[nodiscard]] inline DofMap build_dofmap(const BackgroundMesh& mesh, std::span<const Index> active_tets, int order) {
  return DofMap(mesh, active_tets, order);
}

}  // namespace tracestokes
