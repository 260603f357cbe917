#include "tracestokes/fem_space.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

namespace tracestokes {

TetGeometry TetGeometry::from_vertices(const std::array<Point3, 4>& vertices) {
  TetGeometry geo;
  geo.vertices = vertices;
  Mat3 jac;
  jac.col(0) = vertices[1] - vertices[0];
  jac.col(1) = vertices[2] - vertices[0];
  jac.col(2) = vertices[3] - vertices[0];
  const double det = jac.determinant();
  const double scale = jac.colwise().norm().prod();
  if (!(std::abs(det) > 1e-14 * scale)) {
    throw GeometryError("degenerate tetrahedron");
  }
  geo.volume = std::abs(det) / 6.0;
  // Rows of J^{-1} are the gradients of lambda_1..lambda_3.
  const Mat3 inv = jac.inverse();
  for (int a = 1; a < 4; ++a) {
    geo.grad_lambda[a] = inv.row(a - 1).transpose();
  }
  geo.grad_lambda[0] = -(geo.grad_lambda[1] + geo.grad_lambda[2] + geo.grad_lambda[3]);
  return geo;
}

std::array<double, 4> TetGeometry::barycentric(const Point3& x) const {
  const Vec3 d = x - vertices[0];
  std::array<double, 4> lambda{};
  lambda[1] = grad_lambda[1].dot(d);
  lambda[2] = grad_lambda[2].dot(d);
  lambda[3] = grad_lambda[3].dot(d);
  lambda[0] = 1.0 - lambda[1] - lambda[2] - lambda[3];
  return lambda;
}

BasisEval eval_basis(const TetGeometry& tet, int order, const Point3& x) {
  const auto lambda = tet.barycentric(x);
  BasisEval out;
  if (order == 1) {
    out.count = 4;
    for (int a = 0; a < 4; ++a) {
      out.values[a] = lambda[a];
      out.gradients[a] = tet.grad_lambda[a];
    }
    return out;
  }
  if (order != 2) {
    throw InputError("only P1 and P2 elements are supported, got order " + std::to_string(order));
  }
  out.count = 10;
  for (int a = 0; a < 4; ++a) {
    out.values[a] = lambda[a] * (2.0 * lambda[a] - 1.0);
    out.gradients[a] = (4.0 * lambda[a] - 1.0) * tet.grad_lambda[a];
  }
  for (int e = 0; e < 6; ++e) {
    const int i = kTetEdges[e][0];
    const int j = kTetEdges[e][1];
    out.values[4 + e] = 4.0 * lambda[i] * lambda[j];
    out.gradients[4 + e] = 4.0 * (lambda[i] * tet.grad_lambda[j] + lambda[j] * tet.grad_lambda[i]);
  }
  return out;
}

DofMap::DofMap(const BackgroundMesh& mesh, std::span<const Index> active_tets, int order)
    : order_(order), tet_ids_(active_tets.begin(), active_tets.end()) {
  if (order != 1 && order != 2) {
    throw InputError("only P1 and P2 elements are supported, got order " + std::to_string(order));
  }
  if (tet_ids_.empty()) {
    throw InputError("cannot build a finite element space on an empty active mesh");
  }
  constexpr Index kUnset = -1;
  std::vector<Index> vertex_dof(mesh.num_vertices(), kUnset);
  for (const Index t : tet_ids_) {
    for (const Index v : mesh.tets[static_cast<std::size_t>(t)].vertex_ids) {
      vertex_dof[static_cast<std::size_t>(v)] = 0;
    }
  }
  for (std::size_t v = 0; v < vertex_dof.size(); ++v) {
    if (vertex_dof[v] != kUnset) {
      vertex_dof[v] = static_cast<Index>(node_points_.size());
      node_points_.push_back(mesh.vertices[v]);
    }
  }
  std::vector<Index> edge_dof;
  if (order == 2) {
    edge_dof.assign(mesh.num_edges(), kUnset);
    for (const Index t : tet_ids_) {
      for (const Index e : mesh.tet_edges[static_cast<std::size_t>(t)]) {
        edge_dof[static_cast<std::size_t>(e)] = 0;
      }
    }
    for (std::size_t e = 0; e < edge_dof.size(); ++e) {
      if (edge_dof[e] != kUnset) {
        edge_dof[e] = static_cast<Index>(node_points_.size());
        const auto& [a, b] = mesh.edges[e];
        node_points_.push_back(0.5 * (mesh.vertices[static_cast<std::size_t>(a)] +
                                      mesh.vertices[static_cast<std::size_t>(b)]));
      }
    }
  }
  local_to_global_.reserve(tet_ids_.size() * static_cast<std::size_t>(dofs_per_tet()));
  for (const Index t : tet_ids_) {
    for (const Index v : mesh.tets[static_cast<std::size_t>(t)].vertex_ids) {
      local_to_global_.push_back(vertex_dof[static_cast<std::size_t>(v)]);
    }
    if (order == 2) {
      for (const Index e : mesh.tet_edges[static_cast<std::size_t>(t)]) {
        local_to_global_.push_back(edge_dof[static_cast<std::size_t>(e)]);
      }
    }
  }
}

std::vector<double> DofMap::interpolate(const std::function<double(const Point3&)>& f) const {
  std::vector<double> values(node_points_.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = f(node_points_[i]);
  }
  return values;
}

}  // namespace tracestokes
