#include "tracestokes/assembly.hpp"

#include <algorithm>

namespace tracestokes {

namespace {

void check_compatible(const TraceGeometry& geometry, const DofMap& dofs) {
  if (dofs.num_tets() != geometry.active_tets.size() ||
      !std::equal(geometry.active_tets.begin(), geometry.active_tets.end(), dofs.tet_ids().begin())) {
    throw InputError("dof map and geometry are built on different active meshes");
  }
}

using LocalMatrix = std::array<std::array<double, kMaxLocalDofs>, kMaxLocalDofs>;

void scatter(const DofMap& dofs, std::size_t i, const LocalMatrix& local, std::vector<Triplet>& out) {
  const auto l2g = dofs.local_to_global(i);
  const int n = dofs.dofs_per_tet();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      out.push_back({l2g[a], l2g[b], local[a][b]});
    }
  }
}

/// Element loop over surface quadrature points. `kernel(i, patch, q, qi,
/// basis, local)` accumulates into the local matrix of active tet i.
template <class Kernel>
SparseMatrix surface_matrix(const TraceGeometry& geometry, const DofMap& dofs, Kernel&& kernel) {
  check_compatible(geometry, dofs);
  const int n = dofs.dofs_per_tet();
  std::vector<Triplet> triplets;
  triplets.reserve(dofs.num_tets() * static_cast<std::size_t>(n * n));
  for (std::size_t i = 0; i < dofs.num_tets(); ++i) {
    const SurfacePatch& patch = geometry.patches[i];
    LocalMatrix local{};
    for (std::size_t qi = 0; qi < patch.quad_points.size(); ++qi) {
      const QuadPoint& q = patch.quad_points[qi];
      const BasisEval basis = eval_basis(geometry.tets[i], dofs.order(), q.x);
      kernel(i, patch, q, basis, local);
    }
    scatter(dofs, i, local, triplets);
  }
  return SparseMatrix::from_triplets(dofs.num_dofs(), std::move(triplets));
}

void add_weighted_stiffness(const SurfacePatch& patch, const QuadPoint& q, const BasisEval& basis, double weight,
                            LocalMatrix& local) {
  const Mat3 proj = tangential_projector(patch.n_h);
  std::array<Vec3, kMaxLocalDofs> tg;
  for (int a = 0; a < basis.count; ++a) {
    tg[a] = proj * basis.gradients[a];
  }
  const double w = q.w * weight;
  for (int a = 0; a < basis.count; ++a) {
    for (int b = 0; b < basis.count; ++b) {
      local[a][b] += w * tg[a].dot(tg[b]);
    }
  }
}

}  // namespace

FormMatrix assemble_mass(const TraceGeometry& geometry, const DofMap& dofs) {
  auto m = surface_matrix(geometry, dofs,
                          [](std::size_t, const SurfacePatch&, const QuadPoint& q, const BasisEval& basis,
                             LocalMatrix& local) {
                            for (int a = 0; a < basis.count; ++a) {
                              for (int b = 0; b < basis.count; ++b) {
                                local[a][b] += q.w * basis.values[a] * basis.values[b];
                              }
                            }
                          });
  return {FormTag::Mass, std::move(m)};
}

FormMatrix assemble_stiffness(const TraceGeometry& geometry, const DofMap& dofs) {
  auto m = surface_matrix(geometry, dofs,
                          [](std::size_t, const SurfacePatch& patch, const QuadPoint& q, const BasisEval& basis,
                             LocalMatrix& local) { add_weighted_stiffness(patch, q, basis, 1.0, local); });
  return {FormTag::Stiffness, std::move(m)};
}

FormMatrix assemble_bK(const TraceGeometry& geometry, const DofMap& dofs, const ScalarFieldFn& curvature) {
  auto m = surface_matrix(geometry, dofs,
                          [&](std::size_t, const SurfacePatch& patch, const QuadPoint& q, const BasisEval& basis,
                              LocalMatrix& local) {
                            add_weighted_stiffness(patch, q, basis, 2.0 * (1.0 - curvature(q.x)), local);
                          });
  return {FormTag::CurvatureStiffness, std::move(m)};
}

FormMatrix assemble_stabilization(const TraceGeometry& geometry, const DofMap& dofs, double rho) {
  check_compatible(geometry, dofs);
  if (!(rho >= 0.0)) {
    throw InputError("stabilization parameter must be nonnegative");
  }
  const int n = dofs.dofs_per_tet();
  std::vector<Triplet> triplets;
  triplets.reserve(dofs.num_tets() * static_cast<std::size_t>(n * n));
  std::vector<QuadPoint> pts;
  for (std::size_t i = 0; i < dofs.num_tets(); ++i) {
    const TetGeometry& tet = geometry.tets[i];
    const Vec3& nh = geometry.patches[i].n_h;
    pts.clear();
    map_tet_rule(tet.vertices, geometry.options.volume_degree, pts);
    LocalMatrix local{};
    for (const auto& q : pts) {
      const BasisEval basis = eval_basis(tet, dofs.order(), q.x);
      std::array<double, kMaxLocalDofs> dn{};
      for (int a = 0; a < n; ++a) {
        dn[a] = nh.dot(basis.gradients[a]);
      }
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          local[a][b] += rho * q.w * dn[a] * dn[b];
        }
      }
    }
    scatter(dofs, i, local, triplets);
  }
  return {FormTag::Stabilization, SparseMatrix::from_triplets(dofs.num_dofs(), std::move(triplets))};
}

std::vector<double> assemble_rhs_g(const TraceGeometry& geometry, const DofMap& dofs, const VectorFieldFn& force) {
  check_compatible(geometry, dofs);
  std::vector<double> g(static_cast<std::size_t>(dofs.num_dofs()), 0.0);
  for (std::size_t i = 0; i < dofs.num_tets(); ++i) {
    const SurfacePatch& patch = geometry.patches[i];
    const Mat3 proj = tangential_projector(patch.n_h);
    const auto l2g = dofs.local_to_global(i);
    for (const auto& q : patch.quad_points) {
      const BasisEval basis = eval_basis(geometry.tets[i], dofs.order(), q.x);
      const Vec3 f = force(q.x);
      for (int a = 0; a < basis.count; ++a) {
        const Vec3 curl = patch.n_h.cross(proj * basis.gradients[a]);
        g[static_cast<std::size_t>(l2g[a])] += -2.0 * q.w * f.dot(curl);
      }
    }
  }
  return g;
}

std::vector<double> assemble_mean_vector(const TraceGeometry& geometry, const DofMap& dofs) {
  check_compatible(geometry, dofs);
  std::vector<double> c(static_cast<std::size_t>(dofs.num_dofs()), 0.0);
  for (std::size_t i = 0; i < dofs.num_tets(); ++i) {
    const auto l2g = dofs.local_to_global(i);
    for (const auto& q : geometry.patches[i].quad_points) {
      const BasisEval basis = eval_basis(geometry.tets[i], dofs.order(), q.x);
      for (int a = 0; a < basis.count; ++a) {
        c[static_cast<std::size_t>(l2g[a])] += q.w * basis.values[a];
      }
    }
  }
  return c;
}

FeValue evaluate_fe(const DofMap& dofs, std::span<const double> coefficients, std::size_t active_index,
                    const BasisEval& basis) {
  const auto l2g = dofs.local_to_global(active_index);
  FeValue out;
  for (int a = 0; a < basis.count; ++a) {
    const double c = coefficients[static_cast<std::size_t>(l2g[a])];
    out.value += c * basis.values[a];
    out.gradient += c * basis.gradients[a];
  }
  return out;
}

FeValue evaluate_fe(const TraceGeometry& geometry, const DofMap& dofs, std::span<const double> coefficients,
                    std::size_t active_index, const Point3& x) {
  return evaluate_fe(dofs, coefficients, active_index, eval_basis(geometry.tets[active_index], dofs.order(), x));
}

std::array<std::vector<double>, 3> assemble_velocity_rhs(const TraceGeometry& geometry, const DofMap& velocity_dofs,
                                                         const DofMap& stream_dofs, std::span<const double> psi,
                                                         NormalChoice normal) {
  check_compatible(geometry, velocity_dofs);
  check_compatible(geometry, stream_dofs);
  if (static_cast<Index>(psi.size()) != stream_dofs.num_dofs()) {
    throw InputError("stream function size does not match its dof map");
  }
  std::array<std::vector<double>, 3> rhs;
  for (auto& r : rhs) {
    r.assign(static_cast<std::size_t>(velocity_dofs.num_dofs()), 0.0);
  }
  for (std::size_t i = 0; i < velocity_dofs.num_tets(); ++i) {
    const SurfacePatch& patch = geometry.patches[i];
    const Mat3 proj = tangential_projector(patch.n_h);
    const auto l2g = velocity_dofs.local_to_global(i);
    for (std::size_t qi = 0; qi < patch.quad_points.size(); ++qi) {
      const QuadPoint& q = patch.quad_points[qi];
      const FeValue stream = evaluate_fe(geometry, stream_dofs, psi, i, q.x);
      const Vec3& n = normal == NormalChoice::Improved ? patch.ntilde_h[qi] : patch.n_h;
      const Vec3 load = n.cross(proj * stream.gradient);
      const BasisEval basis = eval_basis(geometry.tets[i], velocity_dofs.order(), q.x);
      for (int a = 0; a < basis.count; ++a) {
        for (int c = 0; c < 3; ++c) {
          rhs[c][static_cast<std::size_t>(l2g[a])] += q.w * load[c] * basis.values[a];
        }
      }
    }
  }
  return rhs;
}

std::vector<double> assemble_pressure_rhs(const TraceGeometry& geometry, const DofMap& pressure_dofs,
                                          const DofMap& stream_dofs, std::span<const double> psi,
                                          const VectorFieldFn& force, const ScalarFieldFn& curvature) {
  check_compatible(geometry, pressure_dofs);
  check_compatible(geometry, stream_dofs);
  if (static_cast<Index>(psi.size()) != stream_dofs.num_dofs()) {
    throw InputError("stream function size does not match its dof map");
  }
  std::vector<double> rhs(static_cast<std::size_t>(pressure_dofs.num_dofs()), 0.0);
  for (std::size_t i = 0; i < pressure_dofs.num_tets(); ++i) {
    const SurfacePatch& patch = geometry.patches[i];
    const Mat3 proj = tangential_projector(patch.n_h);
    const auto l2g = pressure_dofs.local_to_global(i);
    for (const auto& q : patch.quad_points) {
      const FeValue stream = evaluate_fe(geometry, stream_dofs, psi, i, q.x);
      const Vec3 load = curvature(q.x) * patch.n_h.cross(proj * stream.gradient) + force(q.x);
      const BasisEval basis = eval_basis(geometry.tets[i], pressure_dofs.order(), q.x);
      for (int a = 0; a < basis.count; ++a) {
        rhs[static_cast<std::size_t>(l2g[a])] += q.w * load.dot(proj * basis.gradients[a]);
      }
    }
  }
  return rhs;
}

}  // namespace tracestokes
