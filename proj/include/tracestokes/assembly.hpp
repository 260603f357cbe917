#pragma once

#include "tracestokes/fem_space.hpp"
#include "tracestokes/linalg.hpp"
#include "tracestokes/surface.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace tracestokes {

using ScalarFieldFn = std::function<double(const Point3&)>;
using VectorFieldFn = std::function<Vec3(const Point3&)>;

enum class FormTag { Mass, Stiffness, CurvatureStiffness, Stabilization };

/// Assembled symmetric form on one dof map.
struct FormMatrix {
  FormTag tag;
  SparseMatrix matrix;

  [[nodiscard]] Index dimension() const { return matrix.size(); }
};

/// m_h(xi, eta) = int_{Gamma_h} xi eta.
[[nodiscard]] FormMatrix assemble_mass(const TraceGeometry& geometry, const DofMap& dofs);

/// b_h(xi, eta) = int_{Gamma_h} grad_{Gamma_h} xi . grad_{Gamma_h} eta, with the
/// tangential gradient (I - n_h n_h^T) grad.
[[nodiscard]] FormMatrix assemble_stiffness(const TraceGeometry& geometry, const DofMap& dofs);

/// b_{h,K}: stiffness weighted by 2 (1 - K_h).
[[nodiscard]] FormMatrix assemble_bK(const TraceGeometry& geometry, const DofMap& dofs, const ScalarFieldFn& curvature);

/// s_h(xi, eta) = rho int over the full active tets of (n_h . grad xi)(n_h . grad eta).
[[nodiscard]] FormMatrix assemble_stabilization(const TraceGeometry& geometry, const DofMap& dofs, double rho);

/// g(xi) = -2 int_{Gamma_h} f_h . (n_h x grad_{Gamma_h} xi).
[[nodiscard]] std::vector<double> assemble_rhs_g(const TraceGeometry& geometry, const DofMap& dofs,
                                                 const VectorFieldFn& force);

/// c_i = int_{Gamma_h} phi_i.
[[nodiscard]] std::vector<double> assemble_mean_vector(const TraceGeometry& geometry, const DofMap& dofs);

/// Which normal enters the velocity reconstruction load.
enum class NormalChoice { Discrete, Improved };

/// Loads int (n x grad_{Gamma_h} psi_h) . e_c phi_i for c = 0, 1, 2, where n
/// is n_h or the improved normal.
[[nodiscard]] std::array<std::vector<double>, 3> assemble_velocity_rhs(const TraceGeometry& geometry,
                                                                       const DofMap& velocity_dofs,
                                                                       const DofMap& stream_dofs,
                                                                       std::span<const double> psi,
                                                                       NormalChoice normal);

/// Load int (K_h n_h x grad_{Gamma_h} psi_h + f_h) . grad_{Gamma_h} xi_i.
[[nodiscard]] std::vector<double> assemble_pressure_rhs(const TraceGeometry& geometry, const DofMap& pressure_dofs,
                                                        const DofMap& stream_dofs, std::span<const double> psi,
                                                        const VectorFieldFn& force, const ScalarFieldFn& curvature);

/// Value and ambient gradient of a finite element function on active tet i.
struct FeValue {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();
};

[[nodiscard]] FeValue evaluate_fe(const DofMap& dofs, std::span<const double> coefficients, std::size_t active_index,
                                  const BasisEval& basis);

[[nodiscard]] FeValue evaluate_fe(const TraceGeometry& geometry, const DofMap& dofs,
                                  std::span<const double> coefficients, std::size_t active_index, const Point3& x);

}  // namespace tracestokes
