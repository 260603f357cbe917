#include "tracestokes/reconstruction.hpp"

#include <string>
#include <utility>

namespace tracestokes {

namespace {

void check_degrees(int k_recon, const DofMap& stream_dofs, const char* what) {
  if (k_recon != 1 && k_recon != 2) {
    throw InputError(std::string(what) + " degree must be 1 or 2, got " + std::to_string(k_recon));
  }
  if (k_recon > stream_dofs.order()) {
    throw InputError(std::string(what) + " degree exceeds the stream function degree");
  }
}

}  // namespace

VelocitySolution reconstruct_velocity(const TraceGeometry& geometry, const DofMap& stream_dofs,
                                      std::span<const double> psi, const VelocityParams& params) {
  check_degrees(params.k_u, stream_dofs, "velocity");
  if (params.k_g != 1 && params.k_g != 2) {
    throw InputError("normal degree k_g must be 1 or 2");
  }
  DofMap dofs(geometry.mesh, geometry.active_tets, params.k_u);
  const FormMatrix mass = assemble_mass(geometry, dofs);
  const FormMatrix stab = assemble_stabilization(geometry, dofs, params.rho_u);
  const SparseMatrix system = add(mass.matrix, 1.0, stab.matrix, 1.0);
  const auto rhs = assemble_velocity_rhs(geometry, dofs, stream_dofs, psi,
                                         params.k_g == 2 ? NormalChoice::Improved : NormalChoice::Discrete);

  VelocitySolution out{std::move(dofs), {}, params};
  const SymmetricSolver solver(system, params.linear);
  for (int c = 0; c < 3; ++c) {
    out.u[c] = solver.solve(rhs[c]);
  }
  return out;
}

PressureSolution reconstruct_pressure(const TraceGeometry& geometry, const DofMap& stream_dofs,
                                      std::span<const double> psi, const VectorFieldFn& force,
                                      const ScalarFieldFn& curvature, const PressureParams& params) {
  check_degrees(params.k_p, stream_dofs, "pressure");
  DofMap dofs(geometry.mesh, geometry.active_tets, params.k_p);
  const FormMatrix stiffness = assemble_stiffness(geometry, dofs);
  const FormMatrix stab = assemble_stabilization(geometry, dofs, params.rho_p);
  const SparseMatrix a = add(stiffness.matrix, 1.0, stab.matrix, 1.0);
  const std::vector<double> c = assemble_mean_vector(geometry, dofs);
  const std::vector<double> rhs = assemble_pressure_rhs(geometry, dofs, stream_dofs, psi, force, curvature);

  const ConstrainedSolver solver(a, c, params.linear);
  ConstrainedSolution sol = solver.solve(rhs);
  PressureSolution out{std::move(dofs), std::move(sol.x), sol.multiplier, params};
  return out;
}

}  // namespace tracestokes
