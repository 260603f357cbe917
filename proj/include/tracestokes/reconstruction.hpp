#pragma once

#include "tracestokes/assembly.hpp"
#include "tracestokes/fem_space.hpp"
#include "tracestokes/linalg.hpp"
#include "tracestokes/surface.hpp"

#include <array>
#include <span>
#include <vector>

namespace tracestokes {

struct VelocityParams {
  int k_u = 1;
  /// 2: improved normal in the load, 1: piecewise constant n_h.
  int k_g = 2;
  double rho_u = 0.0;
  SolverOptions linear;
};

/// Three scalar P_{k_u} fields, one per Cartesian component.
struct VelocitySolution {
  DofMap dofs;
  std::array<std::vector<double>, 3> u;
  VelocityParams params;
};

/// Solves (M + S_{rho_u}) u_c = rhs_c for each component; the stabilization
/// always uses n_h.
[[nodiscard]] VelocitySolution reconstruct_velocity(const TraceGeometry& geometry, const DofMap& stream_dofs,
                                                    std::span<const double> psi, const VelocityParams& params);

struct PressureParams {
  int k_p = 1;
  double rho_p = 0.0;
  SolverOptions linear;
};

struct PressureSolution {
  DofMap dofs;
  std::vector<double> p;
  double multiplier = 0.0;
  PressureParams params;
};

/// Mean-free stabilized Laplace-Beltrami solve
/// (B + S_{rho_p}) p = int (K_h curl psi_h + f_h) . grad xi.
[[nodiscard]] PressureSolution reconstruct_pressure(const TraceGeometry& geometry, const DofMap& stream_dofs,
                                                    std::span<const double> psi, const VectorFieldFn& force,
                                                    const ScalarFieldFn& curvature, const PressureParams& params);

}  // namespace tracestokes
