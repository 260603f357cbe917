#include "tracestokes/stream_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace tracestokes {

StreamSystem assemble_stream_system(const TraceGeometry& geometry, const SolverParams& params,
                                    const VectorFieldFn& force, const ScalarFieldFn& curvature) {
  if (params.k != 1 && params.k != 2) {
    throw InputError("stream function degree must be 1 or 2, got " + std::to_string(params.k));
  }
  if (params.alpha != 1.0) {
    throw InputError("only alpha = 1 is supported");
  }
  DofMap dofs(geometry.mesh, geometry.active_tets, params.k);
  FormMatrix mass = assemble_mass(geometry, dofs);
  FormMatrix stiffness = assemble_stiffness(geometry, dofs);
  FormMatrix bk = assemble_bK(geometry, dofs, curvature);
  FormMatrix stab = assemble_stabilization(geometry, dofs, params.rho);
  SparseMatrix a = add(stiffness.matrix, 1.0, stab.matrix, 1.0);
  std::vector<double> g = assemble_rhs_g(geometry, dofs, force);
  std::vector<double> c = assemble_mean_vector(geometry, dofs);

  const Index n = dofs.num_dofs();
  const std::array<Index, 2> sizes{n, n};
  const std::array<BlockTerm, 4> terms{{
      {0, 0, &mass.matrix, 1.0},
      {0, 1, &a, 1.0},
      {1, 0, &a, 1.0},
      {1, 1, &bk.matrix, -1.0},
  }};
  const std::array<BlockConstraint, 1> constraints{{{1, c}}};
  const std::array<std::vector<double>, 2> rhs{std::vector<double>{}, g};
  SaddleSystem sys = assemble_saddle(sizes, terms, constraints, rhs);

  return StreamSystem{std::move(dofs), std::move(mass), std::move(stiffness), std::move(bk), std::move(stab),
                      std::move(a),    std::move(g),    std::move(c),         std::move(sys)};
}

StreamResult solve_stream(const TraceGeometry& geometry, const SolverParams& params, const VectorFieldFn& force,
                          const ScalarFieldFn& curvature) {
  StreamResult result{assemble_stream_system(geometry, params, force, curvature), {}, {}};
  const StreamSystem& s = result.system;

  if (s.curvature_stiffness.matrix.max_abs() == 0.0) {
    // b_K vanishes (K = alpha): phi and psi decouple into two mean-free
    // solves with B + S. Testing the first equation with 1 gives int phi = 0.
    const ConstrainedSolver solver(s.stiffness_plus_stab, s.mean, params.linear);
    SolveStats first;
    SolveStats second;
    ConstrainedSolution phi = solver.solve(s.load, &first);
    std::vector<double> rhs = matvec(s.mass.matrix, phi.x);
    for (double& v : rhs) v = -v;
    ConstrainedSolution psi = solver.solve(rhs, &second);
    result.solution.phi = std::move(phi.x);
    result.solution.psi = std::move(psi.x);
    result.solution.multiplier = phi.multiplier;
    result.stats.relative_residual = std::max(first.relative_residual, second.relative_residual);
    result.stats.iterations = first.iterations + second.iterations;
    return result;
  }

  const SaddleSystem& sys = s.system;
  const std::vector<double> x = solve_symmetric(sys, params.linear, &result.stats);
  const auto phi = sys.block(x, 0);
  const auto psi = sys.block(x, 1);
  result.solution.phi.assign(phi.begin(), phi.end());
  result.solution.psi.assign(psi.begin(), psi.end());
  result.solution.multiplier = sys.multiplier(x, 0);
  return result;
}

StreamResiduals stream_residuals(const StreamSystem& system, const StreamSolution& solution) {
  const auto m_phi = matvec(system.mass.matrix, solution.phi);
  const auto a_psi = matvec(system.stiffness.matrix, solution.psi);
  const auto s_psi = matvec(system.stabilization.matrix, solution.psi);
  const auto a_phi = matvec(system.stiffness.matrix, solution.phi);
  const auto s_phi = matvec(system.stabilization.matrix, solution.phi);
  const auto bk_psi = matvec(system.curvature_stiffness.matrix, solution.psi);
  std::vector<double> r1(m_phi.size());
  std::vector<double> r2(m_phi.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    r1[i] = m_phi[i] + a_psi[i] + s_psi[i];
    r2[i] = a_phi[i] + s_phi[i] - bk_psi[i] + system.mean[i] * solution.multiplier - system.load[i];
  }
  return {norm2(r1), norm2(r2), std::abs(dot(system.mean, solution.psi))};
}

}  // namespace tracestokes
