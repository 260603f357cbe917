#pragma once

#include "tracestokes/assembly.hpp"
#include "tracestokes/fem_space.hpp"
#include "tracestokes/linalg.hpp"
#include "tracestokes/surface.hpp"

#include <optional>
#include <vector>

namespace tracestokes {

struct SolverParams {
  /// Polynomial degree of stream function and vorticity (1 or 2).
  int k = 2;
  /// Normal-derivative stabilization parameter.
  double rho = 0.0;
  /// Only alpha = 1 is supported.
  double alpha = 1.0;
  int level = 0;
  SolverOptions linear;
};

struct StreamSolution {
  std::vector<double> psi;
  std::vector<double> phi;
  double multiplier = 0.0;
};

/// Assembled coupled system
///
///   [ M     B+S   0 ] [phi]   [0]
///   [ B+S  -BK    c ] [psi] = [g]
///   [ 0     c^T   0 ] [lam]   [0]
struct StreamSystem {
  DofMap dofs;
  FormMatrix mass;
  FormMatrix stiffness;
  FormMatrix curvature_stiffness;
  FormMatrix stabilization;
  SparseMatrix stiffness_plus_stab;
  std::vector<double> load;
  std::vector<double> mean;
  SaddleSystem system;
};

[[nodiscard]] StreamSystem assemble_stream_system(const TraceGeometry& geometry, const SolverParams& params,
                                                  const VectorFieldFn& force, const ScalarFieldFn& curvature);

struct StreamResult {
  StreamSystem system;
  StreamSolution solution;
  SolveStats stats;
};

/// Solves the discrete stream-function/vorticity system; psi_h has zero mean
/// on the discrete surface.
[[nodiscard]] StreamResult solve_stream(const TraceGeometry& geometry, const SolverParams& params,
                                        const VectorFieldFn& force, const ScalarFieldFn& curvature);

/// Residuals of both discrete equations and of the mean constraint,
/// recomputed from the individual forms (not from the block matrix).
struct StreamResiduals {
  double first = 0.0;   // |M phi + (B+S) psi|
  double second = 0.0;  // |(B+S) phi - BK psi + c lam - g|
  double mean = 0.0;    // |c^T psi|
};

[[nodiscard]] StreamResiduals stream_residuals(const StreamSystem& system, const StreamSolution& solution);

}  // namespace tracestokes
