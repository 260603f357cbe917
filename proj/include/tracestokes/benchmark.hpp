#pragma once

#include "tracestokes/exact_solutions.hpp"
#include "tracestokes/linalg.hpp"
#include "tracestokes/reconstruction.hpp"
#include "tracestokes/stream_solver.hpp"
#include "tracestokes/surface.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tracestokes {

/// Failure of one pipeline stage on one level.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, int level, const std::string& what);

  [[nodiscard]] const std::string& stage() const { return stage_; }
  [[nodiscard]] int level() const { return level_; }

 private:
  std::string stage_;
  int level_;
};

/// Parameter given either as a power of h (h, 1, 1/h), zero, or a literal.
class ScaledParam {
 public:
  enum class Kind { H, One, InvH, Zero, Literal };

  ScaledParam() = default;
  static ScaledParam h() { return ScaledParam(Kind::H, 0.0); }
  static ScaledParam one() { return ScaledParam(Kind::One, 0.0); }
  static ScaledParam inv_h() { return ScaledParam(Kind::InvH, 0.0); }
  static ScaledParam zero() { return ScaledParam(Kind::Zero, 0.0); }
  static ScaledParam literal(double value) { return ScaledParam(Kind::Literal, value); }

  /// Accepts "h", "1", "1/h", "0" or a real number. Throws InputError.
  static ScaledParam parse(std::string_view text);

  [[nodiscard]] double resolve(double h) const;
  [[nodiscard]] std::string label() const;
  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  ScaledParam(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_ = Kind::H;
  double value_ = 0.0;
};

/// L2(Gamma_h) and energy-norm errors of a scalar field.
struct ScalarErrors {
  double l2 = 0.0;
  /// (b_h(e, e) + s_h(e, e))^{1/2}
  double a = 0.0;
};

struct VelocityErrors {
  double l2 = 0.0;
  /// (m_h(e, e) + s_h(e, e))^{1/2}
  double m = 0.0;
  /// (|grad_{Gamma_h} e|^2 + |e|^2)^{1/2}, componentwise tangential gradients
  double h1 = 0.0;
};

/// Errors of a P_k function against a closed-form field, by surface and
/// volume quadrature on the level's geometry. With `mean_free` the
/// Gamma_h-mean of the error is removed before the L2 norm is taken.
[[nodiscard]] ScalarErrors scalar_errors(const TraceGeometry& geometry, const DofMap& dofs,
                                         std::span<const double> coefficients, const ScalarFieldFn& exact,
                                         const VectorFieldFn& exact_gradient, double rho, bool mean_free = false);

/// Benchmark field; psi and p are only defined up to constants and are
/// compared mean-free.
[[nodiscard]] ScalarErrors scalar_errors(const TraceGeometry& geometry, const DofMap& dofs,
                                         std::span<const double> coefficients, ScalarField field, double rho);

using JacobianFieldFn = std::function<Mat3(const Point3&)>;

[[nodiscard]] VelocityErrors velocity_errors(const TraceGeometry& geometry, const VelocitySolution& velocity,
                                             const VectorFieldFn& exact, const JacobianFieldFn& exact_jacobian,
                                             double rho_u);

/// Against the benchmark velocity.
[[nodiscard]] VelocityErrors velocity_errors(const TraceGeometry& geometry, const VelocitySolution& velocity,
                                             double rho_u);

/// Estimated orders log2(e_{L-1} / e_L); empty at the first level and where
/// an error is zero or missing.
[[nodiscard]] std::vector<std::optional<double>> eoc(std::span<const double> errors);

struct VelocityVariant {
  std::string label;
  int k_u = 1;
  int k_g = 2;
  ScaledParam rho_u = ScaledParam::h();
};

struct PressureVariant {
  std::string label;
  int k_p = 1;
  ScaledParam rho_p = ScaledParam::h();
};

/// Everything solved on one level: one stream solve, then any number of
/// velocity and pressure reconstructions.
struct LevelPlan {
  int k = 2;
  ScaledParam rho = ScaledParam::h();
  std::vector<VelocityVariant> velocity;
  std::vector<PressureVariant> pressure;
  SolverOptions linear;
};

struct LevelResult {
  int level = 0;
  double h = 0.0;
  Index active_tets = 0;
  Index stream_dofs = 0;
  double area = 0.0;
  EnergyIdentity energy;
  ScalarErrors psi;
  ScalarErrors phi;
  double psi_mean = 0.0;  // int_{Gamma_h} psi_h
  std::vector<VelocityErrors> velocity;
  std::vector<ScalarErrors> pressure;
  double seconds = 0.0;
};

/// Unit sphere in [-2, 2]^3 at the given refinement level.
[[nodiscard]] TraceGeometry benchmark_geometry(int level, const MeshLimits& limits = {});

/// Raises on failure with the stage name and level in the message.
[[nodiscard]] LevelResult run_level(const TraceGeometry& geometry, int level, const LevelPlan& plan);

enum class Preset { Standard, RhoSweep, NormalCompare, Kp2 };

[[nodiscard]] Preset parse_preset(std::string_view name);
[[nodiscard]] std::string_view to_string(Preset preset);

struct ExperimentConfig {
  Preset preset = Preset::Standard;
  int level_min = 0;
  int level_max = 4;
  int k = 2;
  int k_u = 1;
  int k_p = 1;
  int k_g = 2;
  ScaledParam rho = ScaledParam::h();
  ScaledParam rho_u = ScaledParam::h();
  ScaledParam rho_p = ScaledParam::h();
  std::string out;
  std::string dump_surface;
  double tol = 1e-10;
  SolverMethod solver = SolverMethod::Direct;
};

/// One output line: a level and a parameter variant.
struct ErrorReport {
  std::string variant;
  int level = 0;
  double h = 0.0;
  Index stream_dofs = 0;
  double area = 0.0;
  double energy_gap = 0.0;
  ScalarErrors psi;
  ScalarErrors phi;
  VelocityErrors u;
  ScalarErrors p;
  std::optional<ScalarErrors> ptilde;
};

[[nodiscard]] LevelPlan plan_for(const ExperimentConfig& config);

/// Builds meshes, solves and measures each level; writes config.out as TSV
/// when set and returns the rows (sorted by variant, then level).
std::vector<ErrorReport> run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Header plus one line per report, fixed columns, 6 significant digits.
void write_tsv(std::ostream& out, Preset preset, std::span<const ErrorReport> reports);

}  // namespace tracestokes
