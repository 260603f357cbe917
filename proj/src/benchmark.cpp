#include "tracestokes/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <utility>

namespace tracestokes {

namespace {

constexpr double kSphereArea = 4.0 * 3.14159265358979323846;

double unit_curvature(const Point3& /*x*/) { return ExactFields::kGaussCurvature; }

template <class Fn>
auto run_stage(const char* stage, int level, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, level, e.what());
  }
}

}  // namespace

StageError::StageError(std::string stage, int level, const std::string& what)
    : std::runtime_error("stage '" + stage + "' failed on level " + std::to_string(level) + ": " + what),
      stage_(std::move(stage)),
      level_(level) {}

ScaledParam ScaledParam::parse(std::string_view text) {
  if (text == "h") return h();
  if (text == "1") return one();
  if (text == "1/h") return inv_h();
  if (text == "0") return zero();
  const std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(value) || value < 0.0) {
    throw InputError("invalid parameter value '" + s + "' (expected h, 1, 1/h, 0 or a non-negative real)");
  }
  return literal(value);
}

double ScaledParam::resolve(double h) const {
  switch (kind_) {
    case Kind::H:
      return h;
    case Kind::One:
      return 1.0;
    case Kind::InvH:
      return 1.0 / h;
    case Kind::Zero:
      return 0.0;
    case Kind::Literal:
      return value_;
  }
  return 0.0;
}

std::string ScaledParam::label() const {
  switch (kind_) {
    case Kind::H:
      return "h";
    case Kind::One:
      return "1";
    case Kind::InvH:
      return "1/h";
    case Kind::Zero:
      return "0";
    case Kind::Literal: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", value_);
      return buf;
    }
  }
  return {};
}

ScalarErrors scalar_errors(const TraceGeometry& geometry, const DofMap& dofs, std::span<const double> coefficients,
                           const ScalarFieldFn& exact, const VectorFieldFn& exact_gradient, double rho,
                           bool mean_free) {
  double shift = 0.0;
  if (mean_free) {
    double integral = 0.0;
    double area = 0.0;
    for (std::size_t i = 0; i < geometry.patches.size(); ++i) {
      for (const QuadPoint& q : geometry.patches[i].quad_points) {
        const FeValue fe = evaluate_fe(dofs, coefficients, i, eval_basis(geometry.tets[i], dofs.order(), q.x));
        integral += q.w * (exact(q.x) - fe.value);
        area += q.w;
      }
    }
    shift = integral / area;
  }

  double l2 = 0.0;
  double surf = 0.0;
  double vol = 0.0;
  std::vector<QuadPoint> points;
  for (std::size_t i = 0; i < geometry.patches.size(); ++i) {
    const TetGeometry& tet = geometry.tets[i];
    const SurfacePatch& patch = geometry.patches[i];
    const Mat3 p = tangential_projector(patch.n_h);
    for (const QuadPoint& q : patch.quad_points) {
      const FeValue fe = evaluate_fe(dofs, coefficients, i, eval_basis(tet, dofs.order(), q.x));
      const double e = exact(q.x) - fe.value - shift;
      const Vec3 ge = p * (exact_gradient(q.x) - fe.gradient);
      l2 += q.w * e * e;
      surf += q.w * ge.squaredNorm();
    }
    if (rho > 0.0) {
      points.clear();
      map_tet_rule(tet.vertices, geometry.options.volume_degree, points);
      for (const QuadPoint& q : points) {
        const FeValue fe = evaluate_fe(dofs, coefficients, i, eval_basis(tet, dofs.order(), q.x));
        const double dn = patch.n_h.dot(exact_gradient(q.x) - fe.gradient);
        vol += q.w * dn * dn;
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(surf + rho * vol)};
}

ScalarErrors scalar_errors(const TraceGeometry& geometry, const DofMap& dofs, std::span<const double> coefficients,
                           ScalarField field, double rho) {
  const ExactFields exact;
  return scalar_errors(
      geometry, dofs, coefficients, [&](const Point3& x) { return exact.value(field, x); },
      [&](const Point3& x) { return exact.gradient(field, x); }, rho, field != ScalarField::Phi);
}

VelocityErrors velocity_errors(const TraceGeometry& geometry, const VelocitySolution& velocity,
                               const VectorFieldFn& exact, const JacobianFieldFn& exact_jacobian, double rho_u) {
  const DofMap& dofs = velocity.dofs;
  double l2 = 0.0;
  double grad = 0.0;
  double vol = 0.0;
  std::vector<QuadPoint> points;

  // e = u - u_h and its ambient Jacobian (row c = gradient of component c)
  auto error_at = [&](std::size_t i, const Point3& x, Vec3& e, Mat3& g) {
    const BasisEval basis = eval_basis(geometry.tets[i], dofs.order(), x);
    e = exact(x);
    g = exact_jacobian(x);
    for (int c = 0; c < 3; ++c) {
      const FeValue fe = evaluate_fe(dofs, velocity.u[c], i, basis);
      e[c] -= fe.value;
      g.row(c) -= fe.gradient.transpose();
    }
  };

  Vec3 e;
  Mat3 g;
  for (std::size_t i = 0; i < geometry.patches.size(); ++i) {
    const SurfacePatch& patch = geometry.patches[i];
    const Mat3 p = tangential_projector(patch.n_h);
    for (const QuadPoint& q : patch.quad_points) {
      error_at(i, q.x, e, g);
      l2 += q.w * e.squaredNorm();
      grad += q.w * (g * p).squaredNorm();
    }
    if (rho_u > 0.0) {
      points.clear();
      map_tet_rule(geometry.tets[i].vertices, geometry.options.volume_degree, points);
      for (const QuadPoint& q : points) {
        error_at(i, q.x, e, g);
        vol += q.w * (g * patch.n_h).squaredNorm();
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(l2 + rho_u * vol), std::sqrt(grad + l2)};
}

VelocityErrors velocity_errors(const TraceGeometry& geometry, const VelocitySolution& velocity, double rho_u) {
  const ExactFields exact;
  return velocity_errors(
      geometry, velocity, [&](const Point3& x) { return exact.velocity(x); },
      [&](const Point3& x) { return exact.velocity_jacobian(x); }, rho_u);
}

std::vector<std::optional<double>> eoc(std::span<const double> errors) {
  std::vector<std::optional<double>> out(errors.size());
  for (std::size_t l = 1; l < errors.size(); ++l) {
    const double prev = errors[l - 1];
    const double cur = errors[l];
    if (prev > 0.0 && cur > 0.0 && std::isfinite(prev) && std::isfinite(cur)) {
      out[l] = std::log2(prev / cur);
    }
  }
  return out;
}

TraceGeometry benchmark_geometry(int level, const MeshLimits& limits) {
  if (level < 0) throw InputError("level must be non-negative");
  return build_level_geometry(std::make_shared<SphereLevelSet>(1.0), Box{}, level, GeometryOptions{}, limits);
}

LevelResult run_level(const TraceGeometry& geometry, int level, const LevelPlan& plan) {
  const auto start = std::chrono::steady_clock::now();
  const double h = geometry.h();
  LevelResult r;
  r.level = level;
  r.h = h;
  r.active_tets = static_cast<Index>(geometry.active_tets.size());
  r.area = geometry.area();
  r.energy = run_stage("energy identity", level, [&] { return check_energy_identity(geometry); });

  SolverParams sp;
  sp.k = plan.k;
  sp.rho = plan.rho.resolve(h);
  sp.level = level;
  sp.linear = plan.linear;

  // Keep only the dofs and the solution; the stream matrices are large.
  std::unique_ptr<DofMap> stream_dofs;
  StreamSolution stream;
  run_stage("stream solve", level, [&] {
    StreamResult res = solve_stream(geometry, sp, eval_force, unit_curvature);
    stream_dofs = std::make_unique<DofMap>(std::move(res.system.dofs));
    stream = std::move(res.solution);
    return 0;
  });
  r.stream_dofs = stream_dofs->num_dofs();
  r.psi_mean = dot(assemble_mean_vector(geometry, *stream_dofs), stream.psi);

  run_stage("stream errors", level, [&] {
    r.psi = scalar_errors(geometry, *stream_dofs, stream.psi, ScalarField::Psi, sp.rho);
    r.phi = scalar_errors(geometry, *stream_dofs, stream.phi, ScalarField::Phi, sp.rho);
    return 0;
  });

  for (const VelocityVariant& v : plan.velocity) {
    VelocityParams vp;
    vp.k_u = v.k_u;
    vp.k_g = v.k_g;
    vp.rho_u = v.rho_u.resolve(h);
    vp.linear = plan.linear;
    const VelocitySolution u =
        run_stage("velocity reconstruction", level, [&] { return reconstruct_velocity(geometry, *stream_dofs, stream.psi, vp); });
    r.velocity.push_back(run_stage("velocity errors", level, [&] { return velocity_errors(geometry, u, vp.rho_u); }));
  }

  for (const PressureVariant& v : plan.pressure) {
    PressureParams pp;
    pp.k_p = v.k_p;
    pp.rho_p = v.rho_p.resolve(h);
    pp.linear = plan.linear;
    const PressureSolution p = run_stage("pressure reconstruction", level, [&] {
      return reconstruct_pressure(geometry, *stream_dofs, stream.psi, eval_force, unit_curvature, pp);
    });
    r.pressure.push_back(run_stage("pressure errors", level, [&] {
      return scalar_errors(geometry, p.dofs, p.p, ScalarField::Pressure, pp.rho_p);
    }));
  }

  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Preset parse_preset(std::string_view name) {
  if (name == "standard") return Preset::Standard;
  if (name == "rho_sweep") return Preset::RhoSweep;
  if (name == "normal_compare") return Preset::NormalCompare;
  if (name == "kp2") return Preset::Kp2;
  throw InputError("unknown preset '" + std::string(name) + "'");
}

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::Standard:
      return "standard";
    case Preset::RhoSweep:
      return "rho_sweep";
    case Preset::NormalCompare:
      return "normal_compare";
    case Preset::Kp2:
      return "kp2";
  }
  return "?";
}

LevelPlan plan_for(const ExperimentConfig& config) {
  LevelPlan plan;
  plan.k = config.k;
  plan.rho = config.rho;
  plan.linear.tol = config.tol;
  plan.linear.method = config.solver;
  const PressureVariant pressure{"k_p=" + std::to_string(config.k_p), config.k_p, config.rho_p};
  plan.pressure.push_back(pressure);
  auto velocity = [&](std::string label, int k_g, ScaledParam rho_u) {
    plan.velocity.push_back({std::move(label), config.k_u, k_g, rho_u});
  };
  switch (config.preset) {
    case Preset::Standard:
      velocity("standard", config.k_g, config.rho_u);
      break;
    case Preset::Kp2:
      velocity("kp2", config.k_g, config.rho_u);
      plan.pressure.push_back({"k_p=2", 2, config.rho_p});
      break;
    case Preset::RhoSweep:
      for (const ScaledParam& rho_u : {ScaledParam::h(), ScaledParam::one(), ScaledParam::inv_h(), ScaledParam::zero()}) {
        velocity("rho_u=" + rho_u.label(), config.k_g, rho_u);
      }
      break;
    case Preset::NormalCompare:
      velocity("k_g=2", 2, config.rho_u);
      velocity("k_g=1", 1, config.rho_u);
      break;
  }
  return plan;
}

std::vector<ErrorReport> run_experiment(const ExperimentConfig& config, std::ostream* log) {
  if (config.level_min < 0 || config.level_max < config.level_min) {
    throw InputError("invalid level range");
  }
  const LevelPlan plan = plan_for(config);
  std::vector<LevelResult> levels;
  for (int level = config.level_min; level <= config.level_max; ++level) {
    const TraceGeometry geometry = run_stage("geometry", level, [&] { return benchmark_geometry(level); });
    if (!config.dump_surface.empty() && level == config.level_max) {
      run_stage("surface dump", level, [&] {
        std::ofstream obj(config.dump_surface);
        if (!obj) throw InputError("cannot open " + config.dump_surface);
        write_obj(obj, geometry);
        return 0;
      });
    }
    levels.push_back(run_level(geometry, level, plan));
    if (log) {
      const LevelResult& r = levels.back();
      *log << "level " << level << ": h=" << r.h << " active_tets=" << r.active_tets
           << " stream_dofs=" << r.stream_dofs << " time=" << r.seconds << "s\n";
    }
  }

  std::vector<ErrorReport> rows;
  for (std::size_t v = 0; v < plan.velocity.size(); ++v) {
    for (const LevelResult& r : levels) {
      ErrorReport row;
      row.variant = plan.velocity[v].label;
      row.level = r.level;
      row.h = r.h;
      row.stream_dofs = r.stream_dofs;
      row.area = r.area;
      row.energy_gap = r.energy.relative_gap();
      row.psi = r.psi;
      row.phi = r.phi;
      row.u = r.velocity[v];
      row.p = r.pressure[0];
      if (r.pressure.size() > 1) row.ptilde = r.pressure[1];
      rows.push_back(std::move(row));
    }
  }

  if (!config.out.empty()) {
    std::ofstream out(config.out);
    if (!out) throw StageError("output", config.level_max, "cannot open " + config.out);
    write_tsv(out, config.preset, rows);
    if (!out) throw StageError("output", config.level_max, "write failed for " + config.out);
  }
  return rows;
}

void write_tsv(std::ostream& out, Preset preset, std::span<const ErrorReport> reports) {
  using Getter = std::optional<double> (*)(const ErrorReport&);
  struct Column {
    const char* name;
    Getter get;
  };
  static const Column kErrorColumns[] = {
      {"area_err", [](const ErrorReport& r) -> std::optional<double> { return std::abs(r.area - kSphereArea); }},
      {"energy_gap", [](const ErrorReport& r) -> std::optional<double> { return r.energy_gap; }},
      {"psi_L2", [](const ErrorReport& r) -> std::optional<double> { return r.psi.l2; }},
      {"psi_A", [](const ErrorReport& r) -> std::optional<double> { return r.psi.a; }},
      {"phi_L2", [](const ErrorReport& r) -> std::optional<double> { return r.phi.l2; }},
      {"phi_A", [](const ErrorReport& r) -> std::optional<double> { return r.phi.a; }},
      {"u_M", [](const ErrorReport& r) -> std::optional<double> { return r.u.m; }},
      {"u_L2", [](const ErrorReport& r) -> std::optional<double> { return r.u.l2; }},
      {"u_H1", [](const ErrorReport& r) -> std::optional<double> { return r.u.h1; }},
      {"p_L2", [](const ErrorReport& r) -> std::optional<double> { return r.p.l2; }},
      {"p_A", [](const ErrorReport& r) -> std::optional<double> { return r.p.a; }},
      {"ptilde_L2",
       [](const ErrorReport& r) -> std::optional<double> {
         return r.ptilde ? std::optional<double>(r.ptilde->l2) : std::nullopt;
       }},
      {"ptilde_A",
       [](const ErrorReport& r) -> std::optional<double> {
         return r.ptilde ? std::optional<double>(r.ptilde->a) : std::nullopt;
       }},
  };

  auto fmt = [](std::optional<double> v) -> std::string {
    if (!v) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", *v);
    return buf;
  };

  out << "preset\tvariant\tlevel\th\tstream_dofs\tarea";
  for (const Column& c : kErrorColumns) out << '\t' << c.name << '\t' << c.name << "_eoc";
  out << '\n';

  // EOC runs over consecutive rows of the same variant.
  std::size_t begin = 0;
  while (begin < reports.size()) {
    std::size_t end = begin + 1;
    while (end < reports.size() && reports[end].variant == reports[begin].variant) ++end;
    const auto group = reports.subspan(begin, end - begin);

    std::vector<std::vector<std::optional<double>>> rates;
    for (const Column& c : kErrorColumns) {
      std::vector<double> values;
      for (const ErrorReport& r : group) values.push_back(c.get(r).value_or(0.0));
      rates.push_back(eoc(values));
    }
    for (std::size_t l = 0; l < group.size(); ++l) {
      const ErrorReport& r = group[l];
      out << to_string(preset) << '\t' << r.variant << '\t' << r.level << '\t' << fmt(r.h) << '\t' << r.stream_dofs
          << '\t' << fmt(r.area);
      for (std::size_t c = 0; c < std::size(kErrorColumns); ++c) {
        out << '\t' << fmt(kErrorColumns[c].get(r)) << '\t' << fmt(rates[c][l]);
      }
      out << '\n';
    }
    begin = end;
  }
}

}  // namespace tracestokes
