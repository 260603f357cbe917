#include "tracestokes/benchmark.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

using namespace tracestokes;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("estimated orders of convergence") {
  const std::vector<double> e{4.0, 1.0, 0.5, 0.5, 0.0, 1.0};
  const auto r = eoc(e);
  REQUIRE(r.size() == e.size());
  CHECK_FALSE(r[0].has_value());
  CHECK(*r[1] == doctest::Approx(2.0));
  CHECK(*r[2] == doctest::Approx(1.0));
  CHECK(*r[3] == doctest::Approx(0.0));
  CHECK_FALSE(r[4].has_value());
  CHECK_FALSE(r[5].has_value());
  const std::vector<double> bad{1.0, std::nan("")};
  CHECK_FALSE(eoc(bad)[1].has_value());
}

TEST_CASE("scaled parameters") {
  CHECK(ScaledParam::parse("h").resolve(0.3) == 0.3);
  CHECK(ScaledParam::parse("1").resolve(0.3) == 1.0);
  CHECK(ScaledParam::parse("1/h").resolve(0.25) == 4.0);
  CHECK(ScaledParam::parse("0").resolve(0.3) == 0.0);
  CHECK(ScaledParam::parse("0.125").resolve(0.3) == 0.125);
  CHECK(ScaledParam::parse("1/h").label() == "1/h");
  CHECK(ScaledParam::parse("2.5").label() == "2.5");
  CHECK_THROWS_AS(ScaledParam::parse("2/h"), InputError);
  CHECK_THROWS_AS(ScaledParam::parse("-1"), InputError);
  CHECK_THROWS_AS(ScaledParam::parse(""), InputError);
  CHECK_THROWS_AS(ScaledParam::parse("nan"), InputError);
}

TEST_CASE("presets") {
  CHECK(parse_preset("rho_sweep") == Preset::RhoSweep);
  CHECK(to_string(parse_preset("normal_compare")) == "normal_compare");
  CHECK_THROWS_AS((void)parse_preset("fast"), InputError);

  ExperimentConfig cfg;
  cfg.preset = Preset::RhoSweep;
  LevelPlan plan = plan_for(cfg);
  REQUIRE(plan.velocity.size() == 4);
  CHECK(plan.velocity[2].label == "rho_u=1/h");
  CHECK(plan.velocity[3].rho_u.resolve(0.5) == 0.0);
  CHECK(plan.pressure.size() == 1);

  cfg.preset = Preset::NormalCompare;
  plan = plan_for(cfg);
  REQUIRE(plan.velocity.size() == 2);
  CHECK(plan.velocity[0].k_g == 2);
  CHECK(plan.velocity[1].k_g == 1);

  cfg.preset = Preset::Kp2;
  plan = plan_for(cfg);
  REQUIRE(plan.pressure.size() == 2);
  CHECK(plan.pressure[1].k_p == 2);
}

TEST_CASE("scalar error norms") {
  const TraceGeometry geo = benchmark_geometry(1);
  const DofMap dofs(geo.mesh, geo.active_tets, 2);
  const auto constant = [](const Point3&) { return 2.5; };
  const auto zero_grad = [](const Point3&) { return Vec3::Zero(); };
  const auto coeffs = dofs.interpolate(constant);
  const ScalarErrors e = scalar_errors(geo, dofs, coeffs, constant, zero_grad, 1.0);
  CHECK(e.l2 < 1e-13);
  CHECK(e.a < 1e-13);
  // a constant offset disappears in the mean-free comparison
  const auto shifted = dofs.interpolate([](const Point3&) { return -1.0; });
  CHECK(scalar_errors(geo, dofs, shifted, constant, zero_grad, 1.0, true).l2 < 1e-13);

  const std::vector<double> zero(static_cast<std::size_t>(dofs.num_dofs()), 0.0);
  const ExactFields exact;
  const ScalarErrors z = scalar_errors(geo, dofs, zero, ScalarField::Phi, 0.0);
  double norm = 0.0;
  double grad = 0.0;
  for (const auto& patch : geo.patches) {
    for (const auto& q : patch.quad_points) {
      const double v = exact.value(ScalarField::Phi, q.x);
      norm += q.w * v * v;
      grad += q.w * (tangential_projector(patch.n_h) * exact.gradient(ScalarField::Phi, q.x)).squaredNorm();
    }
  }
  CHECK(z.l2 == doctest::Approx(std::sqrt(norm)).epsilon(1e-12));
  CHECK(z.a == doctest::Approx(std::sqrt(grad)).epsilon(1e-12));
}

TEST_CASE("velocity error norms") {
  const TraceGeometry geo = benchmark_geometry(1);
  VelocitySolution v{DofMap(geo.mesh, geo.active_tets, 1), {}, {}};
  const Vec3 a(1.0, -2.0, 0.5);
  for (int c = 0; c < 3; ++c) v.u[static_cast<std::size_t>(c)] = v.dofs.interpolate([&](const Point3&) { return a[c]; });
  const VelocityErrors e = velocity_errors(
      geo, v, [&](const Point3&) { return a; }, [](const Point3&) { return Mat3::Zero(); }, 1.0);
  CHECK(e.l2 < 1e-13);
  CHECK(e.m < 1e-13);
  CHECK(e.h1 < 1e-13);

  for (auto& c : v.u) c.assign(c.size(), 0.0);
  const VelocityErrors z = velocity_errors(
      geo, v, [&](const Point3&) { return a; }, [](const Point3&) { return Mat3::Zero(); }, 1.0);
  CHECK(z.l2 == doctest::Approx(a.norm() * std::sqrt(geo.area())).epsilon(1e-12));
  CHECK(z.m == doctest::Approx(z.l2));
  CHECK(z.h1 == doctest::Approx(z.l2));
}

TEST_CASE("stage failures carry the stage and level") {
  const StageError e("stream solve", 3, "boom");
  CHECK(e.stage() == "stream solve");
  CHECK(e.level() == 3);
  CHECK(std::string(e.what()) == "stage 'stream solve' failed on level 3: boom");

  const TraceGeometry geo = benchmark_geometry(0);
  LevelPlan plan;
  plan.linear.tol = 1e-30;
  try {
    (void)run_level(geo, 0, plan);
    FAIL("expected a stage error");
  } catch (const StageError& err) {
    CHECK(err.stage() == "stream solve");
    CHECK(err.level() == 0);
  }

  ExperimentConfig cfg;
  cfg.level_min = 2;
  cfg.level_max = 1;
  CHECK_THROWS_AS(run_experiment(cfg), InputError);
}

TEST_CASE("experiment output") {
  ExperimentConfig cfg;
  cfg.preset = Preset::Kp2;
  cfg.level_min = 0;
  cfg.level_max = 2;
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 3);
  for (std::size_t l = 1; l < rows.size(); ++l) {
    CHECK(rows[l].psi.l2 < rows[l - 1].psi.l2);
    CHECK(rows[l].phi.a < rows[l - 1].phi.a);
    CHECK(rows[l].u.m < rows[l - 1].u.m);
    CHECK(rows[l].p.l2 < rows[l - 1].p.l2);
    CHECK(rows[l].ptilde->a < rows[l - 1].ptilde->a);
    CHECK(rows[l].stream_dofs > rows[l - 1].stream_dofs);
  }

  std::ostringstream tsv;
  write_tsv(tsv, cfg.preset, rows);
  const auto lines = lines_of(tsv.str());
  REQUIRE(lines.size() == 4);
  const auto header = split(lines[0], '\t');
  CHECK(header.size() >= 16);
  CHECK(header[0] == "preset");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], '\t');
    CHECK(cells.size() == header.size());
    CHECK(cells[0] == "kp2");
    CHECK(cells[2] == std::to_string(i - 1));
  }
  // first level has no rate, later ones do
  const auto first = split(lines[1], '\t');
  const auto second = split(lines[2], '\t');
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "psi_L2_eoc") {
      CHECK(first[c].empty());
      CHECK(!second[c].empty());
    }
  }

  // same inputs, same bytes
  std::ostringstream again;
  write_tsv(again, cfg.preset, run_experiment(cfg));
  CHECK(again.str() == tsv.str());
}

TEST_CASE("standard preset leaves the tilde pressure columns blank") {
  ExperimentConfig cfg;
  cfg.level_min = 0;
  cfg.level_max = 0;
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].ptilde.has_value());
  std::ostringstream tsv;
  write_tsv(tsv, cfg.preset, rows);
  const auto lines = lines_of(tsv.str());
  const auto header = split(lines[0], '\t');
  const auto cells = split(lines[1], '\t');
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].rfind("ptilde", 0) == 0) CHECK(cells[c].empty());
  }
}
