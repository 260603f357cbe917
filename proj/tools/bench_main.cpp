#include "tracestokes/benchmark.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <regex>
#include <string>

namespace ts = tracestokes;

namespace {

void parse_levels(const std::string& text, ts::ExperimentConfig& config) {
  static const std::regex range(R"(^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, range)) {
    throw ts::InputError("--levels expects A..B or a single level, got '" + text + "'");
  }
  config.level_min = std::stoi(m[1].str());
  config.level_max = m[2].matched ? std::stoi(m[2].str()) : config.level_min;
  if (config.level_max < config.level_min) {
    throw ts::InputError("--levels: upper bound below lower bound");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TraceFEM surface Stokes benchmark on the unit sphere (stream function formulation)"};

  std::string preset = "standard";
  std::string levels = "0..4";
  std::string rho = "h";
  std::string rho_u = "h";
  std::string rho_p = "h";
  std::string solver = "direct";
  ts::ExperimentConfig config;

  app.add_option("--preset", preset, "standard, rho_sweep, normal_compare or kp2")
      ->check(CLI::IsMember({"standard", "rho_sweep", "normal_compare", "kp2"}))
      ->capture_default_str();
  app.add_option("--levels", levels, "refinement levels, A..B")->capture_default_str();
  app.add_option("--k", config.k, "stream function / vorticity degree")->check(CLI::Range(1, 2))->capture_default_str();
  app.add_option("--ku", config.k_u, "velocity degree")->check(CLI::Range(1, 2))->capture_default_str();
  app.add_option("--kp", config.k_p, "pressure degree")->check(CLI::Range(1, 2))->capture_default_str();
  app.add_option("--kg", config.k_g, "normal in the velocity load: 2 improved, 1 discrete")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  app.add_option("--rho", rho, "stream stabilization: h, 1, 1/h, 0 or a real")->capture_default_str();
  app.add_option("--rho-u", rho_u, "velocity stabilization")->capture_default_str();
  app.add_option("--rho-p", rho_p, "pressure stabilization")->capture_default_str();
  app.add_option("--out", config.out, "output TSV path (stdout when omitted)");
  app.add_option("--dump-surface", config.dump_surface, "write the finest discrete surface as OBJ");
  app.add_option("--tol", config.tol, "relative residual tolerance of the linear solves")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--solver", solver, "direct or minres")
      ->check(CLI::IsMember({"direct", "minres"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    config.preset = ts::parse_preset(preset);
    parse_levels(levels, config);
    config.rho = ts::ScaledParam::parse(rho);
    config.rho_u = ts::ScaledParam::parse(rho_u);
    config.rho_p = ts::ScaledParam::parse(rho_p);
    config.solver = solver == "minres" ? ts::SolverMethod::Minres : ts::SolverMethod::Direct;
  } catch (const ts::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const auto rows = ts::run_experiment(config, &std::cerr);
    if (config.out.empty()) ts::write_tsv(std::cout, config.preset, rows);
  } catch (const ts::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
