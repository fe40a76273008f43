// aisr: figure reproduction, parameter sweeps, Monte Carlo validation and
// single-point reports for the AI-race evolutionary game.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "aisr/sweep.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitSpecError = 2;

nlohmann::json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw aisr::InvalidParams(path + ": " + e.what());
  }
}

void apply_thread_env() {
  if (const char* env = std::getenv("AISR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AI development race: evolutionary dynamics, zones and figure data"};
  app.require_subcommand(1);

  std::string figure_id;
  std::string out_dir = ".";
  auto* figure = app.add_subcommand("figure", "Write the data behind a figure panel");
  figure->add_option("id", figure_id, "fig1a fig1b fig1c fig2a fig2b fig2c fig3a fig3b fig3c")
      ->required();
  figure->add_option("--out", out_dir, "Output directory");

  std::string sweep_spec;
  auto* sweep = app.add_subcommand("sweep", "Evaluate a parameter grid from a JSON spec");
  sweep->add_option("--spec", sweep_spec, "Sweep spec file")->required();

  std::string validate_spec;
  std::string validate_out;
  aisr::SimConfig sim;
  auto* validate = app.add_subcommand("validate", "Monte Carlo check of the analytic chain");
  validate->add_option("--spec", validate_spec, "Sweep spec file with the grid")->required();
  validate->add_option("--runs", sim.runs, "Replicates per fixation estimate")->required();
  validate->add_option("--seed", sim.seed, "Master seed")->required();
  validate->add_option("--max-steps", sim.max_steps, "Per-run step budget");
  validate->add_option("--out", validate_out, "Write the JSON report here instead of stdout");

  std::string params_file;
  auto* point = app.add_subcommand("point", "Full report for a single parameter point");
  point->add_option("--params", params_file, "Flat JSON parameter file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSpecError;
  }

  apply_thread_env();

  try {
    if (*figure) {
      const auto& ids = aisr::figure_ids();
      if (std::find(ids.begin(), ids.end(), figure_id) == ids.end()) {
        std::cerr << "unknown figure id '" << figure_id << "'\n";
        return kExitSpecError;
      }
      for (const auto& p : aisr::run_figure(figure_id, out_dir)) std::cout << p.string() << '\n';
      return kExitOk;
    }
    if (*sweep) {
      const auto spec = aisr::sweep_spec_from_json(read_json(sweep_spec));
      const auto rows = aisr::run_sweep(spec);
      std::cout << spec.output << " (" << rows.size() << " rows)\n";
      return kExitOk;
    }
    if (*validate) {
      const auto spec = aisr::sweep_spec_from_json(read_json(validate_spec));
      const auto report = aisr::run_validate(sim, spec);
      const auto text = aisr::to_json(report).dump(2);
      if (validate_out.empty()) {
        std::cout << text << '\n';
      } else {
        std::ofstream os(validate_out);
        if (!(os << text << '\n')) throw std::runtime_error("cannot write " + validate_out);
      }
      std::size_t failed = 0;
      for (const auto& p : report.points) failed += p.pass ? 0 : 1;
      std::cerr << report.points.size() - failed << "/" << report.points.size()
                << " grid points within 3 standard errors\n";
      return report.pass ? kExitOk : kExitValidationFailed;
    }
    if (*point) {
      const auto cfg = aisr::config_from_json(read_json(params_file));
      std::cout << aisr::point_report(cfg).dump(2) << '\n';
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSpecError;
  }
  return kExitSpecError;
}
