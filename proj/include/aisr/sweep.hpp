#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aisr/analysis.hpp"
#include "aisr/mcsim.hpp"
#include "aisr/params.hpp"

namespace aisr {

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;
  bool log_scale = false;

  double value(int i) const;
};

enum class OutputFormat { Csv, Json };

struct SweepSpec {
  std::vector<Axis> axes;  // at most two; the first one is the outer loop
  ModelConfig fixed;
  std::string output;
  OutputFormat format = OutputFormat::Csv;
  SafetySelection rule = SafetySelection::Both;
};

// Throws InvalidParams naming the offending field.
SweepSpec sweep_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepSpec& spec);
void validate(const SweepSpec& spec);

// All grid configurations in output order (row-major over the declared axes).
std::vector<ModelConfig> grid_points(const SweepSpec& spec);

struct GridRow {
  ModelConfig cfg;
  ZoneReport zone;
  std::vector<double> freq;  // stationary mass of AS, AU, CS
  double welfare = 0.0;
  double residual = 0.0;     // max |vM - v|
};

GridRow evaluate_point(const ModelConfig& cfg, SafetySelection rule = SafetySelection::Both);

// OpenMP over grid points; evaluate_grid_serial is the reference loop.
std::vector<GridRow> evaluate_grid(const SweepSpec& spec);
std::vector<GridRow> evaluate_grid_serial(const SweepSpec& spec);

inline constexpr const char* kGridCsvHeader =
    "p_r,s,p_fo,W,zone,collective_gap,as_rd_margin,cs_rd_margin,freq_AS,freq_AU,freq_CS,welfare";

// Full precision ("%.17g") formatting used by every output file.
std::string format_double(double x);

void write_csv(std::ostream& os, const std::vector<GridRow>& rows);
nlohmann::json to_json(const GridRow& row);

// Evaluates the sweep and writes spec.output. Returns the rows.
std::vector<GridRow> run_sweep(const SweepSpec& spec);

// Named reproductions: fig1a fig1b fig1c fig2a fig2b fig2c fig3a fig3b fig3c.
const std::vector<std::string>& figure_ids();
bool is_grid_figure(const std::string& id);
// Grid and line figures are plain sweeps; the spec writes to out_dir/<id>.csv.
SweepSpec figure_sweep_spec(const std::string& id, const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> run_figure(const std::string& id,
                                              const std::filesystem::path& out_dir);

// Full model report for one parameter point: payoffs, transitions, stationary
// distribution, zone and welfare.
nlohmann::json point_report(const ModelConfig& cfg);

struct PairCheck {
  Strategy mutant;
  Strategy resident;
  double analytic;
  FixationEstimate simulated;
  double null_std_error;  // binomial error at the analytic value
  bool pass;
};

struct StationaryCheck {
  std::vector<double> analytic;
  StationaryEstimate simulated;
  std::vector<double> null_std_errors;
  bool pass;
};

struct PointValidation {
  ModelConfig cfg;
  std::vector<PairCheck> pairs;
  StationaryCheck stationary;
  bool pass;
};

struct ValidationReport {
  std::vector<PointValidation> points;
  bool pass;
};

// Monte Carlo against the analytic chain at every grid point, 3 standard errors.
ValidationReport run_validate(const SimConfig& sim, const SweepSpec& grid);
PointValidation validate_point(const ModelConfig& cfg, const SimConfig& sim);
nlohmann::json to_json(const ValidationReport& r);

}  // namespace aisr
