#include "aisr/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

namespace aisr {

namespace fs = std::filesystem;
using nlohmann::json;

double Axis::value(int i) const {
  if (i == steps - 1) return max;
  const double t = static_cast<double>(i) / (steps - 1);
  if (log_scale) return std::pow(10.0, std::log10(min) + t * (std::log10(max) - std::log10(min)));
  return min + t * (max - min);
}

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw InvalidParams(std::string("unknown ") + what + " field '" + key + "'");
  }
}

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InvalidParams(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidParams(where + ": '" + key + "' has the wrong type");
  }
}

}  // namespace

SweepSpec sweep_spec_from_json(const json& j) {
  if (!j.is_object()) throw InvalidParams("sweep spec must be a JSON object");
  require_keys(j, {"axes", "fixed", "output", "format", "selection"}, "sweep spec");
  SweepSpec spec;
  if (j.contains("fixed")) spec.fixed = config_from_json(j.at("fixed"));
  if (j.contains("axes")) {
    if (!j.at("axes").is_array()) throw InvalidParams("axes must be an array");
    for (const auto& a : j.at("axes")) {
      if (!a.is_object()) throw InvalidParams("each axis must be an object");
      require_keys(a, {"name", "min", "max", "steps", "scale"}, "axis");
      Axis axis;
      axis.name = required<std::string>(a, "name", "axis");
      axis.min = required<double>(a, "min", "axis " + axis.name);
      axis.max = required<double>(a, "max", "axis " + axis.name);
      axis.steps = required<int>(a, "steps", "axis " + axis.name);
      const auto scale = a.value("scale", std::string("linear"));
      if (scale != "linear" && scale != "log") {
        throw InvalidParams("axis " + axis.name + ": scale must be linear or log");
      }
      axis.log_scale = scale == "log";
      spec.axes.push_back(axis);
    }
  }
  spec.output = j.value("output", std::string());
  const auto format = j.value("format", std::string("csv"));
  if (format == "csv") spec.format = OutputFormat::Csv;
  else if (format == "json") spec.format = OutputFormat::Json;
  else throw InvalidParams("format must be csv or json");
  const auto sel = j.value("selection", std::string("both"));
  if (sel == "both") spec.rule = SafetySelection::Both;
  else if (sel == "either") spec.rule = SafetySelection::Either;
  else throw InvalidParams("selection must be both or either");
  validate(spec);
  return spec;
}

json to_json(const SweepSpec& spec) {
  json axes = json::array();
  for (const auto& a : spec.axes) {
    axes.push_back({{"name", a.name},
                    {"min", a.min},
                    {"max", a.max},
                    {"steps", a.steps},
                    {"scale", a.log_scale ? "log" : "linear"}});
  }
  return {{"axes", axes},
          {"fixed", to_json(spec.fixed)},
          {"output", spec.output},
          {"format", spec.format == OutputFormat::Csv ? "csv" : "json"},
          {"selection", spec.rule == SafetySelection::Both ? "both" : "either"}};
}

void validate(const SweepSpec& spec) {
  if (spec.axes.size() > 2) throw InvalidParams("at most 2 swept axes are supported");
  std::set<std::string> seen;
  for (const auto& a : spec.axes) {
    if (!is_field(a.name)) throw InvalidParams("unknown axis '" + a.name + "'");
    if (!seen.insert(a.name).second) throw InvalidParams("axis '" + a.name + "' declared twice");
    if (a.steps < 2) throw InvalidParams("axis " + a.name + ": steps must be at least 2");
    if (!(a.min < a.max)) throw InvalidParams("axis " + a.name + ": min must be below max");
    if (a.log_scale && !(a.min > 0.0)) {
      throw InvalidParams("axis " + a.name + ": log scale needs min > 0");
    }
  }
  for (const auto& cfg : grid_points(spec)) {
    try {
      validate(cfg.race);
      validate(cfg.dyn);
    } catch (const InvalidParams& e) {
      std::string where;
      for (const auto& a : spec.axes) {
        where += (where.empty() ? "" : ", ") + a.name + "=" + format_double(get_field(cfg, a.name));
      }
      throw InvalidParams("grid point (" + where + "): " + e.what());
    }
  }
}

std::vector<ModelConfig> grid_points(const SweepSpec& spec) {
  std::vector<ModelConfig> out{spec.fixed};
  for (const auto& axis : spec.axes) {
    std::vector<ModelConfig> next;
    next.reserve(out.size() * static_cast<std::size_t>(axis.steps));
    for (const auto& base : out) {
      for (int i = 0; i < axis.steps; ++i) {
        auto cfg = base;
        set_field(cfg, axis.name, axis.value(i));
        next.push_back(cfg);
      }
    }
    out = std::move(next);
  }
  return out;
}

GridRow evaluate_point(const ModelConfig& cfg, SafetySelection rule) {
  const auto race = validate(cfg.race);
  const auto dyn = validate(cfg.dyn);
  const auto pi = averaged_payoff_matrix(race);
  const auto st = stationary_distribution(pi, dyn);
  GridRow row;
  row.cfg = cfg;
  row.zone = classify_zone(race, rule);
  row.freq = st.distribution;
  row.welfare = social_welfare(pi, st).welfare;
  row.residual = stationary_residual(st.distribution, transition_matrix(pi, dyn));
  return row;
}

std::vector<GridRow> evaluate_grid_serial(const SweepSpec& spec) {
  validate(spec);
  const auto points = grid_points(spec);
  std::vector<GridRow> rows;
  rows.reserve(points.size());
  for (const auto& p : points) rows.push_back(evaluate_point(p, spec.rule));
  return rows;
}

std::vector<GridRow> evaluate_grid(const SweepSpec& spec) {
  validate(spec);
  const auto points = grid_points(spec);
  std::vector<GridRow> rows(points.size());
  const auto n = static_cast<long long>(points.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    rows[k] = evaluate_point(points[k], spec.rule);
  }
  return rows;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<GridRow>& rows) {
  os << kGridCsvHeader << '\n';
  for (const auto& r : rows) {
    const auto& p = r.cfg.race;
    os << format_double(p.p_r) << ',' << format_double(p.s) << ',' << format_double(p.p_fo) << ','
       << format_double(p.W) << ',' << zone_label(r.zone.zone) << ','
       << format_double(r.zone.collective_gap) << ',' << format_double(r.zone.as_rd_margin) << ','
       << format_double(r.zone.cs_rd_margin) << ',' << format_double(r.freq[0]) << ','
       << format_double(r.freq[1]) << ',' << format_double(r.freq[2]) << ','
       << format_double(r.welfare) << '\n';
  }
}

json to_json(const GridRow& r) {
  const auto& p = r.cfg.race;
  return {{"p_r", p.p_r},
          {"s", p.s},
          {"p_fo", p.p_fo},
          {"W", p.W},
          {"zone", zone_label(r.zone.zone)},
          {"collective_gap", r.zone.collective_gap},
          {"as_rd_margin", r.zone.as_rd_margin},
          {"cs_rd_margin", r.zone.cs_rd_margin},
          {"freq_AS", r.freq[0]},
          {"freq_AU", r.freq[1]},
          {"freq_CS", r.freq[2]},
          {"welfare", r.welfare}};
}

namespace {

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

void write_json_file(const fs::path& path, const json& j) {
  auto os = open_output(path);
  os << j.dump(2) << '\n';
  if (!os) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace

std::vector<GridRow> run_sweep(const SweepSpec& spec) {
  auto rows = evaluate_grid(spec);
  if (spec.output.empty()) throw InvalidParams("sweep spec has no output path");
  auto os = open_output(spec.output);
  if (spec.format == OutputFormat::Csv) {
    write_csv(os, rows);
  } else {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    os << arr.dump(2) << '\n';
  }
  if (!os) throw std::runtime_error("write to " + spec.output + " failed");
  return rows;
}

// ---- figures ----------------------------------------------------------------

namespace {

ModelConfig fig1_base() {
  ModelConfig cfg;
  cfg.race = {1.0, 4.0, 1.5, 1e4, 100.0, 0.6, 0.1};
  cfg.dyn = {100, 0.1};
  return cfg;
}

ModelConfig fig2_base() {
  auto cfg = fig1_base();
  cfg.race.p_fo = 0.5;
  return cfg;
}

ModelConfig fig3_base() {
  auto cfg = fig1_base();
  cfg.race.W = 1e6;
  return cfg;
}

const Axis kProbAxisPr{"p_r", 0.0, 1.0, 101, false};
const Axis kWAxis{"W", 10.0, 1e7, 101, true};
// s = 1 itself is outside the model (s must exceed 1).
const Axis kSpeedAxis{"s", 1.01, 5.0, 101, false};
const Axis kDetectAxis{"p_fo", 0.0, 1.0, 101, false};

double bisect_or_nan(const RaceParams& p, std::string_view axis, Boundary which) {
  try {
    return threshold_curve(p, axis, which);
  } catch (const NoSignChange&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

fs::path write_boundary(const fs::path& path, const Axis& axis, const ModelConfig& base,
                        const std::vector<Boundary>& kinds, bool analytic_early) {
  auto os = open_output(path);
  os << axis.name;
  if (analytic_early) os << ",analytic_collective,analytic_risk_dominance";
  for (auto k : kinds) os << ',' << to_string(k);
  os << '\n';
  for (int i = 0; i < axis.steps; ++i) {
    auto cfg = base;
    const double x = axis.value(i);
    set_field(cfg, axis.name, x);
    os << format_double(x);
    if (analytic_early) {
      os << ',' << format_double(early_collective_threshold(cfg.race.s)) << ','
         << format_double(early_risk_dominance_threshold(cfg.race.s));
    }
    for (auto k : kinds) os << ',' << format_double(bisect_or_nan(cfg.race, "p_r", k));
    os << '\n';
  }
  if (!os) throw std::runtime_error("write to " + path.string() + " failed");
  return path;
}

ModelConfig point_figure_config(const std::string& id) {
  if (id == "fig2b") {
    auto c = fig2_base();
    c.race.p_r = 0.9;
    return c;
  }
  if (id == "fig2c") {
    auto c = fig2_base();
    c.race.p_r = 0.6;
    return c;
  }
  if (id == "fig3b" || id == "fig3c") {
    auto c = fig3_base();
    c.race.p_r = 0.4;
    c.race.p_fo = id == "fig3b" ? 0.9 : 0.05;
    return c;
  }
  throw InvalidParams("unknown figure id '" + id + "'");
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig1a", "fig1b", "fig1c", "fig2a", "fig2b",
                                               "fig2c", "fig3a", "fig3b", "fig3c"};
  return ids;
}

bool is_grid_figure(const std::string& id) {
  return id == "fig1a" || id == "fig1c" || id == "fig2a" || id == "fig3a";
}

SweepSpec figure_sweep_spec(const std::string& id, const fs::path& out_dir) {
  SweepSpec spec;
  spec.output = (out_dir / (id + ".csv")).string();
  if (id == "fig1a") {
    spec.fixed = fig1_base();
    spec.axes = {kWAxis};
  } else if (id == "fig1c") {
    spec.fixed = fig1_base();
    spec.axes = {kWAxis, kProbAxisPr};
  } else if (id == "fig2a") {
    spec.fixed = fig2_base();
    spec.axes = {kSpeedAxis, kProbAxisPr};
  } else if (id == "fig3a") {
    spec.fixed = fig3_base();
    spec.axes = {kDetectAxis, kProbAxisPr};
  } else {
    throw InvalidParams("'" + id + "' is not a grid figure");
  }
  return spec;
}

std::vector<fs::path> run_figure(const std::string& id, const fs::path& out_dir) {
  std::vector<fs::path> written;
  if (is_grid_figure(id)) {
    const auto spec = figure_sweep_spec(id, out_dir);
    run_sweep(spec);
    written.emplace_back(spec.output);
    const auto boundary = out_dir / (id + "_boundary.csv");
    if (id == "fig1c") {
      written.push_back(write_boundary(boundary, kWAxis, spec.fixed, {Boundary::Collective}, false));
    } else if (id == "fig2a") {
      written.push_back(write_boundary(
          boundary, kSpeedAxis, spec.fixed,
          {Boundary::Collective, Boundary::AsRiskDominance, Boundary::CsRiskDominance}, true));
    } else if (id == "fig3a") {
      written.push_back(write_boundary(
          boundary, kDetectAxis, spec.fixed,
          {Boundary::Collective, Boundary::AsRiskDominance, Boundary::CsRiskDominance}, false));
    }
    return written;
  }
  const auto path = out_dir / (id + ".json");
  if (id == "fig1b") {
    auto early = fig1_base();
    auto late = fig1_base();
    late.race.W = 1e6;
    write_json_file(path, {{"early", point_report(early)}, {"late", point_report(late)}});
  } else {
    write_json_file(path, point_report(point_figure_config(id)));
  }
  written.push_back(path);
  return written;
}

json point_report(const ModelConfig& cfg) {
  const auto race = validate(cfg.race);
  const auto dyn = validate(cfg.dyn);
  const auto pi = averaged_payoff_matrix(race);
  const auto st = stationary_distribution(pi, dyn);
  const auto m = transition_matrix(pi, dyn);
  const auto zone = classify_zone(race);
  const auto regime = classify_regime(race);
  return {{"params", to_json(cfg)},
          {"regime",
           {{"kind", to_string(regime.kind)},
            {"ratio", regime.ratio},
            {"cutoff", kDefaultRegimeCutoff}}},
          {"payoff", to_json(pi)},
          {"transition", m},
          {"stationary", to_json(st)},
          {"zone",
           {{"zone", zone_label(zone.zone)},
            {"collective_gap", zone.collective_gap},
            {"as_rd_margin", zone.as_rd_margin},
            {"cs_rd_margin", zone.cs_rd_margin},
            {"tie", zone.tie}}},
          {"welfare", social_welfare(pi, st).welfare},
          {"residual", stationary_residual(st.distribution, m)}};
}

// ---- Monte Carlo validation ---------------------------------------------------

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

PointValidation validate_point(const ModelConfig& cfg, const SimConfig& sim) {
  const auto race = validate(cfg.race);
  const auto dyn = validate(cfg.dyn);
  const auto pi = averaged_payoff_matrix(race);
  PointValidation pv;
  pv.cfg = cfg;
  pv.pass = true;
  std::uint64_t index = 0;
  for (auto resident : kAllStrategies) {
    for (auto mutant : kAllStrategies) {
      if (mutant == resident) continue;
      SimConfig c = sim;
      c.seed = mix_seed(sim.seed, index++);
      PairCheck pc{mutant, resident, fixation_probability(mutant, resident, pi, dyn),
                   simulate_fixation(mutant, resident, pi, dyn, c), 0.0, false};
      pc.null_std_error = binomial_std_error(pc.analytic, c.runs);
      pc.pass = within_sigmas(pc.simulated.estimate, pc.analytic, pc.null_std_error);
      pv.pass = pv.pass && pc.pass;
      pv.pairs.push_back(pc);
    }
  }
  SimConfig c = sim;
  c.seed = mix_seed(sim.seed, index);
  auto& sc = pv.stationary;
  sc.analytic = stationary_distribution(pi, dyn).distribution;
  sc.simulated = simulate_stationary(pi, dyn, 0.1 / dyn.Z, c);
  sc.null_std_errors = occupancy_std_errors(pi, dyn, c.runs);
  sc.pass = true;
  for (std::size_t i = 0; i < sc.analytic.size(); ++i) {
    sc.pass = sc.pass &&
              within_sigmas(sc.simulated.frequencies[i], sc.analytic[i], sc.null_std_errors[i]);
  }
  pv.pass = pv.pass && sc.pass;
  return pv;
}

ValidationReport run_validate(const SimConfig& sim, const SweepSpec& grid) {
  validate(grid);
  ValidationReport report;
  report.pass = true;
  std::uint64_t index = 0;
  for (const auto& cfg : grid_points(grid)) {
    SimConfig c = sim;
    c.seed = mix_seed(sim.seed, 1000003ull * ++index);
    report.points.push_back(validate_point(cfg, c));
    report.pass = report.pass && report.points.back().pass;
  }
  return report;
}

json to_json(const ValidationReport& r) {
  json points = json::array();
  for (const auto& p : r.points) {
    json pairs = json::array();
    for (const auto& pc : p.pairs) {
      auto sim = to_json(pc.simulated);
      pairs.push_back({{"mutant", to_string(pc.mutant)},
                       {"resident", to_string(pc.resident)},
                       {"analytic", pc.analytic},
                       {"simulated", sim},
                       {"null_std_error", pc.null_std_error},
                       {"pass", pc.pass}});
    }
    points.push_back({{"params", to_json(p.cfg)},
                      {"fixation", pairs},
                      {"stationary",
                       {{"analytic", p.stationary.analytic},
                        {"simulated", to_json(p.stationary.simulated)},
                        {"null_std_errors", p.stationary.null_std_errors},
                        {"pass", p.stationary.pass}}},
                      {"pass", p.pass}});
  }
  return {{"points", points}, {"pass", r.pass}};
}

}  // namespace aisr
