#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aisr/sweep.hpp"

using namespace aisr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "aisr_test_sweep";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

nlohmann::json small_spec(const std::string& output) {
  return {{"axes",
           {{{"name", "p_r"}, {"min", 0.0}, {"max", 1.0}, {"steps", 2}},
            {{"name", "s"}, {"min", 1.2}, {"max", 3.0}, {"steps", 2}}}},
          {"fixed", {{"p_fo", 0.5}}},
          {"output", output}};
}

}  // namespace

TEST_CASE("axis values") {
  Axis lin{"p_r", 0.0, 1.0, 11, false};
  CHECK(lin.value(0) == 0.0);
  CHECK(lin.value(5) == doctest::Approx(0.5));
  CHECK(lin.value(10) == 1.0);
  Axis lg{"W", 10.0, 1e7, 7, true};
  CHECK(lg.value(0) == doctest::Approx(10.0));
  CHECK(lg.value(3) == doctest::Approx(1e4));
  CHECK(lg.value(6) == 1e7);
}

TEST_CASE("a 2x2 sweep writes the documented schema") {
  const auto out = scratch("small.csv");
  const auto spec = sweep_spec_from_json(small_spec(out.string()));
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 4);
  std::ifstream is(out);
  std::string line;
  std::getline(is, line);
  CHECK(line == kGridCsvHeader);
  int n = 0;
  while (std::getline(is, line)) {
    CHECK(split(line).size() == 12);
    ++n;
  }
  CHECK(n == 4);
  // row-major, first axis outermost
  CHECK(rows[0].cfg.race.p_r == 0.0);
  CHECK(rows[1].cfg.race.p_r == 0.0);
  CHECK(rows[1].cfg.race.s == 3.0);
  CHECK(rows[2].cfg.race.p_r == 1.0);
}

TEST_CASE("JSON output carries the same rows") {
  auto j = small_spec(scratch("small.json").string());
  j["format"] = "json";
  const auto rows = run_sweep(sweep_spec_from_json(j));
  const auto parsed = nlohmann::json::parse(slurp(scratch("small.json")));
  REQUIRE(parsed.size() == rows.size());
  CHECK(parsed[3]["welfare"].get<double>() == rows[3].welfare);
}

TEST_CASE("a single-point sweep equals the direct calls") {
  ModelConfig cfg;
  cfg.race.p_r = 0.7;
  cfg.race.p_fo = 0.3;
  SweepSpec spec;
  spec.fixed = cfg;
  const auto rows = evaluate_grid(spec);
  REQUIRE(rows.size() == 1);
  const auto pi = averaged_payoff_matrix(cfg.race);
  const auto st = stationary_distribution(pi, cfg.dyn);
  CHECK(rows[0].freq == st.distribution);
  CHECK(rows[0].welfare == social_welfare(pi, st).welfare);
  CHECK(rows[0].zone.zone == classify_zone(cfg.race).zone);
  CHECK(rows[0].zone.collective_gap == collective_preference_gap(cfg.race));
}

TEST_CASE("bad specs are rejected with a field name") {
  auto expect = [](nlohmann::json j, const std::string& needle) {
    try {
      sweep_spec_from_json(j);
      FAIL("accepted: " << j.dump());
    } catch (const InvalidParams& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  auto base = small_spec("x.csv");
  auto j = base;
  j["axes"][0]["name"] = "gamma";
  expect(j, "gamma");
  j = base;
  j["axes"][1]["min"] = 0.5;
  expect(j, "s=0.5");
  j = base;
  j["axes"][0]["steps"] = 1;
  expect(j, "steps");
  j = base;
  j["axes"][1]["name"] = "p_r";
  expect(j, "twice");
  j = base;
  j["axes"].push_back({{"name", "W"}, {"min", 1}, {"max", 2}, {"steps", 2}});
  expect(j, "at most 2");
  j = base;
  j["colour"] = "red";
  expect(j, "colour");
  j = base;
  j["fixed"]["p_fo"] = 1.5;
  expect(j, "p_fo");
  j = base;
  j["axes"][0]["scale"] = "log";
  expect(j, "log");
  j = base;
  j["format"] = "xml";
  expect(j, "format");
}

TEST_CASE("sweeps are byte-identical across runs and evaluation paths") {
  const auto a = scratch("det_a.csv"), b = scratch("det_b.csv");
  run_sweep(sweep_spec_from_json(small_spec(a.string())));
  run_sweep(sweep_spec_from_json(small_spec(b.string())));
  CHECK(slurp(a) == slurp(b));

  auto spec = figure_sweep_spec("fig1c", scratch("").parent_path());
  spec.axes[0].steps = 13;
  spec.axes[1].steps = 9;
  std::ostringstream par, ser;
  write_csv(par, evaluate_grid(spec));
  write_csv(ser, evaluate_grid_serial(spec));
  CHECK(par.str() == ser.str());
}

TEST_CASE("figure grids round-trip through a spec file") {
  const auto dir = scratch("fig").parent_path() / "fig";
  fs::create_directories(dir);
  auto spec = figure_sweep_spec("fig2a", dir);
  spec.axes[0].steps = 11;
  spec.axes[1].steps = 7;
  spec.output = (dir / "direct.csv").string();
  run_sweep(spec);
  auto j = to_json(spec);
  j["output"] = (dir / "via_json.csv").string();
  run_sweep(sweep_spec_from_json(j));
  CHECK(slurp(dir / "direct.csv") == slurp(dir / "via_json.csv"));
}

TEST_CASE("every CSV row satisfies the row invariants") {
  auto spec = figure_sweep_spec("fig3a", fs::temp_directory_path());
  spec.axes[0].steps = 21;
  spec.axes[1].steps = 21;
  for (const auto& r : evaluate_grid(spec)) {
    double sum = 0.0;
    for (double f : r.freq) {
      CHECK(f >= 0.0);
      sum += f;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-10);
    CHECK(r.residual <= 1e-10);
    const auto& z = r.zone;
    if (z.zone == Zone::Innovation) CHECK(z.collective_gap <= 0.0);
    if (z.zone == Zone::Compliance) {
      CHECK(z.collective_gap > 0.0);
      CHECK(z.as_rd_margin > 0.0);
      CHECK(z.cs_rd_margin > 0.0);
    }
    if (z.zone == Zone::Dilemma) {
      CHECK(z.collective_gap > 0.0);
      CHECK((z.as_rd_margin <= 0.0 || z.cs_rd_margin <= 0.0));
    }
    const auto line = [&] {
      std::ostringstream os;
      write_csv(os, {r});
      return os.str();
    }();
    const auto cells = split(line.substr(line.find('\n') + 1));
    REQUIRE(cells.size() == 12);
    CHECK(cells[4] == zone_label(z.zone));
    CHECK(std::stod(cells[0]) == r.cfg.race.p_r);
    CHECK(std::stod(cells[11]) == r.welfare);
  }
}

TEST_CASE("figures write their data files") {
  const auto dir = fs::temp_directory_path() / "aisr_test_figs";
  fs::remove_all(dir);
  for (const auto& id : {"fig1b", "fig2b", "fig3c"}) {
    const auto files = run_figure(id, dir);
    REQUIRE(files.size() == 1);
    CHECK(fs::exists(files[0]));
    nlohmann::json parsed;
    CHECK_NOTHROW(parsed = nlohmann::json::parse(slurp(files[0])));
  }
  const auto f2b = nlohmann::json::parse(slurp(dir / "fig2b.json"));
  const auto& dist = f2b["stationary"]["distribution"];
  CHECK(dist[0].get<double>() == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(dist[2].get<double>() == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_THROWS_AS(run_figure("fig9", dir), InvalidParams);
}

TEST_CASE("point report sections") {
  const auto r = point_report(ModelConfig{});
  for (auto key : {"params", "regime", "payoff", "transition", "stationary", "zone", "welfare",
                   "residual"}) {
    CHECK_MESSAGE(r.contains(key), key);
  }
  CHECK(r["zone"]["zone"] == "II");
}

TEST_CASE("Monte Carlo validation") {
  SUBCASE("neutral selection passes") {
    ModelConfig cfg;
    cfg.dyn = {20, 0.0};
    const auto v = validate_point(cfg, {3000, 5, 10'000'000});
    CHECK(v.pairs.size() == 6);
    CHECK(v.pass);
  }
  SUBCASE("figure 2c point at Z=50 passes") {
    ModelConfig cfg;
    cfg.race.p_fo = 0.5;
    cfg.dyn = {50, 0.1};
    const auto v = validate_point(cfg, {4000, 17, 10'000'000});
    for (const auto& p : v.pairs) {
      CHECK_MESSAGE(p.pass, to_string(p.mutant) << " in " << to_string(p.resident));
    }
    CHECK(v.stationary.pass);
  }
  SUBCASE("a corrupted analytic value is caught") {
    ModelConfig cfg;
    cfg.dyn = {20, 0.0};
    const auto v = validate_point(cfg, {3000, 5, 10'000'000});
    const auto& p = v.pairs.front();
    const double wrong = p.analytic * 1.5;
    CHECK_FALSE(within_sigmas(p.simulated.estimate, wrong, binomial_std_error(wrong, p.simulated.runs)));
  }
  SUBCASE("report JSON") {
    SweepSpec grid;
    grid.fixed.dyn = {10, 0.0};
    const auto r = run_validate({500, 3, 10'000'000}, grid);
    const auto j = to_json(r);
    CHECK(j.contains("pass"));
    CHECK(j["points"].size() == 1);
  }
}
