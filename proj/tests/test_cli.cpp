#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "aisr_test_cli";

int run(const std::string& args) {
  fs::create_directories(kWork);
  const std::string cmd = std::string("\"") + AISR_CLI_PATH + "\" " + args + " > \"" +
                          (kWork / "stdout.txt").string() + "\" 2> \"" +
                          (kWork / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("figure subcommand") {
  const auto out = kWork / "figs";
  fs::remove_all(out);
  CHECK(run("figure fig2c --out \"" + out.string() + "\"") == 0);
  CHECK(fs::exists(out / "fig2c.json"));
  CHECK(run("figure fig7 --out \"" + out.string() + "\"") == 2);
  CHECK(slurp(kWork / "stderr.txt").find("fig7") != std::string::npos);
}

TEST_CASE("sweep subcommand") {
  const auto csv = kWork / "sweep.csv";
  write(kWork / "spec.json",
        R"({"axes":[{"name":"p_r","min":0,"max":1,"steps":3}],"fixed":{"p_fo":0.5},"output":")" +
            csv.generic_string() + "\"}");
  CHECK(run("sweep --spec \"" + (kWork / "spec.json").string() + "\"") == 0);
  std::ifstream is(csv);
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 4);

  write(kWork / "bad.json", R"({"axes":[{"name":"s","min":0.5,"max":2,"steps":3}],"output":"x.csv"})");
  CHECK(run("sweep --spec \"" + (kWork / "bad.json").string() + "\"") == 2);
  CHECK(slurp(kWork / "stderr.txt").find("s must exceed 1") != std::string::npos);

  write(kWork / "broken.json", "{not json");
  CHECK(run("sweep --spec \"" + (kWork / "broken.json").string() + "\"") == 2);
  CHECK(run("sweep --spec \"" + (kWork / "missing.json").string() + "\"") == 2);
}

TEST_CASE("point subcommand") {
  write(kWork / "params.json", R"({"p_r":0.9,"p_fo":0.5})");
  CHECK(run("point --params \"" + (kWork / "params.json").string() + "\"") == 0);
  const auto j = nlohmann::json::parse(slurp(kWork / "stdout.txt"));
  CHECK(j["zone"]["zone"] == "I");

  write(kWork / "params_bad.json", R"({"p_r":1.5})");
  CHECK(run("point --params \"" + (kWork / "params_bad.json").string() + "\"") == 2);
}

TEST_CASE("validate subcommand") {
  write(kWork / "vgrid.json", R"({"fixed":{"Z":10,"beta":0.0}})");
  const auto report = kWork / "report.json";
  CHECK(run("validate --spec \"" + (kWork / "vgrid.json").string() +
            "\" --runs 2000 --seed 4 --out \"" + report.string() + "\"") == 0);
  CHECK(nlohmann::json::parse(slurp(report))["pass"] == true);
  // A step budget of Z steps leaves almost every run unabsorbed, so the
  // estimates collapse towards zero and the check must fail.
  CHECK(run("validate --spec \"" + (kWork / "vgrid.json").string() +
            "\" --runs 2000 --seed 4 --max-steps 10") == 1);
}

TEST_CASE("usage errors") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("validate --spec x.json") == 2);
  CHECK(run("--help") == 0);
}
