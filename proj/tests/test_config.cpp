#include "doctest.h"

#include "letpf/config.hpp"
#include "letpf/errors.hpp"
#include "letpf/scenarios.hpp"

#include <cstdlib>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sys/wait.h>

using namespace letpf;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("letpf_cfg_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LETPF_CLI) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("defaults resolve per scenario") {
  const auto c = parse_config(json::object());
  CHECK(c.scenario == Scenario::Circular);
  CHECK(c.method == Method::LETPF);
  CHECK(c.element_size() == 0.02);
  CHECK(c.interface_width() == doctest::Approx(0.03));
  CHECK(*c.dt_max_fraction == doctest::Approx(1.0 / 500));
  CHECK(c.eigenstrains()[0] == 1.0);
  CHECK(c.eigenstrains()[1] == 0.0);

  const auto s = parse_config({{"scenario", "single_inclusion"}});
  CHECK(*s.N == 26);
  CHECK(s.element_size() == doctest::Approx(1.0 / 26));
  CHECK(s.eigenstrains()[0] == -1.0);
  CHECK(s.eigenstrains()[1] == 1.0);
  CHECK(s.inclusions.size() == 1);

  const auto t = parse_config({{"scenario", "three_inclusions"}, {"method", "pfm"}});
  CHECK(t.method == Method::PFM);
  CHECK(t.inclusions.size() == 3);
}

TEST_CASE("to_json round trip") {
  json j = {{"method", "pfm"},
            {"interface", {{"gamma", 0.0001}, {"ell", 0.04}, {"phi_reg", 0.01}}},
            {"mesh", {{"h", 0.05}}},
            {"stepping", {{"dt_max", 0.7}}}};
  const auto c = parse_config(j);
  CHECK(c.ell.has_value());
  CHECK_FALSE(c.ell_over_h.has_value());
  CHECK(c.dt_max.has_value());
  CHECK_FALSE(c.dt_max_fraction.has_value());
  const auto d = parse_config(to_json(c));
  CHECK(to_json(d) == to_json(c));
  CHECK(d.gamma == 0.0001);
  CHECK(d.phi_reg == 0.01);
}

TEST_CASE("configuration errors") {
  auto bad = [](const json& j) { CHECK_THROWS_AS(parse_config(j), ConfigError); };
  bad(json::array());
  bad({{"method", "fem"}});
  bad({{"scenario", "hexagon"}});
  bad({{"scenario", 3}});
  bad({{"typo", 1}});
  bad({{"interface", {{"gama", 0.1}}}});
  bad({{"interface", {{"gamma", -1.0}}}});
  bad({{"interface", {{"gamma", "big"}}}});
  bad({{"interface", {{"ell", 0.03}, {"ell_over_h", 1.5}}}});
  bad({{"interface", {{"phi_reg", 0.5}}}});
  bad({{"material", {{"phase1", {{"nu", 0.5}}}}}});
  bad({{"mesh", {{"N", 30}}}});
  bad({{"scenario", "single_inclusion"}, {"mesh", {{"h", 0.02}}}});
  bad({{"scenario", "single_inclusion"}, {"mesh", {{"N", 1}}}});
  bad({{"scenario", "single_inclusion"}, {"stepping", {{"dt_max_fraction", 0.1}}}});
  bad({{"stepping", {{"dt_max", 1.0}, {"dt_max_fraction", 0.1}}}});
  bad({{"stepping", {{"max_newton", 0}}}});
  bad({{"geometry", {{"rho0", 1.5}}}});
  bad({{"scenario", "three_inclusions"}, {"geometry", {{"inclusions", json::array()}}}});
  bad({{"outputs", {{"vtk", "yes"}}}});
}

TEST_CASE("dotted overrides") {
  json j = json::object();
  apply_override(j, "interface.gamma=0.0003");
  apply_override(j, "method=pfm");
  apply_override(j, "material.eigenstrain_factors=[1,0]");
  apply_override(j, "outputs.vtk=false");
  CHECK(j["interface"]["gamma"] == 0.0003);
  CHECK(j["method"] == "pfm");
  CHECK(j["material"]["eigenstrain_factors"] == json::array({1, 0}));
  CHECK(j["outputs"]["vtk"] == false);
  const auto c = parse_config(j);
  CHECK(c.gamma == 0.0003);
  CHECK(c.method == Method::PFM);
  CHECK_THROWS_AS(apply_override(j, "no-equals"), ConfigError);
  CHECK_THROWS_AS(apply_override(j, "a..b=1"), ConfigError);
}

TEST_CASE("campaign cells and columns") {
  const json j = {{"base", {{"mesh", {{"h", 0.1}}}}},
                  {"sweep", {{"method", {"pfm", "letpf"}}, {"interface.gamma", {0.0001, 0.0008, 0.003}}}},
                  {"threads", 2}};
  const auto cc = parse_campaign(j);
  const auto cells = cc.cells();
  CHECK(cells.size() == 6);
  CHECK(cc.threads == 2);
  std::set<std::string> seen;
  for (const auto& c : cells) seen.insert(c.overrides.dump());
  CHECK(seen.size() == 6);
  const auto& cols = campaign_columns();
  CHECK(cols.front() == "cell");
  CHECK(std::find(cols.begin(), cols.end(), "relative_error") != cols.end());
  CHECK(std::find(cols.begin(), cols.end(), "cv_bar") != cols.end());
  CHECK_THROWS_AS(parse_campaign({{"sweep", {{"interface.gamma", {-1.0}}}}}), ConfigError);
  CHECK_THROWS_AS(parse_campaign({{"sweep", {{"method", json::array()}}}}), ConfigError);
  CHECK_THROWS_AS(parse_campaign({{"swep", json::object()}}), ConfigError);
}

TEST_CASE("scenario classification rule") {
  std::array<std::array<bool, 3>, 3> m{};
  CHECK(classify_scenario(m, 0.01) == "trivial");
  CHECK(classify_scenario(m, 0.4) == "other");
  m[1][2] = m[2][1] = true;
  CHECK(classify_scenario(m, 0.4) == "two-coalesce");
  m[0][1] = m[1][0] = true;
  CHECK(classify_scenario(m, 0.4) == "three-coalesce");
}

TEST_CASE("command-line exit codes and outputs") {
  const auto dir = scratch("cli");
  const auto cfg = dir / "c.json";
  std::ofstream(cfg) << R"({"mesh": {"h": 0.1}, "interface": {"gamma": 0.003}, "stepping": {"dt_max_fraction": 0.05}})";
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << R"({"interface": {"gama": 1}})";
  const auto broken = dir / "broken.json";
  std::ofstream(broken) << "{not json";

  CHECK(run_cli("validate " + cfg.string()) == 0);
  CHECK(run_cli("validate " + bad.string()) == 2);
  CHECK(run_cli("validate " + broken.string()) == 2);
  CHECK(run_cli("validate " + (dir / "missing.json").string()) == 2);
  CHECK(run_cli("validate " + cfg.string() + " --set interface.phi_reg=0.7") == 2);
  CHECK(run_cli("bogus") == 2);

  const auto odir = dir / "oracle";
  CHECK(run_cli("oracle " + cfg.string() + " --out-dir " + odir.string()) == 0);
  CHECK(fs::exists(odir / "oracle.csv"));
  CHECK(fs::exists(odir / "manifest.json"));
  std::ifstream os(odir / "oracle.csv");
  std::string header;
  std::getline(os, header);
  CHECK(header == "t,rho,f_bulk,f_int");

  const auto rdir = dir / "run";
  CHECK(run_cli("run " + cfg.string() + " -q --out-dir " + rdir.string()) == 0);
  CHECK(fs::exists(rdir / "trajectory.csv"));
  CHECK(fs::exists(rdir / "report.json"));
  std::ifstream ms(rdir / "manifest.json");
  const json manifest = json::parse(ms);
  CHECK(manifest["config"]["interface"]["gamma"] == 0.003);
  CHECK(manifest["config"]["mesh"]["h"] == 0.1);

  // An unreachable Newton tolerance is a solver failure.
  CHECK(run_cli("run " + cfg.string() + " -q --set stepping.newton_tol=1e-30 --out-dir " + (dir / "fail").string()) == 3);
  fs::remove_all(dir);
}
