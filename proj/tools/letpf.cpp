// Command-line driver: run, campaign, oracle, validate.

#include "letpf/config.hpp"
#include "letpf/errors.hpp"
#include "letpf/oracle.hpp"
#include "letpf/scenarios.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverFailure = 3;

nlohmann::json resolve(const std::string& path, const std::vector<std::string>& sets, const std::string& method,
                       const std::string& scenario, const std::string& out_dir) {
  nlohmann::json j = letpf::load_json(path);
  for (const auto& s : sets) letpf::apply_override(j, s);
  if (!method.empty()) j["method"] = method;
  if (!scenario.empty()) j["scenario"] = scenario;
  if (!out_dir.empty()) letpf::set_dotted(j, "outputs.out_dir", out_dir);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-field and laminated-element phase-field solver"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> sets;
  std::string method, scenario, out_dir;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config, "JSON configuration file")->required();
    sub->add_option("--set", sets, "Override a config key, e.g. --set interface.gamma=0.0003");
    sub->add_option("--method", method, "pfm or letpf");
    sub->add_option("--scenario", scenario, "circular, single_inclusion, three_inclusions or custom");
    sub->add_option("--out-dir", out_dir, "Output directory");
    sub->add_flag("-q,--quiet", quiet, "No progress output");
  };
  auto* run = app.add_subcommand("run", "Run one simulation");
  add_common(run);
  auto* oracle_cmd = app.add_subcommand("oracle", "Write the sharp-interface trajectory of a circular config");
  add_common(oracle_cmd);
  auto* validate_cmd = app.add_subcommand("validate", "Check a configuration and print it resolved");
  add_common(validate_cmd);
  auto* campaign = app.add_subcommand("campaign", "Run a parameter sweep");
  std::string campaign_out;
  int threads = -1;
  campaign->add_option("config", config, "JSON campaign file")->required();
  campaign->add_option("--out-dir", campaign_out, "Output directory");
  campaign->add_option("--threads", threads, "Concurrent cells (0 = all cores)");
  campaign->add_flag("-q,--quiet", quiet, "No progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  letpf::RunOptions opts;
  if (!quiet) opts.log = [](const std::string& m) { std::cerr << m << '\n'; };

  try {
    if (*campaign) {
      nlohmann::json j = letpf::load_json(config);
      if (!campaign_out.empty()) j["out_dir"] = campaign_out;
      if (threads >= 0) j["threads"] = threads;
      const auto cc = letpf::parse_campaign(j);
      const int failed = letpf::run_campaign(cc, opts);
      std::cout << cc.out_dir << "/campaign.csv: " << cc.cells().size() << " cells, " << failed << " failed\n";
      return failed == 0 ? kOk : kSolverFailure;
    }
    const auto cfg = letpf::parse_config(resolve(config, sets, method, scenario, out_dir));
    if (*validate_cmd) {
      std::cout << letpf::to_json(cfg).dump(2) << '\n';
      return kOk;
    }
    if (*oracle_cmd) {
      const auto pb = letpf::build_problem(cfg);
      if (!pb.oracle) throw letpf::ConfigError("oracle: needs the circular scenario with eigenstrain factors [1, 0]");
      letpf::oracle::IntegrationOptions io;
      io.general_moduli = !pb.oracle->equal_moduli();
      const auto tr = letpf::oracle::integrate_trajectory(*pb.oracle, cfg.stop_fraction * cfg.rho0, io);
      std::filesystem::create_directories(cfg.out_dir);
      const std::string path = cfg.out_dir + "/oracle.csv";
      letpf::oracle::write_trajectory_csv(tr, *pb.oracle, path);
      letpf::write_manifest(cfg, cfg.out_dir, {{"T_exact", tr.T_exact}});
      std::cout << path << ": T_exact = " << tr.T_exact << '\n';
      return kOk;
    }
    const auto res = letpf::run_simulation(cfg, opts);
    std::cout << res.report.dump(2) << '\n';
    return res.ok ? kOk : kSolverFailure;
  } catch (const letpf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const letpf::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}
