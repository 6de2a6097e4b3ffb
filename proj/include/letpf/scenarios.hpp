#pragma once

// Scenario runners (circular benchmark, single and three inclusions in a
// clamped square) and the campaign driver.

#include "letpf/config.hpp"
#include "letpf/oracle.hpp"
#include "letpf/postproc.hpp"
#include "letpf/solver.hpp"

#include "json.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace letpf {

/// Mesh, material, boundary conditions and initial order parameter of a
/// configured problem.
struct Problem {
  Mesh mesh;
  Material material;
  std::vector<DirichletBC> bcs;
  std::vector<double> phi0;
  std::optional<oracle::OracleParams> oracle;  // circular scenario with oracle-compatible phases
};

Problem build_problem(const SimConfig& cfg);
Material make_material(const SimConfig& cfg);

struct RunOptions {
  bool write_outputs = true;
  std::function<void(const std::string&)> log;  // progress messages
};

/// Three-inclusion bookkeeping: pairs (i, j) that ever shared a connected
/// component of {phi > 1/2}, and the final record.
struct CoalescenceRecord {
  std::array<std::array<bool, 3>, 3> merged{};
  std::vector<nlohmann::json> events;
  int final_components = 0;
  std::array<int, 3> final_labels{-1, -1, -1};
  std::string classification;  // "two-coalesce", "three-coalesce", "trivial", "other"
};

struct RunResult {
  SimConfig config;
  Trajectory trajectory;
  State final_state;
  bool ok = false;           // no solver failure
  std::string failure;
  int accepted_steps = 0;
  int rejected_steps = 0;
  nlohmann::json report;     // scenario-specific metrics
};

RunResult run_simulation(const SimConfig& cfg, const RunOptions& opts = {});
RunResult run_circular(const SimConfig& cfg, const RunOptions& opts = {});
RunResult run_single_inclusion(const SimConfig& cfg, const RunOptions& opts = {});
RunResult run_three_inclusions(const SimConfig& cfg, const RunOptions& opts = {});

/// Classification from the merge record and the final deviation of phi from 1/2.
std::string classify_scenario(const std::array<std::array<bool, 3>, 3>& merged, double max_dev_half);

struct CampaignCell {
  nlohmann::json overrides;  // dotted key -> value
};

struct CampaignConfig {
  nlohmann::json base;
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> sweep;
  int threads = 1;
  std::string out_dir = "campaign";
  bool write_cells = false;

  std::vector<CampaignCell> cells() const;
};

CampaignConfig parse_campaign(const nlohmann::json& j);

/// Columns of the long-format campaign CSV.
const std::vector<std::string>& campaign_columns();

/// Runs every cell; failures are recorded per row. Returns the number of
/// failed cells.
int run_campaign(const CampaignConfig& cc, const RunOptions& opts = {});

/// Writes the resolved configuration and build information.
void write_manifest(const SimConfig& cfg, const std::string& dir, const nlohmann::json& extra = {});

}  // namespace letpf
