#pragma once

// Simulation configuration: JSON schema, validation, dotted-key overrides.

#include "letpf/element.hpp"

#include "json.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace letpf {

enum class Scenario { Circular, SingleInclusion, ThreeInclusions, Custom };

struct InclusionSpec {
  Vec2 centre;
  double radius = 0.0;
};

struct PhaseSpec {
  double E = 1.0;
  double nu = 0.25;
  double psi0 = 0.0;
};

struct SimConfig {
  Method method = Method::LETPF;
  Scenario scenario = Scenario::Circular;

  // geometry
  double R = 2.0;                    // circular: disc radius
  double rho0 = 1.0;                 // circular: initial inclusion radius
  double side = 1.0;                 // square scenarios: domain size
  std::vector<InclusionSpec> inclusions;  // square scenarios

  // material
  std::array<PhaseSpec, 2> phases;
  double eps = 0.1;
  /// Dilatational eigenstrains of phases 1 and 2 in units of eps; defaults
  /// depend on the scenario (circular: 1, 0; square: -1, 1).
  std::optional<std::array<double, 2>> eigenstrain_factors;

  // interface
  double gamma = 0.0008;
  std::optional<double> ell_over_h;
  std::optional<double> ell;
  double m_hat = 1.0;
  double phi_reg = 0.1;

  // mesh: exactly one of h (circular) or N (square) is used
  std::optional<double> h;
  std::optional<int> N;

  // stepping
  std::optional<double> dt_max;           // absolute
  std::optional<double> dt_max_fraction;  // of T_exact (circular only)
  std::optional<double> dt_initial;
  std::optional<double> t_end;
  double newton_tol = 1e-9;
  int max_newton = 25;
  double steady_tol = 1e-8;
  double stop_fraction = 0.15;  // circular: stop at rho_bar <= stop_fraction * rho0

  // outputs
  std::string out_dir = "run";
  int snapshot_every = 0;  // VTK every k accepted steps, 0 = initial and final only
  bool vtk = true;

  /// Element size, interface width and the eigenstrain factors resolved
  /// from the options above.
  double element_size() const;
  double interface_width() const;
  std::array<double, 2> eigenstrains() const;
};

std::string to_string(Method m);
std::string to_string(Scenario s);
Method parse_method(const std::string& s);
Scenario parse_scenario(const std::string& s);

/// Parses and validates; throws ConfigError with a path to the bad key.
SimConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const SimConfig& c);
void validate(const SimConfig& c);

/// Applies "a.b.c=value" (value parsed as JSON, falling back to a string).
void apply_override(nlohmann::json& j, const std::string& assignment);
void set_dotted(nlohmann::json& j, const std::string& key, const nlohmann::json& value);

nlohmann::json load_json(const std::string& path);

/// Scenario defaults (paper benchmark values) merged under user keys.
nlohmann::json scenario_defaults(Scenario s);

}  // namespace letpf
