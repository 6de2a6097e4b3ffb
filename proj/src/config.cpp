#include "letpf/config.hpp"

#include "letpf/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace letpf {

using nlohmann::json;

std::string to_string(Method m) { return m == Method::PFM ? "pfm" : "letpf"; }

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Circular: return "circular";
    case Scenario::SingleInclusion: return "single_inclusion";
    case Scenario::ThreeInclusions: return "three_inclusions";
    case Scenario::Custom: return "custom";
  }
  return "custom";
}

Method parse_method(const std::string& s) {
  if (s == "pfm") return Method::PFM;
  if (s == "letpf") return Method::LETPF;
  throw ConfigError("method: expected 'pfm' or 'letpf', got '" + s + "'");
}

Scenario parse_scenario(const std::string& s) {
  if (s == "circular") return Scenario::Circular;
  if (s == "single_inclusion") return Scenario::SingleInclusion;
  if (s == "three_inclusions") return Scenario::ThreeInclusions;
  if (s == "custom") return Scenario::Custom;
  throw ConfigError("scenario: unknown value '" + s + "'");
}

double SimConfig::element_size() const {
  if (scenario == Scenario::Circular) return h.value();
  return side / N.value();
}

double SimConfig::interface_width() const {
  if (ell) return *ell;
  return ell_over_h.value() * element_size();
}

std::array<double, 2> SimConfig::eigenstrains() const {
  if (eigenstrain_factors) return *eigenstrain_factors;
  if (scenario == Scenario::Circular) return {1.0, 0.0};
  return {-1.0, 1.0};
}

json scenario_defaults(Scenario s) {
  json j;
  j["material"] = {{"phase1", {{"E", 1.0}, {"nu", 0.25}, {"psi0", 0.0}}},
                   {"phase2", {{"E", 1.0}, {"nu", 0.25}, {"psi0", 0.0}}},
                   {"eps", 0.1}};
  j["interface"] = {{"m_hat", 1.0}, {"phi_reg", 0.1}, {"ell_over_h", 1.5}};
  j["stepping"] = {{"newton_tol", 1e-9}, {"max_newton", 25}, {"steady_tol", 1e-8}, {"stop_fraction", 0.15}};
  j["outputs"] = {{"out_dir", "run"}, {"snapshot_every", 0}, {"vtk", true}};
  switch (s) {
    case Scenario::Circular:
      j["geometry"] = {{"R", 2.0}, {"rho0", 1.0}};
      j["interface"]["gamma"] = 0.0008;
      j["mesh"] = {{"h", 0.02}};
      j["stepping"]["dt_max_fraction"] = 1.0 / 500.0;
      break;
    case Scenario::SingleInclusion:
      j["geometry"] = {{"side", 1.0}, {"inclusions", json::array({{{"centre", {0.5, 0.5}}, {"radius", 0.1}}})}};
      j["interface"]["gamma"] = 0.0003;
      j["mesh"] = {{"N", 26}};
      j["stepping"]["dt_max"] = 5.0;
      j["stepping"]["dt_initial"] = 0.01;
      j["stepping"]["t_end"] = 5000.0;
      break;
    case Scenario::ThreeInclusions:
      j["geometry"] = {{"side", 1.0},
                       {"inclusions", json::array({{{"centre", {0.25, 0.25}}, {"radius", 0.1}},
                                                   {{"centre", {0.75, 0.30}}, {"radius", 0.15}},
                                                   {{"centre", {0.35, 0.75}}, {"radius", 0.2}}})}};
      j["interface"]["gamma"] = 0.0003;
      j["mesh"] = {{"N", 100}};
      j["stepping"]["dt_max"] = 1.0;
      j["stepping"]["dt_initial"] = 0.01;
      j["stepping"]["t_end"] = 300.0;
      break;
    case Scenario::Custom:
      j["geometry"] = {{"side", 1.0}, {"inclusions", json::array()}};
      j["interface"]["gamma"] = 0.0003;
      j["mesh"] = {{"N", 50}};
      j["stepping"]["dt_max"] = 1.0;
      j["stepping"]["dt_initial"] = 0.01;
      j["stepping"]["t_end"] = 100.0;
      break;
  }
  return j;
}

namespace {

// Strict reader: every key must be consumed.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }
  ~Reader() = default;

  bool has(const std::string& k) const { return j_.contains(k) && !j_.at(k).is_null(); }

  const json& raw(const std::string& k) {
    seen_.insert(k);
    if (!j_.contains(k)) throw ConfigError(where(k) + ": missing");
    return j_.at(k);
  }

  double number(const std::string& k) {
    const auto& v = raw(k);
    if (!v.is_number()) throw ConfigError(where(k) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where(k) + ": not finite");
    return d;
  }
  double positive(const std::string& k) {
    const double d = number(k);
    if (!(d > 0.0)) throw ConfigError(where(k) + ": must be positive");
    return d;
  }
  int integer(const std::string& k) {
    const auto& v = raw(k);
    if (!v.is_number_integer()) throw ConfigError(where(k) + ": expected an integer");
    return v.get<int>();
  }
  std::string string(const std::string& k) {
    const auto& v = raw(k);
    if (!v.is_string()) throw ConfigError(where(k) + ": expected a string");
    return v.get<std::string>();
  }
  bool boolean(const std::string& k) {
    const auto& v = raw(k);
    if (!v.is_boolean()) throw ConfigError(where(k) + ": expected true or false");
    return v.get<bool>();
  }
  std::optional<double> opt_positive(const std::string& k) {
    if (!has(k)) {
      seen_.insert(k);
      return std::nullopt;
    }
    return positive(k);
  }
  void mark(const std::string& k) { seen_.insert(k); }
  Reader child(const std::string& k) { return Reader(raw(k), where(k)); }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError(where(k) + ": unknown key");
    }
  }
  std::string where(const std::string& k = "") const {
    if (k.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? k : path_ + "." + k;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

PhaseSpec read_phase(Reader r) {
  PhaseSpec p;
  p.E = r.positive("E");
  p.nu = r.number("nu");
  if (!(p.nu > -1.0 && p.nu < 0.5)) throw ConfigError(r.where("nu") + ": must lie in (-1, 0.5)");
  p.psi0 = r.has("psi0") ? r.number("psi0") : (r.mark("psi0"), 0.0);
  r.finish();
  return p;
}

}  // namespace

SimConfig parse_config(const json& user) {
  if (!user.is_object()) throw ConfigError("config: expected a JSON object");
  SimConfig c;
  std::string scen = "circular";
  if (user.contains("scenario")) {
    if (!user.at("scenario").is_string()) throw ConfigError("scenario: expected a string");
    scen = user.at("scenario").get<std::string>();
  }
  c.scenario = parse_scenario(scen);

  json merged = scenario_defaults(c.scenario);
  // Mutually exclusive keys: a user choice replaces the default alternative.
  auto drop_default = [&](const char* group, const char* key, const char* alt) {
    if (user.contains(group) && user.at(group).is_object() && user.at(group).contains(alt) &&
        !user.at(group).contains(key)) {
      merged[group].erase(key);
    }
  };
  drop_default("interface", "ell_over_h", "ell");
  drop_default("mesh", "h", "N");
  drop_default("mesh", "N", "h");
  drop_default("stepping", "dt_max_fraction", "dt_max");
  drop_default("stepping", "dt_max", "dt_max_fraction");
  merged.merge_patch(user);
  merged["scenario"] = scen;

  Reader root(merged, "");
  c.method = parse_method(root.has("method") ? root.string("method") : (root.mark("method"), "letpf"));
  root.string("scenario");

  {
    Reader g = root.child("geometry");
    if (c.scenario == Scenario::Circular) {
      c.R = g.positive("R");
      c.rho0 = g.positive("rho0");
    } else {
      c.side = g.positive("side");
      const auto& arr = g.raw("inclusions");
      if (!arr.is_array()) throw ConfigError("geometry.inclusions: expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Reader inc(arr[i], "geometry.inclusions[" + std::to_string(i) + "]");
        const auto& ctr = inc.raw("centre");
        if (!ctr.is_array() || ctr.size() != 2 || !ctr[0].is_number() || !ctr[1].is_number()) {
          throw ConfigError(inc.where("centre") + ": expected [x, y]");
        }
        InclusionSpec s{{ctr[0].get<double>(), ctr[1].get<double>()}, inc.positive("radius")};
        inc.finish();
        c.inclusions.push_back(s);
      }
    }
    g.finish();
  }
  {
    Reader m = root.child("material");
    c.phases[0] = read_phase(m.child("phase1"));
    c.phases[1] = read_phase(m.child("phase2"));
    c.eps = m.number("eps");
    if (m.has("eigenstrain_factors")) {
      const auto& f = m.raw("eigenstrain_factors");
      if (!f.is_array() || f.size() != 2 || !f[0].is_number() || !f[1].is_number()) {
        throw ConfigError("material.eigenstrain_factors: expected [f1, f2]");
      }
      c.eigenstrain_factors = std::array<double, 2>{f[0].get<double>(), f[1].get<double>()};
    } else {
      m.mark("eigenstrain_factors");
    }
    m.finish();
  }
  {
    Reader r = root.child("interface");
    c.gamma = r.positive("gamma");
    c.ell_over_h = r.opt_positive("ell_over_h");
    c.ell = r.opt_positive("ell");
    c.m_hat = r.positive("m_hat");
    c.phi_reg = r.number("phi_reg");
    r.finish();
  }
  {
    Reader r = root.child("mesh");
    c.h = r.opt_positive("h");
    if (r.has("N")) {
      c.N = r.integer("N");
    } else {
      r.mark("N");
    }
    r.finish();
  }
  {
    Reader r = root.child("stepping");
    c.dt_max = r.opt_positive("dt_max");
    c.dt_max_fraction = r.opt_positive("dt_max_fraction");
    c.dt_initial = r.opt_positive("dt_initial");
    c.t_end = r.opt_positive("t_end");
    c.newton_tol = r.positive("newton_tol");
    c.max_newton = r.integer("max_newton");
    c.steady_tol = r.positive("steady_tol");
    c.stop_fraction = r.positive("stop_fraction");
    r.finish();
  }
  {
    Reader r = root.child("outputs");
    c.out_dir = r.string("out_dir");
    c.snapshot_every = r.integer("snapshot_every");
    c.vtk = r.boolean("vtk");
    r.finish();
  }
  root.finish();
  validate(c);
  return c;
}

void validate(const SimConfig& c) {
  if (c.ell.has_value() == c.ell_over_h.has_value()) {
    throw ConfigError("interface: give exactly one of 'ell_over_h' and 'ell'");
  }
  if (!(c.phi_reg >= 0.0 && c.phi_reg < 0.5)) throw ConfigError("interface.phi_reg: must lie in [0, 0.5)");
  if (c.scenario == Scenario::Circular) {
    if (!c.h || c.N) throw ConfigError("mesh: the circular scenario takes 'h' only");
    if (!(c.rho0 < 0.55 * c.R)) throw ConfigError("geometry: rho0 must lie inside the regular core (rho0 < 0.55 R)");
    if (c.dt_max.has_value() == c.dt_max_fraction.has_value()) {
      throw ConfigError("stepping: give exactly one of 'dt_max' and 'dt_max_fraction'");
    }
    if (!(c.stop_fraction < 1.0)) throw ConfigError("stepping.stop_fraction: must be below 1");
  } else {
    if (!c.N || c.h) throw ConfigError("mesh: square scenarios take 'N' only");
    if (*c.N < 2) throw ConfigError("mesh.N: must be at least 2");
    if (!c.dt_max || c.dt_max_fraction) throw ConfigError("stepping: square scenarios take 'dt_max' only");
    if (!c.t_end) throw ConfigError("stepping.t_end: required for square scenarios");
    for (const auto& inc : c.inclusions) {
      if (inc.centre.x < 0.0 || inc.centre.y < 0.0 || inc.centre.x > c.side || inc.centre.y > c.side) {
        throw ConfigError("geometry.inclusions: centre outside the domain");
      }
    }
    if (c.scenario == Scenario::SingleInclusion && c.inclusions.size() != 1) {
      throw ConfigError("geometry.inclusions: single_inclusion needs exactly one inclusion");
    }
    if (c.scenario == Scenario::ThreeInclusions && c.inclusions.size() != 3) {
      throw ConfigError("geometry.inclusions: three_inclusions needs exactly three inclusions");
    }
  }
  if (c.max_newton < 1) throw ConfigError("stepping.max_newton: must be at least 1");
  if (c.snapshot_every < 0) throw ConfigError("outputs.snapshot_every: must be nonnegative");
  if (c.out_dir.empty()) throw ConfigError("outputs.out_dir: must not be empty");
}

json to_json(const SimConfig& c) {
  json j;
  j["method"] = to_string(c.method);
  j["scenario"] = to_string(c.scenario);
  json g;
  if (c.scenario == Scenario::Circular) {
    g["R"] = c.R;
    g["rho0"] = c.rho0;
  } else {
    g["side"] = c.side;
    g["inclusions"] = json::array();
    for (const auto& inc : c.inclusions) {
      g["inclusions"].push_back({{"centre", {inc.centre.x, inc.centre.y}}, {"radius", inc.radius}});
    }
  }
  j["geometry"] = g;
  auto phase = [](const PhaseSpec& p) { return json{{"E", p.E}, {"nu", p.nu}, {"psi0", p.psi0}}; };
  j["material"] = {{"phase1", phase(c.phases[0])}, {"phase2", phase(c.phases[1])}, {"eps", c.eps}};
  if (c.eigenstrain_factors) {
    j["material"]["eigenstrain_factors"] = {(*c.eigenstrain_factors)[0], (*c.eigenstrain_factors)[1]};
  }
  j["interface"] = {{"gamma", c.gamma}, {"m_hat", c.m_hat}, {"phi_reg", c.phi_reg}};
  if (c.ell_over_h) j["interface"]["ell_over_h"] = *c.ell_over_h;
  if (c.ell) j["interface"]["ell"] = *c.ell;
  j["mesh"] = json::object();
  if (c.h) j["mesh"]["h"] = *c.h;
  if (c.N) j["mesh"]["N"] = *c.N;
  json s = {{"newton_tol", c.newton_tol},
            {"max_newton", c.max_newton},
            {"steady_tol", c.steady_tol},
            {"stop_fraction", c.stop_fraction}};
  if (c.dt_max) s["dt_max"] = *c.dt_max;
  if (c.dt_max_fraction) s["dt_max_fraction"] = *c.dt_max_fraction;
  if (c.dt_initial) s["dt_initial"] = *c.dt_initial;
  if (c.t_end) s["t_end"] = *c.t_end;
  j["stepping"] = s;
  j["outputs"] = {{"out_dir", c.out_dir}, {"snapshot_every", c.snapshot_every}, {"vtk", c.vtk}};
  return j;
}

void set_dotted(json& j, const std::string& key, const json& value) {
  if (key.empty()) throw ConfigError("override: empty key");
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override: malformed key '" + key + "'");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    if (!node->contains(part) || !(*node)[part].is_object()) (*node)[part] = json::object();
    node = &(*node)[part];
    start = dot + 1;
  }
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "': expected key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  set_dotted(j, key, value);
}

json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config '" + path + "'");
  json j = json::parse(is, nullptr, false, true);
  if (j.is_discarded()) throw ConfigError("config '" + path + "': invalid JSON");
  return j;
}

}  // namespace letpf
