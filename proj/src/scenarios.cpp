#include "letpf/scenarios.hpp"

#include "letpf/errors.hpp"
#include "letpf/material.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace letpf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void log(const RunOptions& o, const std::string& msg) {
  if (o.log) o.log(msg);
}

std::string snapshot_name(int k) {
  std::ostringstream s;
  s << "state_" << std::setw(5) << std::setfill('0') << k << ".vtk";
  return s.str();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_json(const json& j, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << j.dump(2) << '\n';
}

struct Snapshots {
  const SimConfig& cfg;
  const RunOptions& opts;
  const System& sys;
  fs::path dir;
  int count = 0;

  void write(const State& s) {
    if (!opts.write_outputs || !cfg.vtk) return;
    fs::create_directories(dir);
    post::write_vtk(sys, s, (dir / snapshot_name(count++)).string());
  }
};

StepControl step_control(const SimConfig& cfg, double dt_max, double t_end) {
  StepControl sc;
  sc.dt_max = dt_max;
  sc.dt_initial = cfg.dt_initial ? std::min(*cfg.dt_initial, dt_max) : dt_max;
  sc.t_end = t_end;
  sc.newton.tolerance = cfg.newton_tol;
  sc.newton.max_iterations = cfg.max_newton;
  return sc;
}

double max_phi_change(const State& a, const State& b) {
  double d = 0.0;
  for (int k = 0; k < a.num_nodes(); ++k) d = std::max(d, std::abs(a.phi(k) - b.phi(k)));
  return d;
}

void finish_outputs(const SimConfig& cfg, const RunOptions& opts, RunResult& res) {
  if (!opts.write_outputs) return;
  const fs::path dir(cfg.out_dir);
  post::write_csv(res.trajectory, (dir / "trajectory.csv").string());
  write_json(res.report, (dir / "report.json").string());
}

}  // namespace

Material make_material(const SimConfig& cfg) {
  Material m;
  const auto f = cfg.eigenstrains();
  for (int i = 0; i < 2; ++i) {
    m.phases[i].psi0 = cfg.phases[i].psi0;
    m.phases[i].eigenstrain = SymTensor2::identity() * (f[i] * cfg.eps);
    m.phases[i].stiffness = isotropic_stiffness(cfg.phases[i].E, cfg.phases[i].nu);
  }
  m.interface = InterfaceParams::make(cfg.gamma, cfg.interface_width(), cfg.m_hat);
  m.phi_reg = cfg.phi_reg;
  return m;
}

Problem build_problem(const SimConfig& cfg) {
  validate(cfg);
  Problem pb;
  pb.material = make_material(cfg);
  const double ell = cfg.interface_width();
  if (cfg.scenario == Scenario::Circular) {
    const double h = *cfg.h;
    QuarterDiscOptions q;
    q.radius = cfg.R;
    q.n_core = static_cast<int>(std::lround(0.55 * cfg.R / h));
    if (q.n_core < 5) throw ConfigError("mesh.h: too coarse for the quarter disc");
    q.core_side = q.n_core * h;
    if (!(q.core_side < cfg.R) || !(cfg.rho0 < q.core_side)) {
      throw ConfigError("mesh.h: regular core does not fit between rho0 and R");
    }
    pb.mesh = build_quarter_disc(q);
    for (int n : pb.mesh.node_set("y-axis")) pb.bcs.push_back({3 * n, 0.0});
    for (int n : pb.mesh.node_set("x-axis")) pb.bcs.push_back({3 * n + 1, 0.0});
    pb.phi0.resize(pb.mesh.num_nodes());
    for (int k = 0; k < pb.mesh.num_nodes(); ++k) {
      pb.phi0[k] = equilibrium_profile(pb.mesh.nodes[k].norm(), cfg.rho0, ell);
    }
    const auto f = cfg.eigenstrains();
    if (f[0] == 1.0 && f[1] == 0.0 && cfg.phases[0].psi0 == 0.0 && cfg.phases[1].psi0 == 0.0) {
      oracle::OracleParams op;
      op.R = cfg.R;
      op.rho0 = cfg.rho0;
      op.eps = cfg.eps;
      op.gamma = cfg.gamma;
      op.m_hat = cfg.m_hat;
      op.inclusion = lame_from_young(cfg.phases[0].E, cfg.phases[0].nu);
      op.matrix = lame_from_young(cfg.phases[1].E, cfg.phases[1].nu);
      pb.oracle = op;
    }
  } else {
    pb.mesh = build_square_grid(cfg.side, *cfg.N);
    std::vector<char> fixed(pb.mesh.num_nodes(), 0);
    for (const char* tag : {"left", "right", "bottom", "top"}) {
      for (int n : pb.mesh.node_set(tag)) fixed[n] = 1;
    }
    for (int n = 0; n < pb.mesh.num_nodes(); ++n) {
      if (!fixed[n]) continue;
      pb.bcs.push_back({3 * n, 0.0});
      pb.bcs.push_back({3 * n + 1, 0.0});
    }
    pb.phi0.assign(pb.mesh.num_nodes(), 0.0);
    for (int k = 0; k < pb.mesh.num_nodes(); ++k) {
      double v = 0.0;
      for (const auto& inc : cfg.inclusions) {
        const double r = (pb.mesh.nodes[k] - inc.centre).norm();
        v = std::max(v, 1.0 - equilibrium_profile(r, inc.radius, ell));
      }
      pb.phi0[k] = v;
    }
  }
  return pb;
}

RunResult run_circular(const SimConfig& cfg, const RunOptions& opts) {
  if (cfg.scenario != Scenario::Circular) throw ConfigError("run_circular: scenario must be 'circular'");
  Problem pb = build_problem(cfg);
  RunResult res;
  res.config = cfg;
  json& rep = res.report;
  rep["scenario"] = "circular";
  rep["method"] = to_string(cfg.method);

  std::optional<oracle::Trajectory> exact;
  if (pb.oracle) {
    oracle::IntegrationOptions io;
    io.general_moduli = !pb.oracle->equal_moduli();
    exact = oracle::integrate_trajectory(*pb.oracle, cfg.stop_fraction * cfg.rho0, io);
    rep["T_exact"] = exact->T_exact;
    rep["A"] = pb.oracle->equal_moduli() ? json(oracle::dimensionless_A(*pb.oracle)) : json(nullptr);
  } else {
    rep["T_exact"] = nullptr;
    rep["A"] = nullptr;
  }
  double dt_max = 0.0;
  if (cfg.dt_max) {
    dt_max = *cfg.dt_max;
  } else {
    if (!exact) throw ConfigError("stepping.dt_max_fraction requires an oracle-compatible configuration");
    dt_max = *cfg.dt_max_fraction * exact->T_exact;
  }
  double t_end = 0.0;
  if (cfg.t_end) {
    t_end = *cfg.t_end;
  } else {
    if (!exact) throw ConfigError("stepping.t_end is required without an oracle");
    t_end = 5.0 * exact->T_exact;
  }
  rep["dt_max"] = dt_max;

  const fs::path dir(cfg.out_dir);
  if (opts.write_outputs) {
    fs::create_directories(dir);
    write_manifest(cfg, dir.string(), {{"linear_solver", LinearSolver::backend()}});
    if (exact) oracle::write_trajectory_csv(*exact, *pb.oracle, (dir / "oracle.csv").string());
  }

  System sys(std::move(pb.mesh), pb.material, cfg.method, std::move(pb.bcs));
  post::FieldSampler sampler(sys.mesh());
  const auto angles = post::quarter_angles(91);
  post::RayOptions ray;
  ray.r_max = cfg.R;
  Snapshots snaps{cfg, opts, sys, dir / "snapshots"};

  const double stop_radius = cfg.stop_fraction * cfg.rho0;
  std::vector<double> rho_series, t_series, cv_series;
  bool vanished = false;

  EvolutionCallbacks cb;
  cb.measure = [&](const State& s, TrajectoryRow& row) {
    const auto m = post::mean_radius(sampler, s.phi_field(), {0.0, 0.0}, angles, ray);
    const auto en = post::total_energies(sys, s);
    // Quarter model: report full-inclusion energies.
    row.psi_el = 4.0 * en.elastic;
    row.psi_int = 4.0 * en.interfacial;
    row.psi_total = row.psi_el + row.psi_int;
    if (m.vanished) {
      vanished = true;
      row.rho_bar = 0.0;
      row.cv_rho = kNaN;
      return;
    }
    row.rho_bar = m.rho_bar;
    row.cv_rho = m.cv;
    rho_series.push_back(m.rho_bar);
    t_series.push_back(s.t);
    cv_series.push_back(m.cv);
  };
  cb.stop = [&](const State&, const TrajectoryRow& row, const State&) {
    return vanished || row.rho_bar <= stop_radius;
  };
  int accepted = 0;
  cb.on_accept = [&](const State& s, const TrajectoryRow& row) {
    if (accepted == 0 || (cfg.snapshot_every > 0 && accepted % cfg.snapshot_every == 0)) snaps.write(s);
    if (accepted % 50 == 0) {
      std::ostringstream m;
      m << "step " << accepted << " t=" << row.t << " dt=" << row.dt << " rho=" << row.rho_bar
        << " iters=" << row.newton_iters;
      log(opts, m.str());
    }
    ++accepted;
  };

  State init = make_state(sys.mesh(), pb.phi0);
  auto ev = run_evolution(sys, std::move(init), step_control(cfg, dt_max, t_end), cb);
  snaps.write(ev.final_state);

  res.trajectory = std::move(ev.trajectory);
  res.final_state = std::move(ev.final_state);
  res.ok = ev.failure.empty();
  res.failure = ev.failure;
  res.accepted_steps = ev.accepted_steps;
  res.rejected_steps = ev.rejected_steps;

  rep["status"] = res.ok ? "ok" : "failed";
  rep["failure"] = ev.failure;
  rep["n_steps"] = ev.accepted_steps;
  rep["rejected_steps"] = ev.rejected_steps;
  rep["t_final"] = res.final_state.t;
  rep["reached_stop_radius"] = ev.stopped_by_predicate;
  rep["rho_final"] = rho_series.empty() ? json(nullptr) : json(rho_series.back());
  if (exact && !rho_series.empty()) {
    try {
      const auto err = post::relative_error(t_series, rho_series, *exact, cfg.rho0, cfg.stop_fraction);
      rep["relative_error"] = number_or_null(err.value);
      rep["error_truncated"] = err.truncated;
    } catch (const std::runtime_error& e) {
      rep["relative_error"] = nullptr;
      rep["error_truncated"] = true;
      rep["error_diagnostic"] = e.what();
    }
  } else {
    rep["relative_error"] = nullptr;
  }
  rep["cv_bar"] = rho_series.empty() ? json(nullptr)
                                     : number_or_null(post::mean_cv(rho_series, cv_series, cfg.rho0,
                                                                    cfg.stop_fraction));
  if (!res.trajectory.empty()) {
    rep["psi_el_initial"] = res.trajectory.front().psi_el;
    if (pb.oracle) rep["psi_el_oracle_initial"] = oracle::elastic_energy(cfg.rho0, *pb.oracle);
  }
  finish_outputs(cfg, opts, res);
  return res;
}

std::string classify_scenario(const std::array<std::array<bool, 3>, 3>& merged, double max_dev_half) {
  if (max_dev_half < 0.05) return "trivial";
  if (merged[0][1] || merged[0][2]) return "three-coalesce";
  if (merged[1][2]) return "two-coalesce";
  return "other";
}

namespace {

RunResult run_square(const SimConfig& cfg, const RunOptions& opts) {
  Problem pb = build_problem(cfg);
  RunResult res;
  res.config = cfg;
  json& rep = res.report;
  rep["scenario"] = to_string(cfg.scenario);
  rep["method"] = to_string(cfg.method);

  const fs::path dir(cfg.out_dir);
  if (opts.write_outputs) {
    fs::create_directories(dir);
    write_manifest(cfg, dir.string(), {{"linear_solver", LinearSolver::backend()}});
  }
  System sys(std::move(pb.mesh), pb.material, cfg.method, std::move(pb.bcs));
  post::FieldSampler sampler(sys.mesh());
  Snapshots snaps{cfg, opts, sys, dir / "snapshots"};

  const double ell = cfg.interface_width();
  const double rate_tol = cfg.steady_tol * cfg.m_hat * cfg.gamma / (ell * ell);
  const bool single = cfg.inclusions.size() == 1;
  std::vector<double> angles(360);
  for (int i = 0; i < 360; ++i) angles[i] = 2.0 * std::numbers::pi * i / 360.0;
  post::RayOptions ray;
  ray.rule = post::Crossing::Innermost;

  const bool track = cfg.inclusions.size() == 3;
  CoalescenceRecord rec;
  std::vector<int> centre_element(cfg.inclusions.size(), -1);
  for (std::size_t i = 0; i < cfg.inclusions.size(); ++i) {
    double xi = 0.0, eta = 0.0;
    int e = -1;
    if (sampler.locate(cfg.inclusions[i].centre, e, xi, eta)) centre_element[i] = e;
  }
  // identity follows component overlap, so a domain growing over the spot
  // where another inclusion vanished does not count as a merge
  post::ComponentTracker tracker(centre_element);

  EvolutionCallbacks cb;
  cb.measure = [&](const State& s, TrajectoryRow& row) {
    const auto en = post::total_energies(sys, s);
    row.psi_el = en.elastic;
    row.psi_int = en.interfacial;
    row.psi_total = en.total();
    row.rho_bar = kNaN;
    row.cv_rho = kNaN;
    if (single) {
      const auto m = post::mean_radius(sampler, s.phi_field(), cfg.inclusions[0].centre, angles, ray);
      if (!m.vanished) {
        row.rho_bar = m.rho_bar;
        row.cv_rho = m.cv;
      }
    }
  };
  double last_rate = kNaN;
  cb.stop = [&](const State& s, const TrajectoryRow& row, const State& prev) {
    last_rate = max_phi_change(s, prev) / row.dt;
    return last_rate < rate_tol;
  };
  int accepted = 0;
  std::array<int, 3> lab_prev{-1, -1, -1};
  cb.on_accept = [&](const State& s, const TrajectoryRow& row) {
    if (track) {
      int count = 0;
      const auto labels = post::phase_components(sys.mesh(), s.phi_field(), count);
      const auto& tracked = tracker.update(labels, count);
      std::array<int, 3> lab{};
      for (int i = 0; i < 3; ++i) {
        if (lab_prev[i] >= 0 && tracked[i] < 0) {
          rec.events.push_back({{"t", row.t}, {"event", "vanish"}, {"inclusion", i + 1}});
        }
        lab[i] = tracked[i];
      }
      lab_prev = lab;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          if (lab[i] >= 0 && lab[i] == lab[j] && !rec.merged[i][j]) {
            rec.merged[i][j] = rec.merged[j][i] = true;
            rec.events.push_back({{"t", row.t}, {"event", "merge"}, {"inclusions", {i + 1, j + 1}}});
          }
        }
      if (rec.final_components != count && accepted > 0) {
        rec.events.push_back({{"t", row.t}, {"event", "components"}, {"count", count}});
      }
      rec.final_components = count;
      rec.final_labels = lab;
    }
    if (accepted == 0 || (cfg.snapshot_every > 0 && accepted % cfg.snapshot_every == 0)) snaps.write(s);
    if (accepted % 50 == 0) {
      std::ostringstream m;
      m << "step " << accepted << " t=" << row.t << " dt=" << row.dt << " iters=" << row.newton_iters
        << " psi=" << row.psi_total;
      log(opts, m.str());
    }
    ++accepted;
  };

  State init = make_state(sys.mesh(), pb.phi0);
  auto ev = run_evolution(sys, std::move(init), step_control(cfg, *cfg.dt_max, *cfg.t_end), cb);
  snaps.write(ev.final_state);

  res.trajectory = std::move(ev.trajectory);
  res.final_state = std::move(ev.final_state);
  res.ok = ev.failure.empty();
  res.failure = ev.failure;
  res.accepted_steps = ev.accepted_steps;
  res.rejected_steps = ev.rejected_steps;

  const State& fin = res.final_state;
  const auto en = post::total_energies(sys, fin);
  rep["status"] = res.ok ? "ok" : "failed";
  rep["failure"] = ev.failure;
  rep["n_steps"] = ev.accepted_steps;
  rep["rejected_steps"] = ev.rejected_steps;
  rep["t_final"] = fin.t;
  rep["steady_state"] = ev.stopped_by_predicate;
  rep["final_phi_rate"] = number_or_null(last_rate);
  rep["psi_el"] = en.elastic;
  rep["psi_int"] = en.interfacial;
  rep["phase2_fraction"] = post::phase2_fraction(sys, fin);
  const double dev = post::max_deviation_from_half(fin);
  rep["max_deviation_from_half"] = dev;
  if (single) {
    const Vec2 c = cfg.inclusions[0].centre;
    const auto phi = fin.phi_field();
    const auto dh = post::ray_crossing(sampler, phi, c, 0.0, ray);
    const auto dd = post::ray_crossing(sampler, phi, c, 0.25 * std::numbers::pi, ray);
    rep["distance_horizontal"] = dh ? json(*dh) : json(nullptr);
    rep["distance_diagonal"] = dd ? json(*dd) : json(nullptr);
  }
  if (track) {
    rec.classification = classify_scenario(rec.merged, dev);
    json merged = json::array();
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (rec.merged[i][j]) merged.push_back({i + 1, j + 1});
    rep["merged_pairs"] = merged;
    rep["events"] = rec.events;
    rep["final_components"] = rec.final_components;
    rep["final_labels"] = rec.final_labels;
    rep["classification"] = rec.classification;
  }
  finish_outputs(cfg, opts, res);
  return res;
}

}  // namespace

RunResult run_single_inclusion(const SimConfig& cfg, const RunOptions& opts) {
  if (cfg.scenario != Scenario::SingleInclusion) throw ConfigError("scenario must be 'single_inclusion'");
  return run_square(cfg, opts);
}

RunResult run_three_inclusions(const SimConfig& cfg, const RunOptions& opts) {
  if (cfg.scenario != Scenario::ThreeInclusions) throw ConfigError("scenario must be 'three_inclusions'");
  return run_square(cfg, opts);
}

RunResult run_simulation(const SimConfig& cfg, const RunOptions& opts) {
  switch (cfg.scenario) {
    case Scenario::Circular: return run_circular(cfg, opts);
    case Scenario::SingleInclusion: return run_single_inclusion(cfg, opts);
    case Scenario::ThreeInclusions: return run_three_inclusions(cfg, opts);
    case Scenario::Custom: return run_square(cfg, opts);
  }
  throw ConfigError("unknown scenario");
}

void write_manifest(const SimConfig& cfg, const std::string& dir, const json& extra) {
  json m;
  m["config"] = to_json(cfg);
  m["build"] = {{"linear_solver", LinearSolver::backend()}};
  if (extra.is_object()) {
    for (const auto& [k, v] : extra.items()) m[k] = v;
  }
  fs::create_directories(dir);
  write_json(m, (fs::path(dir) / "manifest.json").string());
}

// ---------------------------------------------------------------------------
// Campaigns

std::vector<CampaignCell> CampaignConfig::cells() const {
  std::vector<CampaignCell> out{{json::object()}};
  for (const auto& [key, values] : sweep) {
    std::vector<CampaignCell> next;
    for (const auto& cell : out) {
      for (const auto& v : values) {
        CampaignCell c = cell;
        c.overrides[key] = v;
        next.push_back(std::move(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

CampaignConfig parse_campaign(const json& j) {
  if (!j.is_object()) throw ConfigError("campaign: expected an object");
  CampaignConfig cc;
  for (const auto& [k, v] : j.items()) {
    if (k != "base" && k != "sweep" && k != "threads" && k != "out_dir" && k != "write_cells") {
      throw ConfigError("campaign." + k + ": unknown key");
    }
  }
  cc.base = j.value("base", json::object());
  if (!cc.base.is_object()) throw ConfigError("campaign.base: expected an object");
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    if (!s.is_object()) throw ConfigError("campaign.sweep: expected an object of arrays");
    for (const auto& [k, v] : s.items()) {
      if (!v.is_array() || v.empty()) throw ConfigError("campaign.sweep." + k + ": expected a non-empty array");
      cc.sweep.emplace_back(k, std::vector<json>(v.begin(), v.end()));
    }
  }
  if (j.contains("threads")) {
    if (!j.at("threads").is_number_integer() || j.at("threads").get<int>() < 0) {
      throw ConfigError("campaign.threads: expected a nonnegative integer");
    }
    cc.threads = j.at("threads").get<int>();
  }
  if (j.contains("out_dir")) {
    if (!j.at("out_dir").is_string()) throw ConfigError("campaign.out_dir: expected a string");
    cc.out_dir = j.at("out_dir").get<std::string>();
  }
  if (j.contains("write_cells")) {
    if (!j.at("write_cells").is_boolean()) throw ConfigError("campaign.write_cells: expected true or false");
    cc.write_cells = j.at("write_cells").get<bool>();
  }
  // Every cell must be a valid configuration before anything runs.
  for (const auto& cell : cc.cells()) {
    json cfg = cc.base;
    for (const auto& [k, v] : cell.overrides.items()) set_dotted(cfg, k, v);
    parse_config(cfg);
  }
  return cc;
}

const std::vector<std::string>& campaign_columns() {
  static const std::vector<std::string> cols = {"cell",      "method",  "gamma",          "A",
                                                "h",         "ell_over_h", "dt_max",     "phi_reg",
                                                "relative_error", "n_steps", "cv_bar",   "status"};
  return cols;
}

int run_campaign(const CampaignConfig& cc, const RunOptions& opts) {
  const auto cells = cc.cells();
  const int n = static_cast<int>(cells.size());
  std::vector<std::string> rows(n);
  std::atomic<int> next{0};
  std::atomic<int> failed{0};
  std::mutex log_mutex;

  auto fmt = [](const json& v) -> std::string {
    if (v.is_null()) return "";
    if (v.is_number_float()) {
      std::ostringstream s;
      s << std::setprecision(17) << v.get<double>();
      return s.str();
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };

  auto work = [&]() {
    for (int i = next++; i < n; i = next++) {
      json cfgj = cc.base;
      for (const auto& [k, v] : cells[i].overrides.items()) set_dotted(cfgj, k, v);
      std::ostringstream cell_dir;
      cell_dir << cc.out_dir << "/cell_" << std::setw(4) << std::setfill('0') << i;
      set_dotted(cfgj, "outputs.out_dir", cell_dir.str());
      set_dotted(cfgj, "outputs.vtk", false);
      SimConfig cfg = parse_config(cfgj);
      RunOptions ro;
      ro.write_outputs = cc.write_cells;
      json rep;
      std::string status;
      try {
        auto r = run_simulation(cfg, ro);
        rep = r.report;
        status = r.ok ? "ok" : "failed: " + r.failure;
      } catch (const std::exception& e) {
        status = std::string("error: ") + e.what();
      }
      if (status != "ok") ++failed;
      const double h = cfg.element_size();
      std::ostringstream row;
      row << i << ',' << to_string(cfg.method) << ',' << fmt(cfg.gamma) << ',' << fmt(rep.value("A", json()))
          << ',' << fmt(h) << ',' << fmt(cfg.interface_width() / h) << ',' << fmt(rep.value("dt_max", json()))
          << ',' << fmt(cfg.phi_reg) << ',' << fmt(rep.value("relative_error", json())) << ','
          << fmt(rep.value("n_steps", json())) << ',' << fmt(rep.value("cv_bar", json())) << ",\"";
      for (char ch : status) row << (ch == '"' ? '\'' : ch);
      row << '"';
      rows[i] = row.str();
      if (opts.log) {
        std::lock_guard<std::mutex> lk(log_mutex);
        opts.log("cell " + std::to_string(i) + "/" + std::to_string(n) + " " + status);
      }
    }
  };

  const int threads = std::max(1, cc.threads == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : cc.threads);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(threads, n); ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  fs::create_directories(cc.out_dir);
  const std::string path = (fs::path(cc.out_dir) / "campaign.csv").string();
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  const auto& cols = campaign_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : rows) os << r << '\n';
  return failed.load();
}

}  // namespace letpf
