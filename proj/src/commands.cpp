#include "rabi/commands.hpp"

#include <ostream>

#include <json.hpp>

#include "rabi/analytic.hpp"
#include "rabi/parallel.hpp"

namespace rabi {

namespace {

Parity single_parity(const RunConfig& cfg, const char* command) {
  if (cfg.parities.size() != 1) throw ConfigError(std::string(command) + " needs parity = even or odd");
  return cfg.parities.front();
}

IntegratorOptions integrator(const RunConfig& cfg) {
  IntegratorOptions o;
  o.max_step = cfg.max_step;
  return o;
}

struct Point {
  double g1, g2;
};

// Coupling points of the configured sweep(s), first axis outermost.
std::vector<Point> sweep_points(const RunConfig& cfg) {
  auto apply = [&](Point p, SweepAxis axis, double v) {
    if (axis == SweepAxis::g1) {
      p.g1 = v;
      if (cfg.lambda) p.g2 = *cfg.lambda * v;
    } else {
      p.g2 = v;
    }
    return p;
  };
  const Point base{cfg.params.g1, cfg.params.g2};
  std::vector<Point> pts;
  if (!cfg.sweep) return {base};
  for (double v : cfg.sweep->values) {
    const Point p = apply(base, cfg.sweep->axis, v);
    if (!cfg.sweep2) {
      pts.push_back(p);
      continue;
    }
    for (double w : cfg.sweep2->values) pts.push_back(apply(p, cfg.sweep2->axis, w));
  }
  return pts;
}

Trajectory run_trajectory(const RunConfig& cfg, const ModelParams& p, Parity parity, std::span<const double> grid) {
  RunConfig local = cfg;
  local.params = p;
  const StateVector psi0 = initial_state(local, parity);
  if (cfg.solver == Solver::effective) return evolve_effective(psi0, p, grid, cfg.renormalize).trajectory;
  return evolve_master(DensityMatrix::pure(psi0.basis, psi0.amplitudes), p, grid, integrator(cfg)).trajectory;
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        // Round-trip through the CSV text so both formats carry the same digits.
        if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? nlohmann::ordered_json(std::stod(format_number(v))) : nlohmann::ordered_json(nullptr);
        else return v;
      },
      c);
}

}  // namespace

Table cmd_dynamics(const RunConfig& cfg) {
  const Parity parity = single_parity(cfg, "dynamics");
  if (!cfg.sweep) {
    const auto grid = uniform_grid(cfg.t_max_tc, cfg.samples_per_tc);
    const Trajectory tr = run_trajectory(cfg, cfg.params, parity, grid);
    Table t{"dynamics", {"t_over_Tc", "mean_photon", "qubit_excitation", "trace", "purity"}, {}, {}};
    for (std::size_t k = 0; k < tr.size(); ++k)
      t.rows.push_back({tr.times[k], tr.mean_photon[k], tr.qubit_excitation[k], tr.trace[k], tr.purity[k]});
    return t;
  }

  std::vector<double> snaps = cfg.snapshot_tc.empty() ? std::vector<double>{cfg.t_max_tc} : cfg.snapshot_tc;
  std::sort(snaps.begin(), snaps.end());
  const auto points = sweep_points(cfg);
  std::vector<Trajectory> results(points.size());
  parallel_for(points.size(), cfg.jobs, [&](std::size_t i) {
    results[i] = run_trajectory(cfg, cfg.point(points[i].g1, points[i].g2), parity, snaps);
  });
  Table t{"dynamics", {"t_over_Tc", "g1", "g2", "mean_photon", "qubit_excitation"}, {}, {}};
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t k = 0; k < snaps.size(); ++k)
      t.rows.push_back({snaps[k], points[i].g1, points[i].g2, results[i].mean_photon[k], results[i].qubit_excitation[k]});
  return t;
}

Table cmd_spectrum(const RunConfig& cfg) {
  if (cfg.sweep2) throw ConfigError("spectrum takes a single sweep axis");
  if (cfg.basis == BasisKind::full) throw ConfigError("spectrum works per parity chain; use basis = chain");
  SweepSpec sweep;
  if (cfg.sweep) {
    sweep.axis = cfg.sweep->axis;
    sweep.values = cfg.sweep->values;
  } else {
    sweep.values = {cfg.params.g1};
  }
  if (sweep.axis == SweepAxis::g1) sweep.lambda = cfg.lambda;
  const double w = cfg.params.omega;

  Table t{"spectrum", {"sweep_value", "parity", "branch", "re_E_over_omega", "im_E_over_omega"}, {}, {}};
  if (cfg.spectrum_output == SpectrumOutput::weights) {
    t.columns.insert(t.columns.end(), {"weight", "condition", "ill_conditioned"});
    for (Parity parity : cfg.parities) {
      std::vector<EigenstateWeights> maps(sweep.values.size());
      parallel_for(sweep.values.size(), cfg.jobs, [&](std::size_t i) {
        const ModelParams p = sweep.apply(cfg.params, sweep.values[i]);
        RunConfig local = cfg;
        local.params = p;
        maps[i] = map_initial_state(initial_state(local, parity), p, parity);
      });
      for (std::size_t i = 0; i < maps.size(); ++i)
        for (std::size_t k = 0; k < maps[i].energies.size(); ++k)
          t.rows.push_back({sweep.values[i] / w, to_string(parity), static_cast<long>(k), maps[i].energies[k].real() / w,
                            maps[i].energies[k].imag() / w, maps[i].weights[k], maps[i].condition, maps[i].ill_conditioned});
    }
  } else {
    for (Parity parity : cfg.parities) {
      const LevelSet set = sweep_spectrum(cfg.params, parity, sweep, false, cfg.jobs);
      for (std::size_t i = 0; i < sweep.values.size(); ++i)
        for (const auto& level : set.levels)
          t.rows.push_back({sweep.values[i] / w, to_string(parity), static_cast<long>(level.label.branch),
                            level.values[i].real() / w, level.values[i].imag() / w});
    }
  }

  if (cfg.ep_scan) {
    const int n = *cfg.ep_scan;
    const auto ep = find_exceptional_point(cfg.params, n, cfg.ep_g1_max);
    const std::string analytic = format_number(analytic::ep_position(n, cfg.params) / w);
    t.notes.emplace_back("exceptional_point",
                         "n=" + std::to_string(n) + " g1_over_omega=" + (ep ? format_number(ep->parameter / w) : std::string("none")) +
                             " analytic=" + analytic);
  }
  return t;
}

Table cmd_steady(const RunConfig& cfg) {
  if (cfg.basis == BasisKind::full) throw ConfigError("steady states are computed per parity chain; use basis = chain");
  if (cfg.initial.size() > 1) throw ConfigError("steady-state runs start from a single bare state");
  SteadyOptions opt;
  opt.method = cfg.steady_method;
  opt.tolerance = cfg.steady_tolerance;
  opt.window_tc = cfg.steady_window_tc;
  opt.cap_tc = cfg.steady_cap_tc;
  opt.residual_tolerance = cfg.residual_tolerance;
  opt.integrator = integrator(cfg);
  if (!cfg.initial.empty()) opt.initial = cfg.initial.front().state;

  const auto points = sweep_points(cfg);
  std::vector<std::pair<double, double>> couplings;
  for (const auto& p : points) couplings.emplace_back(p.g1, p.g2);

  Table t{"steady", {"g1", "g2", "parity", "mean_photon", "qubit_excitation", "converged", "residual"}, {}, {}};
  for (Parity parity : cfg.parities) {
    if (opt.initial && parity_of(*opt.initial) != parity)
      throw ConfigError("initial state " + to_string(*opt.initial) + " is not in the " + to_string(parity) + " chain");
    const auto rows = steady_map(cfg.params, parity, couplings, opt, cfg.jobs);
    for (const auto& r : rows)
      t.rows.push_back({r.g1, r.g2, to_string(r.parity), r.mean_photon, r.qubit_excitation, r.converged, r.residual});
  }
  return t;
}

Table verify_table(const std::vector<VerifyCheck>& checks) {
  Table t{"verify", {"check", "passed", "detail"}, {}, {}};
  for (const auto& c : checks) t.rows.push_back({c.name, c.passed, c.detail});
  return t;
}

void write_table(std::ostream& out, const Table& table, const RunConfig& config) {
  if (config.format == OutputFormat::json) {
    nlohmann::ordered_json doc;
    doc["command"] = table.command;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config.resolved()) cfg[k] = v;
    doc["config"] = cfg;
    doc["columns"] = table.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = cell_json(row[c]);
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    nlohmann::ordered_json notes = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.notes) notes[k] = v;
    doc["notes"] = notes;
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# rabi-relax " << table.command << '\n';
  for (const auto& [k, v] : config.resolved()) out << "# " << k << " = " << v << '\n';
  for (const auto& [k, v] : table.notes) out << "# " << k << ' ' << v << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
    out << '\n';
  }
}

}  // namespace rabi
