// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.  Tolerances and runtime budgets are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rabi/analytic.hpp"
#include "rabi/dynamics.hpp"
#include "rabi/parallel.hpp"
#include "rabi/spectra.hpp"

using namespace rabi;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

ModelParams model(double delta, double g1, double g2, double kappa, int n_max = 20) {
  return {1.0, delta, g1, g2, kappa, FockCutoff{n_max}};
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Peak {
  double position;    // parabolic vertex through the three grid points
  double value;
  double prominence;  // height above the higher of the two bounding minima
};

std::vector<Peak> interior_maxima(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<Peak> peaks;
  const std::size_t n = y.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    double left = y[i], right = y[i];
    for (std::size_t j = i; j-- > 0 && y[j] <= y[i];) left = std::min(left, y[j]);
    for (std::size_t j = i + 1; j < n && y[j] <= y[i]; ++j) right = std::min(right, y[j]);
    const double denom = y[i - 1] - 2 * y[i] + y[i + 1];
    const double h = x[i + 1] - x[i];
    const double shift = denom != 0 ? 0.5 * h * (y[i - 1] - y[i + 1]) / denom : 0.0;
    peaks.push_back({x[i] + shift, y[i], y[i] - std::max(left, right)});
  }
  return peaks;
}

std::vector<double> negate(std::vector<double> v) {
  for (double& x : v) x = -x;
  return v;
}

std::optional<Peak> most_prominent(const std::vector<Peak>& peaks) {
  std::optional<Peak> best;
  for (const auto& p : peaks)
    if (!best || p.prominence > best->prominence) best = p;
  return best;
}

std::vector<SteadyReport> null_space_sweep(const ModelParams& base, Parity parity, SweepAxis axis,
                                           const std::vector<double>& values) {
  std::vector<std::pair<double, double>> pts;
  for (double v : values) pts.emplace_back(axis == SweepAxis::g1 ? v : base.g1, axis == SweepAxis::g2 ? v : base.g2);
  SteadyOptions opt;
  opt.method = SteadyMethod::null_space;
  std::vector<SteadyReport> out(pts.size());
  const auto rows = steady_map(base, parity, pts, opt, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[i].converged = rows[i].converged;
    out[i].mean_photon = rows[i].mean_photon;
    out[i].qubit_excitation = rows[i].qubit_excitation;
  }
  return out;
}

// 1
Outcome spectral_equivalence() {
  double worst = 0;
  for (const ModelParams& p : {model(0.8, 0.3, 0, 0.02), model(0.8, 1.1, 0, 0.02), model(0.8, 0, 0.45, 0.02), model(0.8, 0, 1.3, 0.02)})
    for (Parity parity : {Parity::even, Parity::odd}) {
      const auto numeric = complex_spectrum(p, parity).values;
      for (int n = 0; n <= 8; ++n) {
        const auto d = p.g2 == 0 ? analytic::jc_doublet(n, p) : analytic::ajc_doublet(n, p);
        if (parity_of(d.first) != parity) continue;
        for (cplx e : {d.E_plus, d.E_minus}) {
          double best = INFINITY;
          for (cplx v : numeric) best = std::min(best, std::abs(v - e));
          worst = std::max(worst, best);
        }
      }
    }
  return {worst <= 1e-8, "max |E_num - E_doublet| over n <= 8 = " + fmt("%.2e", worst)};
}

// 2
Outcome exceptional_point() {
  const ModelParams p = model(1.0, 0, 0, 0.02);
  const auto ep = find_exceptional_point(p, 1);
  if (!ep) return {false, "no exceptional point found"};
  const double err = std::abs(ep->parameter - std::sqrt(2.0) * 1e-2);
  double im_err = 0;
  for (double factor : {1.5, 3.0, 10.0}) {
    ModelParams above = p;
    above.g1 = factor * ep->parameter;
    auto v = complex_spectrum(above, Parity::even).values;
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return std::abs(a - cplx(1.5, -0.02)) < std::abs(b - cplx(1.5, -0.02)); });
    for (int k = 0; k < 2; ++k) im_err = std::max(im_err, std::abs(v[static_cast<std::size_t>(k)].imag() + p.kappa));
  }
  return {err <= 1e-6 && im_err <= 1e-9,
          "g1_EP = " + fmt("%.12f", ep->parameter) + " (error " + fmt("%.1e", err) + "), imag error above " + fmt("%.1e", im_err)};
}

// 3
Outcome conservation() {
  const ModelParams p = model(0.8, 0.1, 0.05, 0.02);
  const auto states = Basis::full().states(p.cutoff);
  double drift = 0, lowest = 1, leak = 0;
  (void)evolve_master(DensityMatrix::projector(Basis::full(), p.cutoff, {2, Qubit::g}), p, uniform_grid(60, 10), {},
                      [&](double, const DensityMatrix& rho) {
                        drift = std::max(drift, std::abs(rho.trace().real() - 1));
                        lowest = std::min(lowest, rho.min_eigenvalue());
                        double odd = 0;
                        for (std::size_t k = 0; k < states.size(); ++k)
                          if (parity_of(states[k]) == Parity::odd)
                            odd += std::abs(rho.entries()(Eigen::Index(k), Eigen::Index(k)));
                        leak = std::max(leak, odd);
                      });
  return {drift <= 1e-8 && lowest >= -1e-8 && leak <= 1e-10,
          "trace drift " + fmt("%.1e", drift) + ", min eigenvalue " + fmt("%.1e", lowest) + ", leakage " + fmt("%.1e", leak)};
}

// 4
Outcome decay_law() {
  const double kappa = 0.02;
  const ModelParams p = model(0.8, 0, 0, kappa);
  const double t_max_tc = 100 / kappa / std::numbers::pi;
  double worst = 0;
  (void)evolve_master(DensityMatrix::projector(Basis::chain(Parity::even), p.cutoff, {2, Qubit::g}), p, uniform_grid(t_max_tc, 4), {},
                      [&](double t, const DensityMatrix& rho) {
                        worst = std::max(worst, std::abs(observables(rho).mean_photon - 2 * std::exp(-4 * kappa * tc_to_time(t, 1))));
                      });
  return {worst <= 1e-6, "max |<n> - 2 exp(-4 kappa t)| for t <= 100/kappa = " + fmt("%.1e", worst)};
}

// 5
Outcome doublet_oracle() {
  const ModelParams p = model(1.0, 0.1, 0, 0.02);
  const Basis b = Basis::chain(Parity::odd);
  const auto grid = uniform_grid(10, 20);
  const Eigen::Index target = 3;  // |3,g> on the odd chain
  double master = 0, eff = 0, gap = 0;
  std::vector<double> eff_pop;
  (void)evolve_effective(StateVector::basis_state(b, p.cutoff, {2, Qubit::e}), p, grid, false,
                         [&](double, const StateVector& psi) { eff_pop.push_back(std::norm(psi.amplitudes(target))); });
  std::size_t k = 0;
  (void)evolve_master(DensityMatrix::projector(b, p.cutoff, {2, Qubit::e}), p, grid, {}, [&](double t, const DensityMatrix& rho) {
    const double closed = analytic::jc_population(2, tc_to_time(t, 1), p);
    const double pop = rho.entries()(target, target).real();
    master = std::max(master, std::abs(pop - closed));
    eff = std::max(eff, std::abs(eff_pop[k] - closed));
    gap = std::max(gap, std::abs(pop - eff_pop[k]));
    ++k;
  });
  return {master <= 1e-6 && eff <= 1e-6,
          "master vs closed form " + fmt("%.1e", master) + ", effective vs closed form " + fmt("%.1e", eff) +
              ", master vs effective " + fmt("%.1e", gap)};
}

// 6
Outcome even_peaks() {
  const ModelParams base = model(0.8, 0, 0.15, 0.02);
  const auto g1 = linspace(0.5, 2.0, 150);
  const auto rows = null_space_sweep(base, Parity::even, SweepAxis::g1, g1);
  std::vector<double> n;
  bool all = true;
  for (const auto& r : rows) {
    n.push_back(r.mean_photon);
    all = all && r.converged;
  }
  const auto peaks = interior_maxima(g1, n);
  bool ok = all;
  std::string detail = all ? "" : "unconverged points; ";
  for (double target : {std::sqrt(1.8), std::sqrt(3.8)}) {
    const Peak* nearest = nullptr;
    for (const auto& p : peaks)
      if (p.prominence > 1e-4 && (!nearest || std::abs(p.position - target) < std::abs(nearest->position - target))) nearest = &p;
    const double d = nearest ? std::abs(nearest->position - target) : INFINITY;
    ok = ok && d <= 0.02;
    detail += "peak near " + fmt("%.4f", target) + " at " + (nearest ? fmt("%.4f", nearest->position) : std::string("none")) +
              " (off by " + fmt("%.4f", d) + "); ";
  }
  return {ok, detail};
}

// 7
Outcome odd_extremum() {
  const ModelParams base = model(0.8, 0.01, 0, 0.02);
  const auto g2 = linspace(0.2, 0.7, 101);
  const auto rows = null_space_sweep(base, Parity::odd, SweepAxis::g2, g2);
  std::vector<double> n, q;
  for (const auto& r : rows) {
    n.push_back(r.mean_photon);
    q.push_back(r.qubit_excitation);
  }
  const auto peak = most_prominent(interior_maxima(g2, n));
  const auto valleys = interior_maxima(g2, negate(q));
  const auto valley = most_prominent(valleys);
  const double target = std::sqrt(0.2);
  const double dp = peak ? std::abs(peak->position - target) : INFINITY;
  const double dv = valley ? std::abs(valley->position - target) : INFINITY;
  return {dp <= 0.03 && dv <= 0.03,
          "photon peak at " + fmt("%.4f", peak ? peak->position : NAN) + ", qubit valley at " + fmt("%.4f", valley ? valley->position : NAN) +
              ", expected " + fmt("%.4f", target)};
}

// 8
Outcome quasi_steady() {
  const ModelParams base = model(0.8, 0, 0, 0.02);
  const auto g1 = linspace(0.01, 0.2, 96);
  const std::vector<double> snaps{60.0, 120.0};
  const auto rows = transient_snapshot(base, 0.5, g1, Parity::even, snaps, 0);
  std::vector<double> q60, q120;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    q60.push_back(rows[2 * i].qubit_excitation);
    q120.push_back(rows[2 * i + 1].qubit_excitation);
  }
  std::vector<std::pair<double, double>> pts;
  for (double g : g1) pts.emplace_back(g, 0.5 * g);
  SteadyOptions ns;
  ns.method = SteadyMethod::null_space;
  std::vector<double> qss;
  for (const auto& r : steady_map(base, Parity::even, pts, ns, 0)) qss.push_back(r.qubit_excitation);

  const auto a = most_prominent(interior_maxima(g1, q60));
  const auto b = most_prominent(interior_maxima(g1, q120));
  double steady_prom = 0;
  for (const auto& p : interior_maxima(g1, qss)) steady_prom = std::max(steady_prom, p.prominence);
  const bool inside = a && a->position >= 0.02 && a->position <= 0.10;
  const bool moves = a && b && b->position < a->position;
  const bool absent = steady_prom <= 1e-4;
  return {inside && moves && absent,
          "maximum at " + fmt("%.4f", a ? a->position : NAN) + " (60 T_c), " + fmt("%.4f", b ? b->position : NAN) +
              " (120 T_c); steady-state max prominence " + fmt("%.1e", steady_prom)};
}

// 9
Outcome odd_nonconvergence() {
  const SteadyReport r = steady_state(model(0.8, 0.1, 0, 0.02), Parity::odd);
  const double total = r.mean_photon + r.qubit_excitation;
  return {!r.converged && std::abs(total - 1) <= 1e-3,
          std::string("converged = ") + (r.converged ? "true" : "false") + ", time-averaged total excitation " + fmt("%.6f", total) +
              ", window variance " + fmt("%.2e", r.window_variance)};
}

// 10
Outcome effective_vs_master() {
  const ModelParams base = model(0.8, 0, 0.15, 0.02);
  const auto g1 = linspace(1.2, 2.05, 35);
  std::vector<double> window;
  for (double t = 980; t <= 1000 + 1e-9; t += 0.25) window.push_back(t);
  std::vector<double> n_master(g1.size()), n_eff(g1.size()), v_master(g1.size()), v_eff(g1.size());
  auto stats = [](const std::vector<double>& xs, double& mean, double& var) {
    mean = 0;
    for (double x : xs) mean += x;
    mean /= double(xs.size());
    var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= double(xs.size());
  };
  parallel_for(g1.size(), 0, [&](std::size_t i) {
    ModelParams p = base;
    p.g1 = g1[i];
    const Basis b = Basis::chain(Parity::even);
    const auto m = evolve_master(DensityMatrix::projector(b, p.cutoff, {2, Qubit::g}), p, window);
    const auto e = evolve_effective(StateVector::basis_state(b, p.cutoff, {2, Qubit::g}), p, window, true);
    stats(m.trajectory.mean_photon, n_master[i], v_master[i]);
    stats(e.trajectory.mean_photon, n_eff[i], v_eff[i]);
  });
  double vm = 0, ve = 0;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    vm += v_master[i];
    ve += v_eff[i];
  }
  const auto pm = most_prominent(interior_maxima(g1, n_master));
  const auto pe = most_prominent(interior_maxima(g1, n_eff));
  const double step = g1[1] - g1[0];
  const bool aligned = pm && pe && std::abs(pm->position - pe->position) <= step;
  return {ve >= 10 * vm && aligned,
          "summed window variance effective " + fmt("%.2e", ve) + " vs master " + fmt("%.2e", vm) + "; peaks at " +
              fmt("%.4f", pe ? pe->position : NAN) + " (effective) and " + fmt("%.4f", pm ? pm->position : NAN) + " (master)"};
}

// 11
Outcome initial_state_independence() {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> u(0.3, 1.2);
  double worst = 0;
  bool converged = true;
  std::string pts;
  for (int k = 0; k < 3; ++k) {
    const double g1 = u(rng), g2 = u(rng);
    const ModelParams p = model(0.8, g1, g2, 0.02);
    SteadyOptions a, b;
    a.initial = BareState{0, Qubit::g};
    b.initial = BareState{2, Qubit::g};
    const SteadyReport ra = steady_state(p, Parity::even, a), rb = steady_state(p, Parity::even, b);
    converged = converged && ra.converged && rb.converged;
    worst = std::max({worst, std::abs(ra.mean_photon - rb.mean_photon), std::abs(ra.qubit_excitation - rb.qubit_excitation)});
    pts += "(" + fmt("%.3f", g1) + "," + fmt("%.3f", g2) + ") ";
  }
  return {converged && worst <= 1e-5, "points " + pts + "max difference " + fmt("%.1e", worst) + (converged ? "" : ", not converged")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no runtime requirement
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "analytic-numeric spectral equivalence", 1, spectral_equivalence},
      {2, "exceptional point", 1, exceptional_point},
      {3, "conservation suite", 10, conservation},
      {4, "decoupled decay law", 0, decay_law},
      {5, "doublet dynamics oracle", 5, doublet_oracle},
      {6, "even-sector steady peaks", 600, even_peaks},
      {7, "odd-sector extremum", 300, odd_extremum},
      {8, "quasi-steady local maximum", 900, quasi_steady},
      {9, "odd-sector non-convergence", 0, odd_nonconvergence},
      {10, "effective vs master equation", 0, effective_vs_master},
      {11, "initial-state independence", 0, initial_state_independence},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    const bool pass = o.passed && in_time;
    failures += !pass;
    std::printf("[%s] %2d %s: %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
