#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "rabi/analytic.hpp"
#include "rabi/commands.hpp"

namespace rabi {

namespace {

ModelParams reference(double delta, double g1, double g2, double kappa = 0.02) {
  return {1.0, delta, g1, g2, kappa, FockCutoff{20}};
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Largest distance between the numerical chain spectra and their nearest
// unused analytic partners.
double spectrum_mismatch(const ModelParams& p) {
  double worst = 0;
  for (Parity parity : {Parity::even, Parity::odd}) {
    const auto numeric = complex_spectrum(p, parity).values;
    auto exact = analytic::solvable_limit_spectrum(p, parity);
    if (exact.size() != numeric.size()) return std::numeric_limits<double>::infinity();
    for (cplx e : numeric) {
      auto best = std::min_element(exact.begin(), exact.end(),
                                   [&](cplx a, cplx b) { return std::abs(a - e) < std::abs(b - e); });
      worst = std::max(worst, std::abs(*best - e));
      exact.erase(best);
    }
  }
  return worst;
}

VerifyCheck spectrum_check(std::string name, const ModelParams& p) {
  const double worst = spectrum_mismatch(p);
  return {std::move(name), worst <= 1e-8, "max |E_num - E_exact| = " + num(worst)};
}

VerifyCheck doublet_dynamics() {
  const ModelParams p = reference(1.0, 0.1, 0.0);
  const Basis basis = Basis::chain(Parity::odd);
  const auto grid = uniform_grid(10, 10);
  double eff = 0, master = 0;
  auto oracle = [&](double t_tc) { return analytic::jc_population(2, tc_to_time(t_tc, p.omega), p); };
  (void)evolve_effective(StateVector::basis_state(basis, p.cutoff, {2, Qubit::e}), p, grid, false,
                         [&](double t, const StateVector& psi) { eff = std::max(eff, std::abs(std::norm(psi.amplitudes(3)) - oracle(t))); });
  (void)evolve_master(DensityMatrix::projector(basis, p.cutoff, {2, Qubit::e}), p, grid, {},
                      [&](double t, const DensityMatrix& rho) { master = std::max(master, std::abs(rho.entries()(3, 3).real() - oracle(t))); });
  return {"doublet dynamics", eff <= 1e-8 && master <= 1e-6,
          "effective error " + num(eff) + " master error " + num(master) + " over 10 T_c"};
}

VerifyCheck conservation() {
  const ModelParams p = reference(0.8, 0.1, 0.05);
  const auto grid = uniform_grid(60, 2);
  const auto states = Basis::full().states(p.cutoff);
  double drift = 0, lowest = 0, leak = 0;
  (void)evolve_master(DensityMatrix::projector(Basis::full(), p.cutoff, {2, Qubit::g}), p, grid, {},
                      [&](double, const DensityMatrix& rho) {
                        drift = std::max(drift, std::abs(rho.trace().real() - 1.0));
                        lowest = std::min(lowest, rho.min_eigenvalue());
                        double odd = 0;
                        for (std::size_t k = 0; k < states.size(); ++k)
                          if (parity_of(states[k]) == Parity::odd)
                            odd += std::abs(rho.entries()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
                        leak = std::max(leak, odd);
                      });
  return {"trace and parity conservation", drift <= 1e-8 && lowest >= -1e-8 && leak <= 1e-10,
          "trace drift " + num(drift) + " min eigenvalue " + num(lowest) + " parity leakage " + num(leak)};
}

VerifyCheck exceptional_point() {
  const ModelParams p = reference(1.0, 0.0, 0.0);
  const auto ep = find_exceptional_point(p, 1);
  const double expected = analytic::ep_position(1, p);
  if (!ep) return {"exceptional point", false, "no closure found; analytic g1 = " + num(expected)};
  ModelParams above = p;
  above.g1 = 2 * expected;
  double im_err = 0;
  const auto v = complex_spectrum(above, Parity::even).values;
  const cplx center{1.5, -p.kappa};
  std::vector<cplx> near(v.begin(), v.end());
  std::sort(near.begin(), near.end(), [&](cplx a, cplx b) { return std::abs(a - center) < std::abs(b - center); });
  for (int k = 0; k < 2; ++k) im_err = std::max(im_err, std::abs(near[static_cast<std::size_t>(k)].imag() + p.kappa));
  const double err = std::abs(ep->parameter - expected);
  std::ostringstream os;
  os.precision(10);
  os << "measured g1 = " << ep->parameter << " analytic g1 = " << expected;
  return {"exceptional point", err <= 1e-6 && im_err <= 1e-9, os.str() + " imag error above = " + num(im_err)};
}

VerifyCheck crossing_check(std::string name, const ModelParams& base, Parity parity, SweepAxis axis, double lo,
                           double hi, double expected) {
  SweepSpec sweep{axis, {}, std::nullopt};
  const int points = 61;
  for (int i = 0; i < points; ++i) sweep.values.push_back(lo + (hi - lo) * i / (points - 1));
  CrossingOptions opt;
  opt.lowest_levels = 2;
  const auto events = find_avoided_crossings(sweep_spectrum(base, parity, sweep, false, 1), opt);
  if (events.empty()) return {std::move(name), false, "no avoided crossing found; formula " + num(expected)};
  const auto& first = events.front();
  const double step = (hi - lo) / (points - 1);
  return {std::move(name), first.kind == CrossingKind::avoided && std::abs(first.parameter - expected) <= step,
          "crossing at " + num(first.parameter) + " formula " + num(expected) + " grid step " + num(step)};
}

VerifyCheck truncation(const RunConfig& cfg) {
  const std::string name = "truncation";
  const Parity parity = cfg.parities.front();
  const StateVector psi = initial_state(cfg, parity);
  int top = -1;
  const auto states = psi.basis.states(cfg.params.cutoff);
  for (std::size_t k = 0; k < states.size(); ++k)
    if (std::norm(psi.amplitudes(static_cast<Eigen::Index>(k))) > 1e-12) top = std::max(top, states[k].n);
  const int n_max = cfg.params.cutoff.n_max;
  if (top > n_max - 2)
    return {name, false,
            "initial support reaches n=" + std::to_string(top) + " but n_max=" + std::to_string(n_max) +
                " leaves fewer than two empty levels; raise n_max"};

  const auto grid = uniform_grid(cfg.t_max_tc, 1);
  auto run = [&](int cutoff) {
    RunConfig local = cfg;
    local.params.cutoff = FockCutoff{cutoff};
    const StateVector s = initial_state(local, parity);
    IntegratorOptions o;
    o.max_step = cfg.max_step;
    return evolve_master(DensityMatrix::pure(s.basis, s.amplitudes), local.params, grid, o).trajectory;
  };
  const Trajectory a = run(n_max);
  const Trajectory b = run(2 * n_max);
  double change = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    change = std::max({change, std::abs(a.mean_photon[k] - b.mean_photon[k]), std::abs(a.qubit_excitation[k] - b.qubit_excitation[k])});
  return {name, change < 1e-6,
          "observable change " + num(change) + " when n_max goes " + std::to_string(n_max) + " -> " + std::to_string(2 * n_max)};
}

VerifyCheck guarded(const std::string& name, const std::function<VerifyCheck()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {name, false, std::string("error: ") + e.what()};
  }
}

}  // namespace

std::vector<VerifyCheck> cmd_verify(const RunConfig& config) {
  std::vector<VerifyCheck> checks;
  checks.push_back(guarded("decoupled spectrum", [] { return spectrum_check("decoupled spectrum", reference(0.8, 0, 0)); }));
  checks.push_back(guarded("JC spectrum", [] { return spectrum_check("JC spectrum", reference(0.8, 0.3, 0)); }));
  checks.push_back(guarded("AJC spectrum", [] { return spectrum_check("AJC spectrum", reference(0.8, 0, 0.45)); }));
  checks.push_back(guarded("doublet dynamics", doublet_dynamics));
  checks.push_back(guarded("trace and parity conservation", conservation));
  checks.push_back(guarded("exceptional point", exceptional_point));
  checks.push_back(guarded("even peak position", [] {
    const ModelParams p = reference(0.8, 0, 0.02);
    return crossing_check("even peak position", p, Parity::even, SweepAxis::g1, 1.2, 1.5, analytic::even_peak_position(1, p));
  }));
  checks.push_back(guarded("odd peak position", [] {
    const ModelParams p = reference(0.8, 0.01, 0);
    return crossing_check("odd peak position", p, Parity::odd, SweepAxis::g2, 0.3, 0.6, analytic::odd_peak_position(1, p));
  }));
  checks.push_back(guarded("truncation", [&] { return truncation(config); }));
  return checks;
}

}  // namespace rabi
