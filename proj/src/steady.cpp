#include <algorithm>
#include <cmath>
#include <vector>

#include "rabi/dynamics.hpp"
#include "rabi/parallel.hpp"

namespace rabi {

namespace {

constexpr cplx I{0.0, 1.0};

// kron(A, B) for square A, B.
Matrix kron(const Matrix& a, const Matrix& b) {
  const Eigen::Index n = a.rows(), m = b.rows();
  Matrix out(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.block(i * m, j * m, m, m) = a(i, j) * b;
  return out;
}

struct WindowStats {
  double mean = 0;
  double variance = 0;
  double range = 0;
};

WindowStats stats(const std::vector<double>& xs) {
  WindowStats s;
  if (xs.empty()) return s;
  double lo = xs.front(), hi = xs.front();
  for (double x : xs) {
    s.mean += x;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  s.mean /= static_cast<double>(xs.size());
  for (double x : xs) s.variance += (x - s.mean) * (x - s.mean);
  s.variance /= static_cast<double>(xs.size());
  s.range = hi - lo;
  return s;
}

double residual_norm(const ModelParams& params, const DensityMatrix& rho) {
  const auto ops = model_operators(params, rho.basis());
  return liouvillian_rhs(params, OperatorMatrix{rho.basis(), ops->hamiltonian}, rho).norm();
}

void fill_observables(SteadyReport& report) {
  const Observables o = observables(report.rho_ss);
  report.mean_photon = o.mean_photon;
  report.qubit_excitation = o.qubit_excitation;
}

SteadyReport solve_null_space(const ModelParams& params, Parity parity, const SteadyOptions& options) {
  const Basis basis = Basis::chain(parity);
  const int n = basis.dim(params.cutoff);
  Matrix system = liouvillian_superoperator(params, basis);
  Eigen::FullPivLU<Matrix> kernel(system);
  kernel.setThreshold(options.degeneracy_threshold);
  const auto kernel_dim = kernel.dimensionOfKernel();
  // The diagonal rows sum to zero (trace preservation), so row (0,0) is
  // redundant and can carry the normalization Tr rho = 1.
  system.row(0).setZero();
  for (int i = 0; i < n; ++i) system(0, i + i * n) = 1.0;
  Vector rhs = Vector::Zero(static_cast<Eigen::Index>(n) * n);
  rhs(0) = 1.0;

  SteadyReport report;
  report.method_used = SteadyMethod::null_space;
  if (kernel_dim != 1) {
    report.degenerate = true;
    report.converged = false;
    report.diagnostic = "steady-state kernel has dimension " + std::to_string(kernel_dim);
    report.rho_ss = DensityMatrix::projector(basis, params.cutoff, canonical_initial_state(parity));
    report.mean_photon = report.qubit_excitation = std::nan("");
    report.residual = std::nan("");
    return report;
  }
  const Vector x = Eigen::PartialPivLU<Matrix>(system).solve(rhs);
  Matrix rho = Eigen::Map<const Matrix>(x.data(), n, n);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  report.rho_ss = DensityMatrix(basis, std::move(rho));
  report.residual = residual_norm(params, report.rho_ss);
  report.converged = report.residual <= options.residual_tolerance;
  if (!report.converged) report.diagnostic = "null-space residual above tolerance";
  fill_observables(report);
  return report;
}

SteadyReport solve_long_time(const ModelParams& params, Parity parity, const SteadyOptions& options) {
  const Basis basis = Basis::chain(parity);
  const BareState start = options.initial.value_or(canonical_initial_state(parity));
  if (parity_of(start) != parity)
    throw std::invalid_argument(to_string(start) + " does not belong to the " + to_string(parity) + " chain");
  DensityMatrix rho = DensityMatrix::projector(basis, params.cutoff, start);
  if (options.integrator.check_support && start.n > params.cutoff.n_max - 2)
    throw SolverError("truncation: initial state " + to_string(start) + " is within two levels of n_max");
  if (!(options.window_tc > 0) || options.samples_per_tc < 1) throw std::invalid_argument("bad steady-state window");

  LindbladPropagator propagator(params, basis, options.integrator);
  const double dt_tc = 1.0 / options.samples_per_tc;
  const auto per_window = static_cast<int>(std::llround(options.window_tc * options.samples_per_tc));
  const auto max_windows = static_cast<int>(std::ceil(options.cap_tc / options.window_tc - 1e-9));
  const double dt = tc_to_time(dt_tc, params.omega);

  SteadyReport report;
  report.method_used = SteadyMethod::long_time;
  std::vector<double> photon, qubit;
  WindowStats sp, sq;
  double t_tc = 0;
  for (int w = 0; w < std::max(1, max_windows); ++w) {
    photon.clear();
    qubit.clear();
    for (int k = 0; k < per_window; ++k) {
      propagator.advance(rho.entries(), dt);
      t_tc += dt_tc;
      const Observables o = observables(rho);
      if (std::abs(o.trace - 1.0) > options.integrator.abort_tolerance)
        throw SolverError("trace drift " + std::to_string(o.trace - 1.0) + " during steady-state evolution");
      photon.push_back(o.mean_photon);
      qubit.push_back(o.qubit_excitation);
    }
    sp = stats(photon);
    sq = stats(qubit);
    if (sp.range < options.tolerance && sq.range < options.tolerance) {
      const double residual = propagator.rhs(rho.entries()).norm();
      if (residual <= options.residual_tolerance) {
        report.converged = true;
        break;
      }
    }
  }
  report.t_final_tc = t_tc;
  report.window_variance = std::max(sp.variance, sq.variance);
  report.rho_ss = rho;
  report.residual = residual_norm(params, rho);
  if (report.converged) {
    fill_observables(report);
  } else {
    report.mean_photon = sp.mean;
    report.qubit_excitation = sq.mean;
    report.diagnostic = "no equilibrium within " + std::to_string(options.cap_tc) + " T_c; window averages reported";
  }
  return report;
}

}  // namespace

std::string to_string(SteadyMethod m) {
  switch (m) {
    case SteadyMethod::long_time: return "long_time";
    case SteadyMethod::null_space: return "null_space";
    case SteadyMethod::automatic: return "auto";
  }
  return "?";
}

Matrix liouvillian_superoperator(const ModelParams& params, Basis basis) {
  const auto ops = model_operators(params, basis);
  const Eigen::Index n = ops->hamiltonian.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix& h = ops->hamiltonian;
  const Matrix& a2 = ops->pair_annihilation;
  const Matrix& nn = ops->pair_number;
  // vec(A X B) = (B^T kron A) vec(X)
  Matrix l = -I * (kron(id, h) - kron(h.transpose(), id));
  if (params.kappa != 0.0) {
    l += 2.0 * params.kappa * kron(a2.conjugate(), a2);
    l -= params.kappa * (kron(id, nn) + kron(nn.transpose(), id));
  }
  return l;
}

SteadyReport steady_state(const ModelParams& params, Parity parity, const SteadyOptions& options) {
  params.validate();
  switch (options.method) {
    case SteadyMethod::long_time: return solve_long_time(params, parity, options);
    case SteadyMethod::null_space: return solve_null_space(params, parity, options);
    case SteadyMethod::automatic: {
      SteadyReport r = solve_null_space(params, parity, options);
      if (r.converged) return r;
      SteadyReport fallback = solve_long_time(params, parity, options);
      fallback.diagnostic = r.diagnostic + "; fell back to long_time" +
                            (fallback.diagnostic.empty() ? "" : ": " + fallback.diagnostic);
      return fallback;
    }
  }
  throw std::invalid_argument("unknown steady-state method");
}

std::vector<SteadyRow> steady_map(const ModelParams& params, Parity parity,
                                  std::span<const std::pair<double, double>> couplings, const SteadyOptions& options,
                                  unsigned jobs) {
  std::vector<SteadyRow> rows(couplings.size());
  parallel_for(couplings.size(), jobs, [&](std::size_t i) {
    ModelParams p = params;
    p.g1 = couplings[i].first;
    p.g2 = couplings[i].second;
    const SteadyReport r = steady_state(p, parity, options);
    rows[i] = {p.g1, p.g2, parity, r.mean_photon, r.qubit_excitation, r.converged, r.residual};
  });
  return rows;
}

}  // namespace rabi
