#include "rabi/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <unsupported/Eigen/MatrixFunctions>

#include "rabi/analytic.hpp"
#include "rabi/parallel.hpp"

namespace rabi {

namespace {

constexpr cplx I{0.0, 1.0};

void check_grid(std::span<const double> grid) {
  double previous = 0.0;
  for (double t : grid) {
    if (!std::isfinite(t) || t < previous) throw std::invalid_argument("time grid must be non-negative and non-decreasing");
    previous = t;
  }
}

Eigen::VectorXd photon_numbers(Basis basis, FockCutoff cutoff) {
  const auto states = basis.states(cutoff);
  Eigen::VectorXd n(static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) n(static_cast<Eigen::Index>(k)) = states[k].n;
  return n;
}

Eigen::VectorXd excitation_mask(Basis basis, FockCutoff cutoff) {
  const auto states = basis.states(cutoff);
  Eigen::VectorXd e(static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) e(static_cast<Eigen::Index>(k)) = states[k].q == Qubit::e ? 1.0 : 0.0;
  return e;
}

}  // namespace

StateVector StateVector::basis_state(Basis basis, FockCutoff cutoff, BareState s) {
  const auto states = basis.states(cutoff);
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k] == s) {
      Vector v = Vector::Zero(static_cast<Eigen::Index>(states.size()));
      v(static_cast<Eigen::Index>(k)) = 1.0;
      return {basis, std::move(v), true};
    }
  }
  throw std::invalid_argument(to_string(s) + " is not part of basis " + basis.name());
}

Observables observables(const DensityMatrix& rho) {
  const FockCutoff cutoff = rho.cutoff();
  const Eigen::VectorXd pop = rho.entries().diagonal().real();
  Observables o;
  o.mean_photon = pop.dot(photon_numbers(rho.basis(), cutoff));
  o.qubit_excitation = pop.dot(excitation_mask(rho.basis(), cutoff));
  o.trace = pop.sum();
  o.purity = rho.entries().squaredNorm();
  return o;
}

Observables observables(const StateVector& psi, bool renormalize) {
  const FockCutoff cutoff = psi.cutoff();
  const Eigen::VectorXd pop = psi.amplitudes.cwiseAbs2();
  const double norm2 = pop.sum();
  const double scale = renormalize && norm2 > 0 ? 1.0 / norm2 : 1.0;
  Observables o;
  o.mean_photon = scale * pop.dot(photon_numbers(psi.basis, cutoff));
  o.qubit_excitation = scale * pop.dot(excitation_mask(psi.basis, cutoff));
  o.trace = norm2;
  o.purity = renormalize ? 1.0 : norm2 * norm2;
  return o;
}

std::vector<double> uniform_grid(double t_max_tc, int samples_per_tc) {
  if (!(t_max_tc >= 0) || samples_per_tc < 1) throw std::invalid_argument("t_max must be >= 0 and samples_per_tc >= 1");
  const auto count = static_cast<long>(std::llround(t_max_tc * samples_per_tc));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count + 1));
  for (long k = 0; k <= count; ++k) grid.push_back(static_cast<double>(k) / samples_per_tc);
  return grid;
}

void Trajectory::push(double t, const Observables& o) {
  times.push_back(t);
  mean_photon.push_back(o.mean_photon);
  qubit_excitation.push_back(o.qubit_excitation);
  trace.push_back(o.trace);
  purity.push_back(o.purity);
}

double master_step_size(const ModelParams& params, const IntegratorOptions& options) {
  double omega_max = 0.0;
  for (int n = 0; n < params.cutoff.n_max; ++n) {
    omega_max = std::max(omega_max, std::abs(analytic::jc_doublet(n, params).Omega));
    omega_max = std::max(omega_max, std::abs(analytic::ajc_doublet(n, params).Omega));
  }
  double h = options.max_step / params.omega;
  if (omega_max > 0) h = std::min(h, 0.1 / omega_max);
  return h;
}

int highest_occupied_level(const DensityMatrix& rho, double threshold) {
  const auto states = rho.basis().states(rho.cutoff());
  int top = -1;
  for (std::size_t k = 0; k < states.size(); ++k)
    if (std::abs(rho.entries()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k))) > threshold)
      top = std::max(top, states[k].n);
  return top;
}

LindbladPropagator::LindbladPropagator(const ModelParams& params, Basis basis, const IntegratorOptions& options)
    : params_(params),
      basis_(basis),
      step_(master_step_size(params, options)),
      kernels_(options.kernels != nullptr ? options.kernels : &kernels::active()) {
  const auto ops = model_operators(params, basis);
  const Matrix generator = -I * ops->effective_hamiltonian;
  const int n = static_cast<int>(generator.rows());

  for (int off = -(n - 1); off <= n - 1; ++off) {
    bool nonzero = false;
    for (int i = std::max(0, -off); i < std::min(n, n - off) && !nonzero; ++i) nonzero = generator(i, i + off) != cplx{};
    if (!nonzero) continue;
    offsets_.push_back(off);
    for (int i = 0; i < n; ++i) {
      const int j = i + off;
      diagonals_.push_back(j >= 0 && j < n ? generator(i, j) : cplx{});
    }
  }

  const Matrix& a2 = ops->pair_annihilation;
  jump_offset_ = n;
  for (int off = 1; off < n && jump_offset_ == n; ++off)
    for (int i = 0; i + off < n; ++i)
      if (a2(i, i + off) != cplx{}) {
        jump_offset_ = off;
        break;
      }
  if (jump_offset_ < n) {
    const double scale = std::sqrt(2.0 * params_.kappa);
    for (int i = 0; i + jump_offset_ < n; ++i) jump_weights_.push_back(scale * a2(i, i + jump_offset_).real());
  }
  work_.resize(static_cast<std::size_t>(6) * n * n);
}

kernels::BandedView LindbladPropagator::view() const {
  kernels::BandedView v;
  v.dim = basis_.dim(params_.cutoff);
  v.offsets = offsets_;
  v.diagonals = diagonals_;
  v.jump_offset = jump_offset_;
  v.jump_weights = jump_weights_;
  return v;
}

void LindbladPropagator::advance(Matrix& rho, double duration) {
  if (duration <= 0) return;
  const auto steps = static_cast<long>(std::ceil(duration / step_ - 1e-9));
  const double h = duration / static_cast<double>(std::max(1L, steps));
  const kernels::BandedView v = view();
  for (long s = 0; s < std::max(1L, steps); ++s) kernels_->rk4_step(v, h, rho.data(), work_.data());
}

Matrix LindbladPropagator::rhs(const Matrix& rho) {
  Matrix out(rho.rows(), rho.cols());
  kernels_->lindblad_rhs(view(), rho.data(), out.data(), work_.data());
  return out;
}

MasterResult evolve_master(const DensityMatrix& rho0, const ModelParams& params, std::span<const double> t_grid,
                           const IntegratorOptions& options, const DensityObserver& observer) {
  params.validate();
  check_grid(t_grid);
  if (!(rho0.cutoff() == params.cutoff))
    throw std::invalid_argument("initial state cutoff does not match the model cutoff");
  if (!rho0.is_valid()) throw std::invalid_argument("initial density matrix is not a valid state");
  if (options.check_support) {
    const int top = highest_occupied_level(rho0);
    if (top > params.cutoff.n_max - 2)
      throw SolverError("truncation: initial support reaches n=" + std::to_string(top) + " but n_max=" +
                        std::to_string(params.cutoff.n_max) + "; keep at least two empty levels above it");
  }

  LindbladPropagator propagator(params, rho0.basis(), options);
  MasterResult result{{}, rho0, propagator.step()};
  Matrix& rho = result.final_state.entries();
  double t_now = 0.0;
  for (double t_tc : t_grid) {
    const double t = tc_to_time(t_tc, params.omega);
    propagator.advance(rho, t - t_now);
    t_now = t;
    const Observables o = observables(result.final_state);
    if (std::abs(o.trace - 1.0) > options.abort_tolerance)
      throw SolverError("trace drift " + std::to_string(o.trace - 1.0) + " at t/Tc=" + std::to_string(t_tc) +
                        "; reduce the step or raise n_max");
    if (options.check_positivity) {
      const double lowest = result.final_state.min_eigenvalue();
      if (lowest < -options.abort_tolerance)
        throw SolverError("negative eigenvalue " + std::to_string(lowest) + " at t/Tc=" + std::to_string(t_tc) +
                          "; reduce the step");
    }
    result.trajectory.push(t_tc, o);
    if (observer) observer(t_tc, result.final_state);
  }
  return result;
}

EffectiveResult evolve_effective(const StateVector& psi0, const ModelParams& params, std::span<const double> t_grid,
                                 bool renormalize, const VectorObserver& observer) {
  params.validate();
  check_grid(t_grid);
  if (!(psi0.cutoff() == params.cutoff)) throw std::invalid_argument("initial state cutoff does not match the model cutoff");
  const Matrix& heff = model_operators(params, psi0.basis)->effective_hamiltonian;

  // Exact propagators exp(-i H_eff dt), one per distinct sample interval.
  std::map<double, Matrix> propagators;
  EffectiveResult result{{}, psi0};
  result.final_state.normalized = false;
  double t_now = 0.0;
  for (double t_tc : t_grid) {
    const double t = tc_to_time(t_tc, params.omega);
    const double dt = t - t_now;
    if (dt > 0) {
      auto it = propagators.find(dt);
      if (it == propagators.end()) {
        const Matrix generator = (-I * dt) * heff;
        it = propagators.emplace(dt, generator.exp()).first;
      }
      result.final_state.amplitudes = it->second * result.final_state.amplitudes;
    }
    t_now = t;
    result.trajectory.push(t_tc, observables(result.final_state, renormalize));
    if (observer) observer(t_tc, result.final_state);
  }
  return result;
}

BareState canonical_initial_state(Parity parity) {
  return parity == Parity::even ? BareState{2, Qubit::g} : BareState{3, Qubit::g};
}

std::vector<SnapshotRow> transient_snapshot(const ModelParams& params, double lambda, std::span<const double> g1_values,
                                            Parity parity, std::span<const double> t_snaps, unsigned jobs,
                                            const IntegratorOptions& options) {
  std::vector<double> times(t_snaps.begin(), t_snaps.end());
  std::sort(times.begin(), times.end());
  std::vector<std::vector<SnapshotRow>> per_point(g1_values.size());
  parallel_for(g1_values.size(), jobs, [&](std::size_t i) {
    ModelParams p = params;
    p.g1 = g1_values[i];
    p.g2 = lambda * p.g1;
    const Basis basis = Basis::chain(parity);
    const auto rho0 = DensityMatrix::projector(basis, p.cutoff, canonical_initial_state(parity));
    const MasterResult r = evolve_master(rho0, p, times, options);
    for (std::size_t k = 0; k < times.size(); ++k)
      per_point[i].push_back({times[k], p.g1, p.g2, r.trajectory.mean_photon[k], r.trajectory.qubit_excitation[k]});
  });
  std::vector<SnapshotRow> rows;
  for (auto& block : per_point) rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

}  // namespace rabi
