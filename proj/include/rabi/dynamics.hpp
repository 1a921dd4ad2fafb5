#pragma once

// Time evolution under the Lindblad master equation (fixed-step RK4 on the
// banded generator) and under the non-Hermitian effective Hamiltonian
// (exact propagator per sample interval), plus steady states per parity
// sector.
//
// Times exposed to callers are in units of T_c = pi/omega; the integrators
// work internally in units of 1/omega.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rabi/kernels.hpp"
#include "rabi/model.hpp"

namespace rabi {

/// Integrator aborted: trace drift, negativity, or support too close to the cutoff.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StateVector {
  Basis basis;
  Vector amplitudes;
  bool normalized = true;

  static StateVector basis_state(Basis basis, FockCutoff cutoff, BareState s);
  [[nodiscard]] double norm() const { return amplitudes.norm(); }
  [[nodiscard]] FockCutoff cutoff() const { return cutoff_for_dim(basis, static_cast<int>(amplitudes.size())); }
};

struct Observables {
  double mean_photon = 0;
  double qubit_excitation = 0;  // (<sigma_z> + 1) / 2
  double trace = 0;             // Tr rho, or <psi|psi> for vectors
  double purity = 0;            // Tr rho^2
};

[[nodiscard]] Observables observables(const DensityMatrix& rho);
/// With `renormalize`, expectation values are divided by <psi|psi>.
[[nodiscard]] Observables observables(const StateVector& psi, bool renormalize = true);

[[nodiscard]] inline double tc_to_time(double t_over_tc, double omega) { return t_over_tc * 3.14159265358979323846 / omega; }

/// t_k = k / samples_per_tc for k = 0 .. t_max * samples_per_tc, in units of T_c.
[[nodiscard]] std::vector<double> uniform_grid(double t_max_tc, int samples_per_tc);

struct Trajectory {
  std::vector<double> times;  // units of T_c
  std::vector<double> mean_photon;
  std::vector<double> qubit_excitation;
  std::vector<double> trace;
  std::vector<double> purity;

  void push(double t, const Observables& o);
  [[nodiscard]] std::size_t size() const { return times.size(); }
};

struct IntegratorOptions {
  /// Upper bound on the RK4 step in units of 1/omega (further limited by
  /// 0.1 / Omega_max).
  double max_step = 0.01;
  /// Trace drift or negativity beyond this aborts.
  double abort_tolerance = 1e-6;
  /// Check the smallest eigenvalue of rho at every sample.
  bool check_positivity = true;
  /// Reject initial states with support within two levels of n_max.
  bool check_support = true;
  const kernels::KernelTable* kernels = nullptr;  // nullptr: kernels::active()
};

/// Step size actually used: min(max_step, 0.1 / Omega_max) where Omega_max
/// is the largest |Omega_n| over the JC and AJC doublets inside the cutoff.
[[nodiscard]] double master_step_size(const ModelParams& params, const IntegratorOptions& options = {});

/// Highest photon number carrying population above `threshold`.
[[nodiscard]] int highest_occupied_level(const DensityMatrix& rho, double threshold = 1e-12);

using DensityObserver = std::function<void(double t_over_tc, const DensityMatrix&)>;
using VectorObserver = std::function<void(double t_over_tc, const StateVector&)>;

struct MasterResult {
  Trajectory trajectory;
  DensityMatrix final_state;
  double step = 0;  // units of 1/omega
};

/// Owns the banded generator of the Lindblad equation for one (params, basis).
class LindbladPropagator {
 public:
  LindbladPropagator(const ModelParams& params, Basis basis, const IntegratorOptions& options = {});

  [[nodiscard]] double step() const { return step_; }
  [[nodiscard]] kernels::BandedView view() const;
  [[nodiscard]] const kernels::KernelTable& kernels() const { return *kernels_; }
  /// Advances rho by `duration` (units of 1/omega) with equal steps <= step().
  void advance(Matrix& rho, double duration);
  /// Right-hand side via the kernel path (Hermitian rho only).
  [[nodiscard]] Matrix rhs(const Matrix& rho);

 private:
  ModelParams params_;
  Basis basis_;
  double step_ = 0;
  const kernels::KernelTable* kernels_;
  std::vector<int> offsets_;
  std::vector<kernels::cplx> diagonals_;
  int jump_offset_ = 0;
  std::vector<double> jump_weights_;
  std::vector<kernels::cplx> work_;
};

/// Integrates the master equation, sampling at t_grid (units of T_c,
/// non-decreasing, starting at or after 0).  Throws SolverError on trace
/// drift or negativity beyond options.abort_tolerance, or when rho0 has
/// support within two levels of n_max.
[[nodiscard]] MasterResult evolve_master(const DensityMatrix& rho0, const ModelParams& params,
                                         std::span<const double> t_grid, const IntegratorOptions& options = {},
                                         const DensityObserver& observer = {});

struct EffectiveResult {
  Trajectory trajectory;  // `trace` holds <psi|psi>
  StateVector final_state;
};

/// i d psi/dt = H_eff psi.
[[nodiscard]] EffectiveResult evolve_effective(const StateVector& psi0, const ModelParams& params,
                                               std::span<const double> t_grid, bool renormalize,
                                               const VectorObserver& observer = {});

/// |2,g> for the even sector, |3,g> for the odd one.
[[nodiscard]] BareState canonical_initial_state(Parity parity);

struct SnapshotRow {
  double t_over_tc = 0;
  double g1 = 0;
  double g2 = 0;
  double mean_photon = 0;
  double qubit_excitation = 0;
};

/// Master-equation observables at each t_snaps time for every g1 (with
/// g2 = lambda * g1), from the canonical initial state of `parity`.  Rows are
/// ordered by g1, then by snapshot time.
[[nodiscard]] std::vector<SnapshotRow> transient_snapshot(const ModelParams& params, double lambda,
                                                          std::span<const double> g1_values, Parity parity,
                                                          std::span<const double> t_snaps, unsigned jobs = 0,
                                                          const IntegratorOptions& options = {});

// ---------------------------------------------------------------------------
// Steady states

enum class SteadyMethod { long_time, null_space, automatic };

[[nodiscard]] std::string to_string(SteadyMethod m);

struct SteadyOptions {
  SteadyMethod method = SteadyMethod::long_time;
  /// long_time: converged when every observable varies less than this over
  /// the last window.
  double tolerance = 1e-6;
  double window_tc = 20;
  double cap_tc = 1000;
  int samples_per_tc = 4;
  /// Frobenius norm of the Liouvillian rhs required for `converged`.
  double residual_tolerance = 1e-6;
  /// null_space: pivots of the full-pivot LU of the Liouvillian below this
  /// fraction of the largest one count towards the kernel.
  double degeneracy_threshold = 1e-12;
  /// Overrides the canonical initial state for long_time.
  std::optional<BareState> initial;
  IntegratorOptions integrator{};
};

struct SteadyReport {
  bool converged = false;
  bool degenerate = false;  // null_space kernel dimension > 1
  DensityMatrix rho_ss{Basis::chain(Parity::even), Matrix::Identity(1, 1)};
  double mean_photon = 0;
  double qubit_excitation = 0;
  double residual = 0;
  /// Largest variance of mean_photon / qubit_excitation over the final window.
  double window_variance = 0;
  double t_final_tc = 0;
  SteadyMethod method_used = SteadyMethod::long_time;
  std::string diagnostic;
};

/// Column-stacking superoperator: vec(d rho/dt) = L vec(rho).
[[nodiscard]] Matrix liouvillian_superoperator(const ModelParams& params, Basis basis);

[[nodiscard]] SteadyReport steady_state(const ModelParams& params, Parity parity, const SteadyOptions& options = {});

struct SteadyRow {
  double g1 = 0;
  double g2 = 0;
  Parity parity = Parity::even;
  double mean_photon = 0;
  double qubit_excitation = 0;
  bool converged = false;
  double residual = 0;
};

/// steady_state at every (g1, g2) pair, rows in input order.
[[nodiscard]] std::vector<SteadyRow> steady_map(const ModelParams& params, Parity parity,
                                                std::span<const std::pair<double, double>> couplings,
                                                const SteadyOptions& options = {}, unsigned jobs = 0);

}  // namespace rabi
