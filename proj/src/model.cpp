#include "rabi/model.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace rabi {

namespace {

constexpr cplx I{0.0, 1.0};

bool finite(double x) { return std::isfinite(x); }

struct FullOperators {
  Matrix a;        // a (x) 1
  Matrix sp;       // 1 (x) sigma_+
  Matrix sm;       // 1 (x) sigma_-
  Matrix sz;
  Matrix number;
};

FullOperators full_operators(FockCutoff cutoff) {
  FullOperators ops;
  const Matrix photon_a = build_annihilation(cutoff);
  ops.a = lift_photon(photon_a);
  ops.sp = lift_qubit(sigma_plus(), cutoff);
  ops.sm = lift_qubit(sigma_minus(), cutoff);
  ops.sz = lift_qubit(sigma_z(), cutoff);
  ops.number = lift_photon(photon_a.adjoint() * photon_a);
  return ops;
}

Matrix full_hamiltonian(const ModelParams& p) {
  const FullOperators o = full_operators(p.cutoff);
  const Matrix ad = o.a.adjoint();
  Matrix h = p.omega * o.number + 0.5 * p.delta * o.sz;
  h += p.g1 * (o.a * o.sp + ad * o.sm);
  h += p.g2 * (ad * o.sp + o.a * o.sm);
  return h;
}

Matrix full_pair_annihilation(FockCutoff cutoff) {
  const Matrix a = lift_photon(build_annihilation(cutoff));
  return a * a;
}

using CacheKey = std::tuple<double, double, double, double, double, int, int, int>;

CacheKey key_of(const ModelParams& p, Basis b) {
  return {p.omega, p.delta, p.g1, p.g2, p.kappa, p.cutoff.n_max, static_cast<int>(b.kind),
          b.kind == BasisKind::chain ? sign(b.parity) : 0};
}

void require_same_space(const Basis& a, int dim_a, const Basis& b, int dim_b, const char* what) {
  if (!(a == b) || dim_a != dim_b)
    throw std::invalid_argument(std::string(what) + ": basis mismatch (" + a.name() + " dim " + std::to_string(dim_a) +
                                " vs " + b.name() + " dim " + std::to_string(dim_b) + ")");
}

}  // namespace

void ModelParams::validate() const {
  if (!finite(omega) || !finite(delta) || !finite(g1) || !finite(g2) || !finite(kappa))
    throw std::invalid_argument("model parameters must be finite");
  if (omega <= 0) throw std::invalid_argument("omega must be positive");
  if (kappa < 0) throw std::invalid_argument("kappa must be non-negative");
  if (g1 < 0 || g2 < 0) throw std::invalid_argument("coupling strengths must be non-negative");
  if (cutoff.n_max < kMinimumModelCutoff)
    throw std::invalid_argument("n_max must be at least " + std::to_string(kMinimumModelCutoff));
}

std::optional<double> ModelParams::lambda() const {
  if (g1 == 0.0) return std::nullopt;
  return g2 / g1;
}

DensityMatrix::DensityMatrix(Basis basis, Matrix entries) : basis_(basis), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw std::invalid_argument("density matrix must be square");
  (void)cutoff_for_dim(basis_, dim());
}

DensityMatrix DensityMatrix::projector(Basis basis, FockCutoff cutoff, BareState s) {
  const auto states = basis.states(cutoff);
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k] == s) {
      Matrix m = Matrix::Zero(static_cast<Eigen::Index>(states.size()), static_cast<Eigen::Index>(states.size()));
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
      return {basis, std::move(m)};
    }
  }
  throw std::invalid_argument(to_string(s) + " is not part of basis " + basis.name() + " at n_max=" +
                              std::to_string(cutoff.n_max));
}

DensityMatrix DensityMatrix::pure(Basis basis, const Vector& amplitudes) {
  return {basis, amplitudes * amplitudes.adjoint()};
}

double DensityMatrix::hermiticity_error() const { return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_valid() const {
  return hermiticity_error() <= 1e-10 && std::abs(trace() - 1.0) <= 1e-8 && min_eigenvalue() >= -1e-8;
}

std::shared_ptr<const ModelOperators> model_operators(const ModelParams& params, Basis basis) {
  static std::mutex mutex;
  static std::map<CacheKey, std::shared_ptr<const ModelOperators>> cache;
  constexpr std::size_t kMaxEntries = 512;

  const CacheKey key = key_of(params, basis);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  auto ops = std::make_shared<ModelOperators>();
  ops->params = params;
  ops->basis = basis;
  ops->hamiltonian = represent(full_hamiltonian(params), basis, params.cutoff).entries;
  ops->pair_annihilation = represent(full_pair_annihilation(params.cutoff), basis, params.cutoff).entries;
  ops->pair_number = ops->pair_annihilation.adjoint() * ops->pair_annihilation;
  ops->effective_hamiltonian = ops->hamiltonian - I * params.kappa * ops->pair_number;
  const auto states = basis.states(params.cutoff);
  ops->photon_number.resize(static_cast<Eigen::Index>(states.size()));
  ops->qubit_excited.resize(static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) {
    ops->photon_number(static_cast<Eigen::Index>(k)) = states[k].n;
    ops->qubit_excited(static_cast<Eigen::Index>(k)) = states[k].q == Qubit::e ? 1.0 : 0.0;
  }

  std::lock_guard lock(mutex);
  if (cache.size() >= kMaxEntries) cache.clear();
  return cache.emplace(key, std::move(ops)).first->second;
}

OperatorMatrix build_hamiltonian(const ModelParams& params, Basis basis) {
  return {basis, model_operators(params, basis)->hamiltonian};
}

OperatorMatrix build_effective_hamiltonian(const ModelParams& params, Basis basis) {
  return {basis, model_operators(params, basis)->effective_hamiltonian};
}

OperatorMatrix build_pair_annihilation(FockCutoff cutoff, Basis basis) {
  return represent(full_pair_annihilation(cutoff), basis, cutoff);
}

Matrix apply_dissipator(const ModelParams& params, const DensityMatrix& rho) {
  ModelParams p = params;
  p.cutoff = rho.cutoff();
  const Matrix a2 = build_pair_annihilation(p.cutoff, rho.basis()).entries;
  const Matrix n2 = a2.adjoint() * a2;
  const Matrix& r = rho.entries();
  return 2.0 * params.kappa * a2 * r * a2.adjoint() - params.kappa * (n2 * r + r * n2);
}

Matrix liouvillian_rhs(const ModelParams& params, const OperatorMatrix& hamiltonian, const DensityMatrix& rho) {
  require_same_space(hamiltonian.basis, hamiltonian.dim(), rho.basis(), rho.dim(), "liouvillian_rhs");
  const Matrix& h = hamiltonian.entries;
  const Matrix& r = rho.entries();
  return -I * (h * r - r * h) + apply_dissipator(params, rho);
}

JumpSplit split_jump(const ModelParams& params, const DensityMatrix& rho) {
  ModelParams p = params;
  p.cutoff = rho.cutoff();
  const auto ops = model_operators(p, rho.basis());
  const Matrix& heff = ops->effective_hamiltonian;
  const Matrix& r = rho.entries();
  JumpSplit out;
  out.effective = -I * (heff * r - r * heff.adjoint());
  out.jump = 2.0 * params.kappa * ops->pair_annihilation * r * ops->pair_annihilation.adjoint();
  return out;
}

}  // namespace rabi
