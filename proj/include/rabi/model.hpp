#pragma once

// Anisotropic Rabi Hamiltonian with two-photon relaxation:
//
//   H     = omega a^dag a + (delta/2) sigma_z
//         + g1 (a sigma_+ + a^dag sigma_-) + g2 (a^dag sigma_+ + a sigma_-)
//   H_eff = H - i kappa (a^dag)^2 a^2
//   d rho/dt = -i[H, rho] + 2 kappa a^2 rho (a^dag)^2 - kappa {(a^dag)^2 a^2, rho}
//
// All frequencies and rates are in the same units; omega sets the scale.

#include <memory>
#include <optional>
#include <stdexcept>

#include "rabi/hilbert.hpp"

namespace rabi {

struct ModelParams {
  double omega = 1.0;
  double delta = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double kappa = 0.0;
  FockCutoff cutoff{};

  /// Throws std::invalid_argument on omega <= 0, negative g1/g2/kappa,
  /// non-finite values or n_max < 3.
  void validate() const;
  /// g2/g1; nullopt when g1 == 0.
  [[nodiscard]] std::optional<double> lambda() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline constexpr int kMinimumModelCutoff = 3;

class DensityMatrix {
 public:
  DensityMatrix(Basis basis, Matrix entries);

  static DensityMatrix projector(Basis basis, FockCutoff cutoff, BareState s);
  static DensityMatrix pure(Basis basis, const Vector& amplitudes);

  [[nodiscard]] const Basis& basis() const { return basis_; }
  [[nodiscard]] const Matrix& entries() const { return entries_; }
  [[nodiscard]] Matrix& entries() { return entries_; }
  [[nodiscard]] int dim() const { return static_cast<int>(entries_.rows()); }
  [[nodiscard]] FockCutoff cutoff() const { return cutoff_for_dim(basis_, dim()); }

  [[nodiscard]] cplx trace() const { return entries_.trace(); }
  [[nodiscard]] double hermiticity_error() const;
  [[nodiscard]] double min_eigenvalue() const;
  /// Hermitian within 1e-10, trace within 1e-8 of one, eigenvalues >= -1e-8.
  [[nodiscard]] bool is_valid() const;

 private:
  Basis basis_;
  Matrix entries_;
};

/// Every operator the dynamics needs on one basis.  Immutable once built.
struct ModelOperators {
  ModelParams params;
  Basis basis;
  Matrix hamiltonian;
  Matrix effective_hamiltonian;
  Matrix pair_annihilation;  // a^2
  Matrix pair_number;        // (a^dag)^2 a^2
  Eigen::VectorXd photon_number;    // diagonal of a^dag a
  Eigen::VectorXd qubit_excited;    // diagonal of |e><e|
};

/// Cached per (params, basis); safe to call from several threads.
[[nodiscard]] std::shared_ptr<const ModelOperators> model_operators(const ModelParams& params, Basis basis);

[[nodiscard]] OperatorMatrix build_hamiltonian(const ModelParams& params, Basis basis);
[[nodiscard]] OperatorMatrix build_effective_hamiltonian(const ModelParams& params, Basis basis);
[[nodiscard]] OperatorMatrix build_pair_annihilation(FockCutoff cutoff, Basis basis);

/// D[a^2] rho = 2 kappa a^2 rho (a^dag)^2 - kappa {(a^dag)^2 a^2, rho}.
[[nodiscard]] Matrix apply_dissipator(const ModelParams& params, const DensityMatrix& rho);

/// -i[H, rho] + D[a^2] rho.  Throws std::invalid_argument when H and rho disagree
/// on basis or dimension.
[[nodiscard]] Matrix liouvillian_rhs(const ModelParams& params, const OperatorMatrix& hamiltonian,
                                     const DensityMatrix& rho);

struct JumpSplit {
  Matrix effective;  // -i (H_eff rho - rho H_eff^dag)
  Matrix jump;       // 2 kappa a^2 rho (a^dag)^2
};

[[nodiscard]] JumpSplit split_jump(const ModelParams& params, const DensityMatrix& rho);

}  // namespace rabi
