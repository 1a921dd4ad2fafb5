#pragma once

// Closed-form results for the solvable limits of H_eff:
//
//  * decoupled (g1 = g2 = 0): bare states, E = n w +/- D/2 - i k n(n-1)
//  * Jaynes-Cummings (g2 = 0): doublets {|n,e>, |n+1,g>}
//  * anti-Jaynes-Cummings (g1 = 0): doublets {|n+1,e>, |n,g>}
//
// Every doublet is a 2x2 block with trace 2[(n+1/2) w - i k n^2]; its
// eigenvalues are (n+1/2) w - i k n^2 +/- Omega/2 with
// Omega = sqrt(A^2 + B^2), A = detuning - 2 i k n, B = 2 g sqrt(n+1).
//
// These functions are the independent oracle for the numerical spectrum and
// the integrators, so they never call into `spectra` or `dynamics`.

#include <optional>
#include <span>
#include <vector>

#include "rabi/model.hpp"

namespace rabi::analytic {

enum class Branch { plus, minus };
enum class DoubletFlavor { jc, ajc };

struct DoubletSolution {
  int n = 0;
  DoubletFlavor flavor = DoubletFlavor::jc;
  /// delta = omega - Delta (JC) or xi = omega + Delta (AJC).
  double detuning = 0.0;
  cplx A;       // detuning - 2 i kappa n
  double B = 0; // 2 g sqrt(n+1)
  cplx Omega;   // principal sqrt(A^2 + B^2), Re >= 0
  cplx E_plus;
  cplx E_minus;
  /// Dressed-state coefficients on (first, second) below; (cos, sin) is the
  /// "+" eigenvector and (-sin, cos) the "-" one.  NaN at an exceptional
  /// point, where the eigenvector is self-orthogonal.
  cplx mix_cos;
  cplx mix_sin;
  /// JC: (|n,e>, |n+1,g>); AJC: (|n+1,e>, |n,g>).
  BareState first;
  BareState second;

  [[nodiscard]] cplx center() const { return 0.5 * (E_plus + E_minus); }
  /// The explicit 2x2 block of H_eff on (first, second).
  [[nodiscard]] Eigen::Matrix2cd block(const ModelParams& params) const;
};

[[nodiscard]] cplx decoupled_eigenvalue(int n, Branch branch, const ModelParams& params);

[[nodiscard]] DoubletSolution jc_doublet(int n, const ModelParams& params);
[[nodiscard]] DoubletSolution ajc_doublet(int n, const ModelParams& params);

/// sqrt(z) on the principal branch, sign-flipped when that keeps it
/// continuous with `previous`.
[[nodiscard]] cplx continued_sqrt(cplx z, cplx previous);

/// Doublet n evaluated along a coupling sweep with the square-root branch
/// kept continuous between neighbouring points.  `couplings` replaces g1
/// (JC) or g2 (AJC).
[[nodiscard]] std::vector<DoubletSolution> doublet_sweep(DoubletFlavor flavor, int n, const ModelParams& params,
                                                         std::span<const double> couplings);

/// Population of |n+1,g> at time t (units 1/omega) starting from |n,e>,
/// |B/Omega|^2 |sin(Omega t/2)|^2 exp(-2 kappa n^2 t).
[[nodiscard]] double jc_population(int n, double t, const ModelParams& params);
/// Population of |n,g> at time t starting from |n+1,e>.
[[nodiscard]] double ajc_population(int n, double t, const ModelParams& params);

/// g1/omega of the m-th even-sector avoided crossing at small g2.
[[nodiscard]] double even_peak_position(int m, const ModelParams& params);
/// g2/omega of the m-th odd-sector avoided crossing at small g1; throws
/// std::domain_error when (2m-1) - Delta/omega < 0.
[[nodiscard]] double odd_peak_position(int m, const ModelParams& params);

/// Resonant JC exceptional point of doublet n, sqrt(kappa^2 n^2 / (n+1)).
[[nodiscard]] double ep_position(int n, const ModelParams& params);

/// At resonance, whether E + i kappa n^2 is purely real for doublet n
/// (passive PT-symmetric phase).
[[nodiscard]] bool pt_symmetric(int n, const ModelParams& params);

/// Every eigenvalue of the chain-restricted H_eff in the JC (g2 = 0) or
/// AJC (g1 = 0) limit, including the unpaired chain-edge states.  Throws
/// std::invalid_argument when both couplings are non-zero.
[[nodiscard]] std::vector<cplx> solvable_limit_spectrum(const ModelParams& params, Parity parity);

}  // namespace rabi::analytic
