#pragma once

// Numerical complex spectrum of the chain-restricted H_eff, level tracking
// along coupling sweeps, avoided-crossing and exceptional-point detection.

#include <optional>
#include <stdexcept>
#include <vector>

#include "rabi/dynamics.hpp"
#include "rabi/model.hpp"

namespace rabi {

class SpectrumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Spectrum {
  std::vector<cplx> values;  // ascending real part, ties by imaginary part
  Matrix vectors;            // unit-norm right eigenvectors, column k <-> values[k]
};

/// Throws SpectrumError (with the parameter point in the message) when the
/// eigensolver fails.
[[nodiscard]] Spectrum complex_spectrum(const ModelParams& params, Parity parity);

enum class SweepAxis { g1, g2 };

struct SweepSpec {
  SweepAxis axis = SweepAxis::g1;
  std::vector<double> values;  // strictly monotone
  /// g1 sweeps only: g2 = lambda * g1 at every point.
  std::optional<double> lambda;

  [[nodiscard]] ModelParams apply(const ModelParams& base, double value) const;
};

struct LevelLabel {
  Parity parity = Parity::even;
  int branch = 0;  // rank by real part at the first sweep point

  friend bool operator==(const LevelLabel&, const LevelLabel&) = default;
};

struct ComplexLevel {
  LevelLabel label;
  std::vector<cplx> values;
  std::vector<Vector> vectors;  // empty unless requested
  /// flagged[k]: overlap with the previous point fell below 0.5.
  std::vector<bool> flagged;
};

struct LevelSet {
  ModelParams base;
  Parity parity = Parity::even;
  SweepSpec sweep;
  std::vector<ComplexLevel> levels;
};

/// Diagonalizes every sweep point (concurrently with `jobs` workers) and
/// links eigenvalues by maximal eigenvector overlap with the previous point.
[[nodiscard]] LevelSet sweep_spectrum(const ModelParams& params, Parity parity, const SweepSpec& sweep,
                                      bool keep_vectors = false, unsigned jobs = 0);

enum class CrossingKind {
  avoided,      // real-part gap has a finite local minimum
  degenerate,   // real parts meet, imaginary parts stay apart
  exceptional,  // real and imaginary parts meet
};

[[nodiscard]] std::string to_string(CrossingKind k);

struct CrossingEvent {
  CrossingKind kind = CrossingKind::avoided;
  double parameter = 0;  // refined g1 or g2
  double gap = 0;        // |Re E_i - Re E_j| at `parameter`
  double im_gap = 0;     // |Im E_i - Im E_j| at `parameter`
  LevelLabel first;
  LevelLabel second;
};

struct CrossingOptions {
  /// A gap minimum must lie at least this far below the lower of its two
  /// neighbouring maxima.
  double prominence = 1e-3;
  /// Ignore minima whose gap exceeds this.
  std::optional<double> max_gap;
  /// Gaps below this count as closed.
  double closure_floor = 1e-6;
  /// Only examine gaps between the lowest `lowest_levels` real parts.
  std::optional<int> lowest_levels;
  /// After the parabolic vertex, minimize the true gap with Brent's method
  /// inside the bracketing grid cell pair.
  bool polish = true;
};

/// Gaps are taken between neighbours in real-part order at each sweep
/// point.  Events are ordered by parameter, then by level rank.
[[nodiscard]] std::vector<CrossingEvent> find_avoided_crossings(const LevelSet& levels,
                                                                const CrossingOptions& options = {});

/// Resonant JC exceptional point of doublet n located by bisection on the
/// sign of Re (E_a - E_b)^2 for the two numerical eigenvalues of that
/// doublet, searching g1 in (0, g1_max].  Requires delta == omega and
/// g2 == 0 (std::invalid_argument otherwise); nullopt for n == 0 or when no
/// sign change exists.
[[nodiscard]] std::optional<CrossingEvent> find_exceptional_point(const ModelParams& params, int n,
                                                                  double g1_max = 1.0, double tolerance = 1e-13);

struct EigenstateWeights {
  std::vector<cplx> energies;  // same order as complex_spectrum
  std::vector<double> weights; // |c_k|^2 normalized to sum 1
  double condition = 0;        // 2-norm condition number of the eigenvector matrix
  bool ill_conditioned = false; // condition > 1e8
};

/// Solves V c = psi0 for the (non-orthogonal) right eigenvectors V.
[[nodiscard]] EigenstateWeights map_initial_state(const StateVector& psi0, const ModelParams& params, Parity parity);

}  // namespace rabi
