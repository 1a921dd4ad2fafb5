#pragma once

// Truncated photon-qubit Hilbert space: ladder and qubit operators, the
// combined parity P = -sigma_z exp(i pi a^dag a) and its two chains.
//
// Full-space tensor order is |n> (x) |q> with index 2n + q, where q = 0 for
// the ground state |g> and q = 1 for the excited state |e>.  A parity chain
// is indexed by photon number: chain position k holds the bare state with
// k photons.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rabi {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct FockCutoff {
  int n_max = 20;

  FockCutoff() = default;
  explicit FockCutoff(int n);

  [[nodiscard]] int levels() const { return n_max + 1; }
  friend bool operator==(const FockCutoff&, const FockCutoff&) = default;
};

enum class Qubit { g = 0, e = 1 };

enum class Parity : int { even = 1, odd = -1 };

[[nodiscard]] constexpr int sign(Parity p) { return static_cast<int>(p); }
[[nodiscard]] constexpr Parity opposite(Parity p) {
  return p == Parity::even ? Parity::odd : Parity::even;
}

struct BareState {
  int n = 0;
  Qubit q = Qubit::g;

  friend bool operator==(const BareState&, const BareState&) = default;
};

/// "|n,g>" / "|n,e>"
[[nodiscard]] std::string to_string(BareState s);
/// Accepts "|2,g>", "2,g", "2g" (whitespace ignored).  Returns nullopt on malformed input.
[[nodiscard]] std::optional<BareState> parse_bare_state(std::string_view text);
[[nodiscard]] std::string to_string(Parity p);

[[nodiscard]] Parity parity_of(BareState s);

struct ParityChain {
  Parity parity = Parity::even;
  std::vector<BareState> states;

  [[nodiscard]] std::size_t size() const { return states.size(); }
  [[nodiscard]] std::optional<std::size_t> index_of(BareState s) const;
};

[[nodiscard]] ParityChain build_parity_chain(Parity parity, FockCutoff cutoff);

enum class BasisKind { chain, full };

/// Which index space an operator or state lives on.
struct Basis {
  BasisKind kind = BasisKind::chain;
  Parity parity = Parity::even;  // meaningful for chain bases only

  static Basis chain(Parity p) { return {BasisKind::chain, p}; }
  static Basis full() { return {BasisKind::full, Parity::even}; }

  [[nodiscard]] int dim(FockCutoff cutoff) const;
  [[nodiscard]] std::vector<BareState> states(FockCutoff cutoff) const;
  [[nodiscard]] std::string name() const;

  friend bool operator==(const Basis& a, const Basis& b) {
    return a.kind == b.kind && (a.kind == BasisKind::full || a.parity == b.parity);
  }
};

/// Recovers the cutoff from a matrix dimension on the given basis.
[[nodiscard]] FockCutoff cutoff_for_dim(Basis basis, int dim);

struct OperatorMatrix {
  Basis basis;
  Matrix entries;

  [[nodiscard]] int dim() const { return static_cast<int>(entries.rows()); }
};

/// Photon-only annihilation operator on |0>..|n_max>.
[[nodiscard]] Matrix build_annihilation(FockCutoff cutoff);

/// Qubit operators on (|g>, |e>).
[[nodiscard]] Eigen::Matrix2cd sigma_plus();
[[nodiscard]] Eigen::Matrix2cd sigma_minus();
[[nodiscard]] Eigen::Matrix2cd sigma_z();

/// Kronecker lifts into the full tensor-product space.
[[nodiscard]] Matrix lift_photon(const Matrix& photon_op);
[[nodiscard]] Matrix lift_qubit(const Eigen::Matrix2cd& qubit_op, FockCutoff cutoff);

/// Full-space operator represented on `basis` (sub-block selection for a chain).
[[nodiscard]] OperatorMatrix represent(const Matrix& full_op, Basis basis, FockCutoff cutoff);

[[nodiscard]] int full_index(BareState s);

/// Indexing of the full space as the disjoint union of the two chains.
struct BasisMap {
  FockCutoff cutoff;
  ParityChain even;
  ParityChain odd;
  /// chain_order[k] = full index of the k-th state in chain order
  /// (even chain first, then odd chain).
  std::vector<int> chain_order;
  /// full_to_chain[full index] = position in chain order.
  std::vector<int> full_to_chain;

  [[nodiscard]] int full_dim() const { return static_cast<int>(chain_order.size()); }
  [[nodiscard]] Parity sector(int full_idx) const;
  /// Position of the full-space state inside its own chain.
  [[nodiscard]] int chain_position(int full_idx) const;
  [[nodiscard]] const ParityChain& chain(Parity p) const { return p == Parity::even ? even : odd; }
};

[[nodiscard]] BasisMap embed_full(FockCutoff cutoff);

}  // namespace rabi
