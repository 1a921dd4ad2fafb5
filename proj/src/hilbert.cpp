#include "rabi/hilbert.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace rabi {

FockCutoff::FockCutoff(int n) : n_max(n) {
  if (n < 0) throw std::invalid_argument("Fock cutoff must be non-negative, got " + std::to_string(n));
}

std::string to_string(BareState s) {
  return "|" + std::to_string(s.n) + "," + (s.q == Qubit::e ? "e" : "g") + ">";
}

std::string to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

std::optional<BareState> parse_bare_state(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '|' && c != '>' && c != ',') compact.push_back(c);
  }
  if (compact.size() < 2) return std::nullopt;
  const char label = static_cast<char>(std::tolower(static_cast<unsigned char>(compact.back())));
  if (label != 'g' && label != 'e') return std::nullopt;
  compact.pop_back();
  int n = 0;
  for (char c : compact) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    n = n * 10 + (c - '0');
    if (n > 1000000) return std::nullopt;
  }
  return BareState{n, label == 'e' ? Qubit::e : Qubit::g};
}

Parity parity_of(BareState s) {
  // P = -sigma_z exp(i pi n): -(+1) for |e>, -(-1) for |g>, times (-1)^n.
  const int excitation = s.q == Qubit::e ? 1 : 0;
  return (s.n + excitation) % 2 == 0 ? Parity::even : Parity::odd;
}

std::optional<std::size_t> ParityChain::index_of(BareState s) const {
  if (s.n < 0 || static_cast<std::size_t>(s.n) >= states.size()) return std::nullopt;
  if (!(states[static_cast<std::size_t>(s.n)] == s)) return std::nullopt;
  return static_cast<std::size_t>(s.n);
}

ParityChain build_parity_chain(Parity parity, FockCutoff cutoff) {
  ParityChain chain{parity, {}};
  chain.states.reserve(static_cast<std::size_t>(cutoff.levels()));
  for (int n = 0; n <= cutoff.n_max; ++n) {
    // Qubit label alternates; even chain starts at |0,g>, odd at |0,e>.
    const bool excited = (n % 2 == 1) == (parity == Parity::even);
    chain.states.push_back({n, excited ? Qubit::e : Qubit::g});
  }
  return chain;
}

int Basis::dim(FockCutoff cutoff) const {
  return kind == BasisKind::full ? 2 * cutoff.levels() : cutoff.levels();
}

std::vector<BareState> Basis::states(FockCutoff cutoff) const {
  if (kind == BasisKind::chain) return build_parity_chain(parity, cutoff).states;
  std::vector<BareState> out;
  out.reserve(static_cast<std::size_t>(2 * cutoff.levels()));
  for (int n = 0; n <= cutoff.n_max; ++n) {
    out.push_back({n, Qubit::g});
    out.push_back({n, Qubit::e});
  }
  return out;
}

std::string Basis::name() const {
  return kind == BasisKind::full ? "full" : "chain(" + to_string(parity) + ")";
}

FockCutoff cutoff_for_dim(Basis basis, int dim) {
  if (basis.kind == BasisKind::full) {
    if (dim < 2 || dim % 2 != 0) throw std::invalid_argument("full-space dimension must be even, got " + std::to_string(dim));
    return FockCutoff(dim / 2 - 1);
  }
  if (dim < 1) throw std::invalid_argument("chain dimension must be positive");
  return FockCutoff(dim - 1);
}

Matrix build_annihilation(FockCutoff cutoff) {
  const int d = cutoff.levels();
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::Matrix2cd sigma_plus() {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  s(1, 0) = 1.0;  // |e><g|
  return s;
}

Eigen::Matrix2cd sigma_minus() { return sigma_plus().adjoint(); }

Eigen::Matrix2cd sigma_z() {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  s(0, 0) = -1.0;
  s(1, 1) = 1.0;
  return s;
}

Matrix lift_photon(const Matrix& photon_op) {
  const Eigen::Index d = photon_op.rows();
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i)
      if (photon_op(i, j) != cplx{}) {
        out(2 * i, 2 * j) = photon_op(i, j);
        out(2 * i + 1, 2 * j + 1) = photon_op(i, j);
      }
  return out;
}

Matrix lift_qubit(const Eigen::Matrix2cd& qubit_op, FockCutoff cutoff) {
  const int d = cutoff.levels();
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  for (int n = 0; n < d; ++n) out.block<2, 2>(2 * n, 2 * n) = qubit_op;
  return out;
}

int full_index(BareState s) { return 2 * s.n + (s.q == Qubit::e ? 1 : 0); }

OperatorMatrix represent(const Matrix& full_op, Basis basis, FockCutoff cutoff) {
  if (full_op.rows() != 2 * cutoff.levels() || full_op.cols() != full_op.rows())
    throw std::invalid_argument("operator is not on the full space of this cutoff");
  if (basis.kind == BasisKind::full) return {basis, full_op};
  const auto states = basis.states(cutoff);
  const int d = static_cast<int>(states.size());
  Matrix out(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) out(i, j) = full_op(full_index(states[i]), full_index(states[j]));
  return {basis, std::move(out)};
}

Parity BasisMap::sector(int full_idx) const {
  return parity_of({full_idx / 2, full_idx % 2 == 1 ? Qubit::e : Qubit::g});
}

int BasisMap::chain_position(int full_idx) const { return full_idx / 2; }

BasisMap embed_full(FockCutoff cutoff) {
  BasisMap map{cutoff, build_parity_chain(Parity::even, cutoff), build_parity_chain(Parity::odd, cutoff), {}, {}};
  const int d = 2 * cutoff.levels();
  map.chain_order.reserve(static_cast<std::size_t>(d));
  for (const auto* chain : {&map.even, &map.odd})
    for (const auto& s : chain->states) map.chain_order.push_back(full_index(s));
  map.full_to_chain.assign(static_cast<std::size_t>(d), -1);
  for (int k = 0; k < d; ++k) map.full_to_chain[static_cast<std::size_t>(map.chain_order[static_cast<std::size_t>(k)])] = k;
  return map;
}

}  // namespace rabi
