#pragma once

#include <random>

#include "rabi/model.hpp"

namespace testing {

inline rabi::ModelParams params(double delta, double g1, double g2, double kappa, int n_max = 20) {
  return {1.0, delta, g1, g2, kappa, rabi::FockCutoff{n_max}};
}

// Random valid density matrix on `basis` supported on photon numbers <= top.
inline rabi::DensityMatrix random_state(rabi::Basis basis, rabi::FockCutoff cutoff, int top, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  const auto states = basis.states(cutoff);
  const auto n = static_cast<Eigen::Index>(states.size());
  rabi::Matrix m = rabi::Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (states[static_cast<std::size_t>(i)].n <= top) m(i, j) = {normal(rng), normal(rng)};
  rabi::Matrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  return {basis, rho};
}

}  // namespace testing
