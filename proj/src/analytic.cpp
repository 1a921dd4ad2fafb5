#include "rabi/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rabi::analytic {

namespace {

constexpr cplx I{0.0, 1.0};

// s = +1 puts the +A/2 shift on the first basis state (AJC), s = -1 on the
// second (JC).
DoubletSolution solve_doublet(DoubletFlavor flavor, int n, const ModelParams& p) {
  if (n < 0) throw std::invalid_argument("doublet index must be non-negative");
  DoubletSolution d;
  d.n = n;
  d.flavor = flavor;
  const bool jc = flavor == DoubletFlavor::jc;
  const double g = jc ? p.g1 : p.g2;
  const double s = jc ? -1.0 : 1.0;
  d.detuning = jc ? p.omega - p.delta : p.omega + p.delta;
  d.A = d.detuning - 2.0 * I * p.kappa * static_cast<double>(n);
  d.B = 2.0 * g * std::sqrt(static_cast<double>(n + 1));
  d.Omega = std::sqrt(d.A * d.A + d.B * d.B);
  const cplx center = (n + 0.5) * p.omega - I * p.kappa * static_cast<double>(n * n);
  d.E_plus = center + 0.5 * d.Omega;
  d.E_minus = center - 0.5 * d.Omega;
  if (jc) {
    d.first = {n, Qubit::e};
    d.second = {n + 1, Qubit::g};
  } else {
    d.first = {n + 1, Qubit::e};
    d.second = {n, Qubit::g};
  }

  if (d.Omega == cplx{}) {
    if (d.B == 0.0) {
      d.mix_cos = 1.0;
      d.mix_sin = 0.0;
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      d.mix_cos = d.mix_sin = cplx{nan, nan};
    }
    return d;
  }
  // cos^2 = (Omega + sA) / 2 Omega, sin^2 = (Omega - sA) / 2 Omega; the
  // relative sign comes from the eigenvector equation sin/cos = (Omega - sA)/B.
  // The smaller of Omega +- sA cancels; recover it from their product B^2.
  cplx up = d.Omega + s * d.A, down = d.Omega - s * d.A;
  if (std::abs(up) >= std::abs(down)) down = d.B * d.B / up;
  else up = d.B * d.B / down;
  const cplx cos2 = up / (2.0 * d.Omega);
  const cplx sin2 = down / (2.0 * d.Omega);
  if (d.B == 0.0) {
    d.mix_cos = std::sqrt(cos2);
    d.mix_sin = std::sqrt(sin2);
  } else if (std::abs(cos2) >= std::abs(sin2)) {
    d.mix_cos = std::sqrt(cos2);
    d.mix_sin = d.mix_cos * down / d.B;
  } else {
    d.mix_sin = std::sqrt(sin2);
    d.mix_cos = d.mix_sin * up / d.B;
  }
  return d;
}

// B sin(Omega t / 2) / Omega, finite through Omega -> 0.
cplx rabi_amplitude(const DoubletSolution& d, double t) {
  const cplx x = d.Omega * t;
  cplx ratio;
  if (std::abs(x) < 1e-6) {
    ratio = 0.5 * t * (1.0 - x * x / 24.0);
  } else {
    ratio = std::sin(0.5 * x) / d.Omega;
  }
  return d.B * ratio;
}

double doublet_population(const DoubletSolution& d, double t, const ModelParams& p) {
  if (t < 0) throw std::invalid_argument("time must be non-negative");
  const double decay = std::exp(-2.0 * p.kappa * static_cast<double>(d.n) * d.n * t);
  return std::norm(rabi_amplitude(d, t)) * decay;
}

}  // namespace

Eigen::Matrix2cd DoubletSolution::block(const ModelParams& params) const {
  (void)params;
  const double s = flavor == DoubletFlavor::jc ? -1.0 : 1.0;
  const cplx c = center();
  Eigen::Matrix2cd m;
  m << c + 0.5 * s * A, 0.5 * B, 0.5 * B, c - 0.5 * s * A;
  return m;
}

cplx decoupled_eigenvalue(int n, Branch branch, const ModelParams& params) {
  const double nd = n;
  const double half = 0.5 * params.delta * (branch == Branch::plus ? 1.0 : -1.0);
  return nd * params.omega + half - I * params.kappa * nd * (nd - 1.0);
}

DoubletSolution jc_doublet(int n, const ModelParams& params) { return solve_doublet(DoubletFlavor::jc, n, params); }

DoubletSolution ajc_doublet(int n, const ModelParams& params) { return solve_doublet(DoubletFlavor::ajc, n, params); }

cplx continued_sqrt(cplx z, cplx previous) {
  const cplx root = std::sqrt(z);
  if (previous == cplx{}) return root;
  return std::real(root * std::conj(previous)) < 0.0 ? -root : root;
}

std::vector<DoubletSolution> doublet_sweep(DoubletFlavor flavor, int n, const ModelParams& params,
                                           std::span<const double> couplings) {
  std::vector<DoubletSolution> out;
  out.reserve(couplings.size());
  cplx previous{};
  for (double g : couplings) {
    ModelParams p = params;
    (flavor == DoubletFlavor::jc ? p.g1 : p.g2) = g;
    DoubletSolution d = solve_doublet(flavor, n, p);
    const cplx omega = continued_sqrt(d.A * d.A + d.B * d.B, previous);
    if (omega != d.Omega) {
      std::swap(d.E_plus, d.E_minus);
      d.Omega = omega;
      // (-sin, cos) is now the "+" eigenvector.
      const cplx c = d.mix_cos;
      d.mix_cos = -d.mix_sin;
      d.mix_sin = c;
    }
    if (omega != cplx{}) previous = omega;
    out.push_back(d);
  }
  return out;
}

double jc_population(int n, double t, const ModelParams& params) {
  return doublet_population(jc_doublet(n, params), t, params);
}

double ajc_population(int n, double t, const ModelParams& params) {
  return doublet_population(ajc_doublet(n, params), t, params);
}

double even_peak_position(int m, const ModelParams& params) {
  if (m < 1) throw std::domain_error("peak index must be positive");
  const double radicand = (2.0 * m - 1.0) + params.delta / params.omega;
  if (radicand < 0) throw std::domain_error("negative radicand in even peak position");
  return std::sqrt(radicand);
}

double odd_peak_position(int m, const ModelParams& params) {
  if (m < 1) throw std::domain_error("peak index must be positive");
  const double radicand = (2.0 * m - 1.0) - params.delta / params.omega;
  if (radicand < 0)
    throw std::domain_error("no odd-sector avoided crossing for m=" + std::to_string(m) + ": (2m-1) - Delta/omega < 0");
  return std::sqrt(radicand);
}

double ep_position(int n, const ModelParams& params) {
  if (n < 0) throw std::domain_error("doublet index must be non-negative");
  const double k = params.kappa / params.omega;
  return std::sqrt(k * k * n * n / (n + 1.0));
}

bool pt_symmetric(int n, const ModelParams& params) {
  const double g = params.g1;
  return (n + 1.0) * g * g - params.kappa * params.kappa * n * n >= 0.0;
}

std::vector<cplx> solvable_limit_spectrum(const ModelParams& params, Parity parity) {
  const bool jc = params.g2 == 0.0;
  if (!jc && params.g1 != 0.0) throw std::invalid_argument("solvable limits need g1 == 0 or g2 == 0");
  const ParityChain chain = build_parity_chain(parity, params.cutoff);
  std::vector<bool> paired(chain.size(), false);
  std::vector<cplx> values;
  values.reserve(chain.size());
  for (int n = 0; n < params.cutoff.n_max; ++n) {
    // JC pairs |n,e> with |n+1,g>; AJC pairs |n,g> with |n+1,e>.
    const BareState lower{n, jc ? Qubit::e : Qubit::g};
    if (parity_of(lower) != parity) continue;
    const DoubletSolution d = jc ? jc_doublet(n, params) : ajc_doublet(n, params);
    values.push_back(d.E_plus);
    values.push_back(d.E_minus);
    paired[static_cast<std::size_t>(n)] = paired[static_cast<std::size_t>(n + 1)] = true;
  }
  for (std::size_t k = 0; k < chain.size(); ++k) {
    if (paired[k]) continue;
    const BareState s = chain.states[k];
    values.push_back(decoupled_eigenvalue(s.n, s.q == Qubit::e ? Branch::plus : Branch::minus, params));
  }
  return values;
}

}  // namespace rabi::analytic
