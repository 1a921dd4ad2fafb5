#include "rabi/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <Eigen/Eigenvalues>

#include "rabi/parallel.hpp"

namespace rabi {

namespace {

std::string describe(const ModelParams& p) {
  std::ostringstream os;
  os << "omega=" << p.omega << " delta=" << p.delta << " g1=" << p.g1 << " g2=" << p.g2 << " kappa=" << p.kappa
     << " n_max=" << p.cutoff.n_max;
  return os.str();
}

bool by_real_part(cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

std::vector<cplx> sorted_values(const ModelParams& params, Parity parity) {
  const Matrix& h = model_operators(params, Basis::chain(parity))->effective_hamiltonian;
  Eigen::ComplexEigenSolver<Matrix> solver(h, false);
  if (solver.info() != Eigen::Success) throw SpectrumError("eigensolver failed at " + describe(params));
  std::vector<cplx> v(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(v.begin(), v.end(), by_real_part);
  return v;
}

double rank_gap(const ModelParams& params, Parity parity, int k) {
  const auto v = sorted_values(params, parity);
  return v[static_cast<std::size_t>(k) + 1].real() - v[static_cast<std::size_t>(k)].real();
}

void check_monotone(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("sweep grid is empty");
  if (xs.size() < 2) return;
  const bool up = xs[1] > xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (up ? !(xs[i] > xs[i - 1]) : !(xs[i] < xs[i - 1]))
      throw std::invalid_argument("sweep grid must be strictly monotone");
}

}  // namespace

Spectrum complex_spectrum(const ModelParams& params, Parity parity) {
  params.validate();
  const Matrix& h = model_operators(params, Basis::chain(parity))->effective_hamiltonian;
  Eigen::ComplexEigenSolver<Matrix> solver(h, true);
  if (solver.info() != Eigen::Success) throw SpectrumError("eigensolver failed at " + describe(params));
  const auto n = static_cast<std::size_t>(h.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return by_real_part(ev(static_cast<Eigen::Index>(a)), ev(static_cast<Eigen::Index>(b)));
  });
  Spectrum s;
  s.vectors.resize(h.rows(), h.cols());
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = static_cast<Eigen::Index>(order[k]);
    s.values.push_back(ev(src));
    s.vectors.col(static_cast<Eigen::Index>(k)) = solver.eigenvectors().col(src).normalized();
  }
  return s;
}

ModelParams SweepSpec::apply(const ModelParams& base, double value) const {
  ModelParams p = base;
  if (axis == SweepAxis::g1) {
    p.g1 = value;
    if (lambda) p.g2 = *lambda * value;
  } else {
    if (lambda) throw std::invalid_argument("lambda applies to g1 sweeps only");
    p.g2 = value;
  }
  return p;
}

LevelSet sweep_spectrum(const ModelParams& params, Parity parity, const SweepSpec& sweep, bool keep_vectors,
                        unsigned jobs) {
  check_monotone(sweep.values);
  const std::size_t points = sweep.values.size();
  std::vector<Spectrum> spectra(points);
  parallel_for(points, jobs, [&](std::size_t i) { spectra[i] = complex_spectrum(sweep.apply(params, sweep.values[i]), parity); });

  const auto dim = static_cast<int>(spectra[0].values.size());
  LevelSet out{params, parity, sweep, {}};
  out.levels.resize(static_cast<std::size_t>(dim));
  // slot[b] = column of the current point that belongs to branch b
  std::vector<int> slot(static_cast<std::size_t>(dim));
  std::iota(slot.begin(), slot.end(), 0);
  for (int b = 0; b < dim; ++b) out.levels[static_cast<std::size_t>(b)].label = {parity, b};

  auto record = [&](std::size_t i, const std::vector<bool>& weak) {
    for (int b = 0; b < dim; ++b) {
      auto& level = out.levels[static_cast<std::size_t>(b)];
      const int col = slot[static_cast<std::size_t>(b)];
      level.values.push_back(spectra[i].values[static_cast<std::size_t>(col)]);
      level.flagged.push_back(weak[static_cast<std::size_t>(b)]);
      if (keep_vectors) level.vectors.emplace_back(spectra[i].vectors.col(col));
    }
  };
  record(0, std::vector<bool>(static_cast<std::size_t>(dim), false));

  for (std::size_t i = 1; i < points; ++i) {
    Matrix prev(spectra[i].vectors.rows(), dim);
    for (int b = 0; b < dim; ++b) prev.col(b) = spectra[i - 1].vectors.col(slot[static_cast<std::size_t>(b)]);
    const Eigen::MatrixXd overlap = (prev.adjoint() * spectra[i].vectors).cwiseAbs();

    std::vector<int> next(static_cast<std::size_t>(dim), -1);
    std::vector<bool> taken(static_cast<std::size_t>(dim), false), weak(static_cast<std::size_t>(dim), false);
    for (int round = 0; round < dim; ++round) {
      double best = -1;
      int bb = -1, bc = -1;
      for (int b = 0; b < dim; ++b) {
        if (next[static_cast<std::size_t>(b)] >= 0) continue;
        for (int c = 0; c < dim; ++c)
          if (!taken[static_cast<std::size_t>(c)] && overlap(b, c) > best) {
            best = overlap(b, c);
            bb = b;
            bc = c;
          }
      }
      next[static_cast<std::size_t>(bb)] = bc;
      taken[static_cast<std::size_t>(bc)] = true;
      weak[static_cast<std::size_t>(bb)] = best < 0.5;
    }
    slot = next;
    record(i, weak);
  }
  return out;
}

std::string to_string(CrossingKind k) {
  switch (k) {
    case CrossingKind::avoided: return "avoided";
    case CrossingKind::degenerate: return "degenerate";
    case CrossingKind::exceptional: return "exceptional";
  }
  return "?";
}

std::vector<CrossingEvent> find_avoided_crossings(const LevelSet& set, const CrossingOptions& options) {
  const auto& xs = set.sweep.values;
  const std::size_t points = xs.size();
  if (points < 3 || set.levels.empty()) return {};
  const int dim = static_cast<int>(set.levels.size());
  const int ranks = std::min(dim, options.lowest_levels.value_or(dim));

  // Rank-sorted eigenvalues per point, remembering which branch sits at each rank.
  std::vector<std::vector<std::pair<cplx, int>>> sorted(points);
  for (std::size_t i = 0; i < points; ++i) {
    for (int b = 0; b < dim; ++b) sorted[i].emplace_back(set.levels[static_cast<std::size_t>(b)].values[i], b);
    std::sort(sorted[i].begin(), sorted[i].end(), [](const auto& a, const auto& b) { return by_real_part(a.first, b.first); });
  }

  std::vector<CrossingEvent> events;
  for (int k = 0; k + 1 < ranks; ++k) {
    std::vector<double> gap(points);
    for (std::size_t i = 0; i < points; ++i)
      gap[i] = sorted[i][static_cast<std::size_t>(k) + 1].first.real() - sorted[i][static_cast<std::size_t>(k)].first.real();

    for (std::size_t i = 1; i + 1 < points; ++i) {
      if (!(gap[i] <= gap[i - 1] && gap[i] < gap[i + 1])) continue;
      // Neighbouring maxima: walk out until the gap starts to fall again.
      std::size_t l = i;
      while (l > 0 && gap[l - 1] >= gap[l]) --l;
      std::size_t r = i;
      while (r + 1 < points && gap[r + 1] >= gap[r]) ++r;
      if (std::min(gap[l], gap[r]) - gap[i] < options.prominence) continue;
      if (options.max_gap && gap[i] > *options.max_gap) continue;

      // Parabolic vertex through the three grid points.
      const double x0 = xs[i - 1], x1 = xs[i], x2 = xs[i + 1];
      const double y0 = gap[i - 1], y1 = gap[i], y2 = gap[i + 1];
      const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
      double x = x1;
      if (denom != 0) {
        const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
        const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
        if (a > 0) x = std::clamp(-b / (2 * a), std::min(x0, x2), std::max(x0, x2));
      }
      if (options.polish) {
        auto f = [&](double v) { return rank_gap(set.sweep.apply(set.base, v), set.parity, k); };
        const auto best = boost::math::tools::brent_find_minima(f, std::min(x0, x2), std::max(x0, x2), 40);
        if (best.second <= f(x)) x = best.first;
      }

      const auto vals = sorted_values(set.sweep.apply(set.base, x), set.parity);
      const cplx lo = vals[static_cast<std::size_t>(k)], hi = vals[static_cast<std::size_t>(k) + 1];
      CrossingEvent e;
      e.parameter = x;
      e.gap = std::abs(hi.real() - lo.real());
      e.im_gap = std::abs(hi.imag() - lo.imag());
      // Without loss H_eff is Hermitian and a closed gap is a plain crossing.
      if (e.gap < options.closure_floor)
        e.kind = e.im_gap < options.closure_floor && set.base.kappa > 0 ? CrossingKind::exceptional
                                                                       : CrossingKind::degenerate;
      e.first = set.levels[static_cast<std::size_t>(sorted[i][static_cast<std::size_t>(k)].second)].label;
      e.second = set.levels[static_cast<std::size_t>(sorted[i][static_cast<std::size_t>(k) + 1].second)].label;
      events.push_back(e);
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const CrossingEvent& a, const CrossingEvent& b) { return a.parameter < b.parameter; });
  return events;
}

std::optional<CrossingEvent> find_exceptional_point(const ModelParams& params, int n, double g1_max,
                                                    double tolerance) {
  params.validate();
  if (std::abs(params.omega - params.delta) > 1e-12 * params.omega || params.g2 != 0.0)
    throw std::invalid_argument("exceptional-point search needs delta = omega and g2 = 0");
  if (n <= 0) return std::nullopt;
  if (n + 1 > params.cutoff.n_max) throw std::invalid_argument("doublet lies outside the cutoff");
  const Parity parity = n % 2 == 1 ? Parity::even : Parity::odd;
  const cplx center{(n + 0.5) * params.omega, -params.kappa * n * n};

  struct Pair {
    cplx a, b;
    int ra, rb;
  };
  auto doublet = [&](double g1) {
    ModelParams p = params;
    p.g1 = g1;
    const auto v = sorted_values(p, parity);
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + 2, idx.end(), [&](int x, int y) {
      return std::abs(v[static_cast<std::size_t>(x)] - center) < std::abs(v[static_cast<std::size_t>(y)] - center);
    });
    const int ra = std::min(idx[0], idx[1]), rb = std::max(idx[0], idx[1]);
    return Pair{v[static_cast<std::size_t>(ra)], v[static_cast<std::size_t>(rb)], ra, rb};
  };
  auto discriminant = [&](double g1) {
    const Pair p = doublet(g1);
    const cplx d = p.a - p.b;
    return (d * d).real();
  };

  double lo = 0.0, hi = g1_max;
  if (discriminant(lo) >= 0 || discriminant(hi) <= 0) return std::nullopt;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (discriminant(mid) < 0 ? lo : hi) = mid;
  }
  const double g = 0.5 * (lo + hi);
  const Pair p = doublet(g);
  CrossingEvent e;
  e.kind = CrossingKind::exceptional;
  e.parameter = g;
  e.gap = std::abs(p.a.real() - p.b.real());
  e.im_gap = std::abs(p.a.imag() - p.b.imag());
  e.first = {parity, p.ra};
  e.second = {parity, p.rb};
  return e;
}

EigenstateWeights map_initial_state(const StateVector& psi0, const ModelParams& params, Parity parity) {
  if (!(psi0.basis == Basis::chain(parity))) throw std::invalid_argument("initial state must live on the " + to_string(parity) + " chain");
  const Spectrum s = complex_spectrum(params, parity);
  if (s.vectors.rows() != psi0.amplitudes.size()) throw std::invalid_argument("initial state dimension does not match the cutoff");
  EigenstateWeights out;
  out.energies = s.values;
  const Eigen::JacobiSVD<Matrix> svd(s.vectors);
  const auto& sv = svd.singularValues();
  out.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  out.ill_conditioned = !(out.condition <= 1e8);
  const Vector c = s.vectors.fullPivLu().solve(psi0.amplitudes);
  const Eigen::VectorXd w = c.cwiseAbs2();
  const double total = w.sum();
  for (Eigen::Index k = 0; k < w.size(); ++k) out.weights.push_back(total > 0 ? w(k) / total : 0.0);
  return out;
}

}  // namespace rabi
