#pragma once

// Composite kernels written once against an `Ops` policy that supplies the
// vector primitives.  Each ISA translation unit defines its policy in an
// anonymous namespace, which gives every instantiation internal linkage.

#include <cstring>

#include "rabi/kernels.hpp"

template <class Ops>
struct LindbladKernels {
  using cplx = rabi::kernels::cplx;
  using BandedView = rabi::kernels::BandedView;

  static void lindblad_rhs(const BandedView& gen, const cplx* rho, cplx* out, cplx* scratch) {
    const int n = gen.dim;
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    std::memset(static_cast<void*>(scratch), 0, nn * sizeof(cplx));

    // scratch = G rho, column by column, one diagonal at a time.
    for (std::size_t k = 0; k < gen.offsets.size(); ++k) {
      const int off = gen.offsets[k];
      // Ternaries instead of std::min/max: those are inline templates this
      // header would otherwise emit with AVX2 encoding.
      const int lo = off < 0 ? -off : 0;
      const int hi = off > 0 ? n - off : n;
      if (hi <= lo) continue;
      const cplx* diag = gen.diagonals.data() + k * static_cast<std::size_t>(n) + lo;
      for (int j = 0; j < n; ++j) {
        const std::size_t col = static_cast<std::size_t>(j) * n;
        Ops::cmul_acc(static_cast<std::size_t>(hi - lo), diag, rho + col + lo + off, scratch + col + lo);
      }
    }

    Ops::add_adjoint(n, scratch, out);

    // out(i, j) += w_i w_j rho(i + d, j + d)
    const int d = gen.jump_offset;
    if (!gen.jump_weights.empty() && d < n) {
      const std::size_t len = static_cast<std::size_t>(n - d);
      const double* w = gen.jump_weights.data();
      for (int j = 0; j + d < n; ++j) {
        const double s = w[j];
        if (s == 0.0) continue;
        Ops::weighted_axpy(len, s, w, rho + static_cast<std::size_t>(j + d) * n + d,
                           out + static_cast<std::size_t>(j) * n);
      }
    }
  }

  static void rk4_step(const BandedView& gen, double h, cplx* rho, cplx* work) {
    const std::size_t nn = static_cast<std::size_t>(gen.dim) * gen.dim;
    cplx* k1 = work;
    cplx* k2 = k1 + nn;
    cplx* k3 = k2 + nn;
    cplx* k4 = k3 + nn;
    cplx* stage = k4 + nn;
    cplx* scratch = stage + nn;

    lindblad_rhs(gen, rho, k1, scratch);
    std::memcpy(static_cast<void*>(stage), rho, nn * sizeof(cplx));
    Ops::axpy(nn, 0.5 * h, k1, stage);
    lindblad_rhs(gen, stage, k2, scratch);
    std::memcpy(static_cast<void*>(stage), rho, nn * sizeof(cplx));
    Ops::axpy(nn, 0.5 * h, k2, stage);
    lindblad_rhs(gen, stage, k3, scratch);
    std::memcpy(static_cast<void*>(stage), rho, nn * sizeof(cplx));
    Ops::axpy(nn, h, k3, stage);
    lindblad_rhs(gen, stage, k4, scratch);

    // rho += h/6 (k1 + 2 k2 + 2 k3 + k4)
    Ops::axpy(nn, 1.0, k3, k2);
    Ops::axpy(nn, 1.0, k4, k1);
    Ops::axpy(nn, 2.0, k2, k1);
    Ops::axpy(nn, h / 6.0, k1, rho);
  }

  static constexpr rabi::kernels::KernelTable table(const char* name) {
    return {name, &Ops::axpy, &Ops::cmul_acc, &Ops::weighted_axpy, &Ops::add_adjoint, &lindblad_rhs, &rk4_step};
  }
};
