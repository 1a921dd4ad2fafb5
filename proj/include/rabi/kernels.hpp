#pragma once

// Inner loops of the master-equation integrator.  Each routine exists as a
// portable scalar reference and, on x86-64, as an AVX2/FMA variant; the
// variant is picked once at runtime from CPUID.  Setting the environment
// variable RABI_RELAX_KERNELS=scalar forces the reference path.
//
// Complex data is interleaved (re, im) doubles; matrices are column-major
// with leading dimension equal to their dimension.

#include <complex>
#include <cstddef>
#include <span>

namespace rabi::kernels {

using cplx = std::complex<double>;

/// Banded generator G plus a single-offset jump operator A:
///
///   d rho/dt = G rho + (G rho)^dag + A rho A^dag
///
/// with G = -i H_eff stored by diagonals (row i of diagonal k multiplies
/// rho(i + offsets[k], :)), and A(i, i + jump_offset) = jump_weights[i]
/// (the jump rate is folded into the weights).  Valid for Hermitian rho
/// only; the output is Hermitian to the last bit, which keeps rounding from
/// seeding the anti-Hermitian modes this form would amplify.
struct BandedView {
  int dim = 0;
  std::span<const int> offsets;
  std::span<const cplx> diagonals;  // offsets.size() * dim, row-indexed
  int jump_offset = 0;
  std::span<const double> jump_weights;  // dim - jump_offset entries
};

struct Workspace;

struct KernelTable {
  const char* name;
  /// y += a * x
  void (*axpy)(std::size_t n, double a, const cplx* x, cplx* y);
  /// y += a .* x (elementwise complex product)
  void (*cmul_acc)(std::size_t n, const cplx* a, const cplx* x, cplx* y);
  /// y += s * w .* x, w real
  void (*weighted_axpy)(std::size_t n, double s, const double* w, const cplx* x, cplx* y);
  /// out = X + X^dag for a dim x dim matrix
  void (*add_adjoint)(int dim, const cplx* x, cplx* out);
  /// out = Lindblad right-hand side of rho; scratch holds dim*dim entries
  void (*lindblad_rhs)(const BandedView& gen, const cplx* rho, cplx* out, cplx* scratch);
  /// One classical RK4 step of size h in place; work holds 6*dim*dim entries
  void (*rk4_step)(const BandedView& gen, double h, cplx* rho, cplx* work);
};

[[nodiscard]] const KernelTable& scalar();
/// nullptr when the AVX2 variant was not compiled or the CPU lacks AVX2/FMA.
[[nodiscard]] const KernelTable* avx2();
/// The table used by the integrator.
[[nodiscard]] const KernelTable& active();

}  // namespace rabi::kernels
