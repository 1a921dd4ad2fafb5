#include "kernel_impl.hpp"

namespace rabi::kernels {

namespace {

// Plain re/im arithmetic; std::complex operator* goes through the
// NaN-recovering library routine.
struct ScalarOps {
  static void axpy(std::size_t n, double a, const cplx* x, cplx* y) {
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < 2 * n; ++i) ys[i] += a * xs[i];
  }

  static void cmul_acc(std::size_t n, const cplx* a, const cplx* x, cplx* y) {
    const double* as = reinterpret_cast<const double*>(a);
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < n; ++i) {
      const double ar = as[2 * i], ai = as[2 * i + 1];
      const double xr = xs[2 * i], xi = xs[2 * i + 1];
      ys[2 * i] += ar * xr - ai * xi;
      ys[2 * i + 1] += ar * xi + ai * xr;
    }
  }

  static void weighted_axpy(std::size_t n, double s, const double* w, const cplx* x, cplx* y) {
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < n; ++i) {
      const double f = s * w[i];
      ys[2 * i] += f * xs[2 * i];
      ys[2 * i + 1] += f * xs[2 * i + 1];
    }
  }

  static void add_adjoint(int dim, const cplx* x, cplx* out) {
    const auto n = static_cast<std::size_t>(dim);
    const double* xs = reinterpret_cast<const double*>(x);
    double* os = reinterpret_cast<double*>(out);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ij = 2 * (i + j * n);
        const std::size_t ji = 2 * (j + i * n);
        os[ij] = xs[ij] + xs[ji];
        os[ij + 1] = xs[ij + 1] - xs[ji + 1];
      }
    }
  }
};

constexpr KernelTable kScalarTable = LindbladKernels<ScalarOps>::table("scalar");

}  // namespace

const KernelTable& scalar() { return kScalarTable; }

}  // namespace rabi::kernels
