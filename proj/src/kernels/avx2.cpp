// Compiled with -mavx2 -mfma.  Nothing in here may be reached unless
// dispatch.cpp has confirmed CPU support.

#include <immintrin.h>

#include <cmath>

#include "kernel_impl.hpp"

namespace rabi::kernels {

namespace {

// One __m256d holds two interleaved complex numbers.
struct Avx2Ops {
  static void axpy(std::size_t n, double a, const cplx* x, cplx* y) {
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    const std::size_t m = 2 * n;
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 8 <= m; i += 8) {
      __m256d y0 = _mm256_loadu_pd(ys + i);
      __m256d y1 = _mm256_loadu_pd(ys + i + 4);
      y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(xs + i), y0);
      y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(xs + i + 4), y1);
      _mm256_storeu_pd(ys + i, y0);
      _mm256_storeu_pd(ys + i + 4, y1);
    }
    for (; i + 4 <= m; i += 4) {
      _mm256_storeu_pd(ys + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(xs + i), _mm256_loadu_pd(ys + i)));
    }
    for (; i < m; ++i) ys[i] = std::fma(a, xs[i], ys[i]);
  }

  static __m256d cmul(__m256d a, __m256d x) {
    const __m256d a_re = _mm256_movedup_pd(a);         // ar ar
    const __m256d a_im = _mm256_permute_pd(a, 0xF);    // ai ai
    const __m256d x_sw = _mm256_permute_pd(x, 0x5);    // xi xr
    return _mm256_fmaddsub_pd(a_re, x, _mm256_mul_pd(a_im, x_sw));
  }

  static void cmul_acc(std::size_t n, const cplx* a, const cplx* x, cplx* y) {
    const double* as = reinterpret_cast<const double*>(a);
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
      const __m256d p = cmul(_mm256_loadu_pd(as + 2 * i), _mm256_loadu_pd(xs + 2 * i));
      _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), p));
    }
    if (i < n) {
      const double ar = as[2 * i], ai = as[2 * i + 1];
      const double xr = xs[2 * i], xi = xs[2 * i + 1];
      ys[2 * i] += ar * xr - ai * xi;
      ys[2 * i + 1] += ar * xi + ai * xr;
    }
  }

  static void weighted_axpy(std::size_t n, double s, const double* w, const cplx* x, cplx* y) {
    const double* xs = reinterpret_cast<const double*>(x);
    double* ys = reinterpret_cast<double*>(y);
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
      // (w0, w1) -> (w0, w0, w1, w1)
      const __m256d wv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i)), 0x50);
      const __m256d f = _mm256_mul_pd(vs, wv);
      _mm256_storeu_pd(ys + 2 * i, _mm256_fmadd_pd(f, _mm256_loadu_pd(xs + 2 * i), _mm256_loadu_pd(ys + 2 * i)));
    }
    if (i < n) {
      const double f = s * w[i];
      ys[2 * i] = std::fma(f, xs[2 * i], ys[2 * i]);
      ys[2 * i + 1] = std::fma(f, xs[2 * i + 1], ys[2 * i + 1]);
    }
  }

  static void add_adjoint(int dim, const cplx* x, cplx* out) {
    const auto n = static_cast<std::size_t>(dim);
    const double* xs = reinterpret_cast<const double*>(x);
    double* os = reinterpret_cast<double*>(out);
    const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t i = 0;
      for (; i + 2 <= n; i += 2) {
        const std::size_t ij = 2 * (i + j * n);
        const __m128d t0 = _mm_loadu_pd(xs + 2 * (j + i * n));
        const __m128d t1 = _mm_loadu_pd(xs + 2 * (j + (i + 1) * n));
        const __m256d xt = _mm256_xor_pd(_mm256_set_m128d(t1, t0), conj_mask);
        _mm256_storeu_pd(os + ij, _mm256_add_pd(_mm256_loadu_pd(xs + ij), xt));
      }
      if (i < n) {
        const std::size_t ij = 2 * (i + j * n);
        const std::size_t ji = 2 * (j + i * n);
        os[ij] = xs[ij] + xs[ji];
        os[ij + 1] = xs[ij + 1] - xs[ji + 1];
      }
    }
  }
};

constexpr KernelTable kAvx2Table = LindbladKernels<Avx2Ops>::table("avx2");

}  // namespace

const KernelTable& avx2_table() { return kAvx2Table; }

}  // namespace rabi::kernels
