#include <immintrin.h>

#include "tcsim/kernels/kernels.hpp"

namespace tcsim::kernels {

namespace {

void chebyshev_avx2(const CsrView& a, int width, double alpha, double beta, double gamma, const double* x,
                    const double* prev, double* out) {
  const int stride = 2 * width;
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  const __m256d vg = _mm256_set1_pd(gamma);

  if (stride == 8) {
    for (int r = 0; r < a.rows; ++r) {
      __m256d acc0 = _mm256_setzero_pd();
      __m256d acc1 = _mm256_setzero_pd();
      for (int p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
        const __m256d v = _mm256_set1_pd(a.val[p]);
        const double* xc = x + static_cast<std::size_t>(a.col[p]) * 8;
        acc0 = _mm256_fmadd_pd(v, _mm256_loadu_pd(xc), acc0);
        acc1 = _mm256_fmadd_pd(v, _mm256_loadu_pd(xc + 4), acc1);
      }
      const std::size_t base = static_cast<std::size_t>(r) * 8;
      __m256d o0 = _mm256_fmadd_pd(vb, _mm256_loadu_pd(x + base), _mm256_mul_pd(va, acc0));
      __m256d o1 = _mm256_fmadd_pd(vb, _mm256_loadu_pd(x + base + 4), _mm256_mul_pd(va, acc1));
      if (gamma != 0.0) {
        o0 = _mm256_fmadd_pd(vg, _mm256_loadu_pd(prev + base), o0);
        o1 = _mm256_fmadd_pd(vg, _mm256_loadu_pd(prev + base + 4), o1);
      }
      _mm256_storeu_pd(out + base, o0);
      _mm256_storeu_pd(out + base + 4, o1);
    }
    return;
  }

  // General width: four doubles at a time, scalar tail.
  const int vec_end = stride - stride % 4;
  for (int r = 0; r < a.rows; ++r) {
    const std::size_t base = static_cast<std::size_t>(r) * stride;
    double* o = out + base;
    for (int k = 0; k < stride; ++k) o[k] = 0.0;
    for (int p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      const double s = a.val[p];
      const __m256d v = _mm256_set1_pd(s);
      const double* xc = x + static_cast<std::size_t>(a.col[p]) * stride;
      int k = 0;
      for (; k < vec_end; k += 4)
        _mm256_storeu_pd(o + k, _mm256_fmadd_pd(v, _mm256_loadu_pd(xc + k), _mm256_loadu_pd(o + k)));
      for (; k < stride; ++k) o[k] += s * xc[k];
    }
    int k = 0;
    for (; k < vec_end; k += 4) {
      __m256d t = _mm256_fmadd_pd(vb, _mm256_loadu_pd(x + base + k), _mm256_mul_pd(va, _mm256_loadu_pd(o + k)));
      if (gamma != 0.0) t = _mm256_fmadd_pd(vg, _mm256_loadu_pd(prev + base + k), t);
      _mm256_storeu_pd(o + k, t);
    }
    for (; k < stride; ++k) {
      double t = alpha * o[k] + beta * x[base + k];
      if (gamma != 0.0) t += gamma * prev[base + k];
      o[k] = t;
    }
  }
}

void caxpy_avx2(std::size_t n, double cr, double ci, const double* x, double* y) {
  // (cr + i ci)(xr + i xi) on [xr xi xr xi] lanes: cr*x + ci*[-xi xr -xi xr]
  const __m256d vr = _mm256_set1_pd(cr);
  const __m256d vi = _mm256_setr_pd(-ci, ci, -ci, ci);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(x + 2 * i);
    const __m256d sw = _mm256_permute_pd(xv, 0b0101);
    __m256d yv = _mm256_loadu_pd(y + 2 * i);
    yv = _mm256_fmadd_pd(vr, xv, yv);
    yv = _mm256_fmadd_pd(vi, sw, yv);
    _mm256_storeu_pd(y + 2 * i, yv);
  }
  for (; i < n; ++i) {
    const double xr = x[2 * i];
    const double xi = x[2 * i + 1];
    y[2 * i] += cr * xr - ci * xi;
    y[2 * i + 1] += cr * xi + ci * xr;
  }
}

}  // namespace

const KernelTable* avx2_kernels_impl() {
  static const KernelTable table{"avx2", chebyshev_avx2, caxpy_avx2};
  return &table;
}

}  // namespace tcsim::kernels
