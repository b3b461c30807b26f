#include "tcsim/kernels/kernels.hpp"

namespace tcsim::kernels {

namespace {

void chebyshev_scalar(const CsrView& a, int width, double alpha, double beta, double gamma, const double* x,
                      const double* prev, double* out) {
  const int stride = 2 * width;
  for (int r = 0; r < a.rows; ++r) {
    double* o = out + static_cast<std::size_t>(r) * stride;
    const double* xr = x + static_cast<std::size_t>(r) * stride;
    for (int k = 0; k < stride; ++k) o[k] = 0.0;
    for (int p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      const double v = a.val[p];
      const double* xc = x + static_cast<std::size_t>(a.col[p]) * stride;
      for (int k = 0; k < stride; ++k) o[k] += v * xc[k];
    }
    if (gamma != 0.0) {
      const double* pr = prev + static_cast<std::size_t>(r) * stride;
      for (int k = 0; k < stride; ++k) o[k] = alpha * o[k] + beta * xr[k] + gamma * pr[k];
    } else {
      for (int k = 0; k < stride; ++k) o[k] = alpha * o[k] + beta * xr[k];
    }
  }
}

void caxpy_scalar(std::size_t n, double cr, double ci, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[2 * i];
    const double xi = x[2 * i + 1];
    y[2 * i] += cr * xr - ci * xi;
    y[2 * i + 1] += cr * xi + ci * xr;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", chebyshev_scalar, caxpy_scalar};
  return table;
}

}  // namespace tcsim::kernels
