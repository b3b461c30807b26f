#pragma once

// Inner loops of the Schrödinger propagation. Vectors are blocks of `width`
// complex columns stored row-major and interleaved: element (row r, column c)
// lives at [2 * (r * width + c)] (real) and [... + 1] (imag).
//
// Every kernel has a scalar reference and, on x86-64, an AVX2/FMA variant.
// The variant is chosen once at first use from the CPU; TCSIM_KERNELS=scalar
// forces the reference path.

#include <cstddef>
#include <string>

namespace tcsim::kernels {

/// Real CSR matrix, borrowed.
struct CsrView {
  int rows = 0;
  const int* row_ptr = nullptr;
  const int* col = nullptr;
  const double* val = nullptr;
};

/// out = alpha * A x + beta * x + gamma * prev. `prev` may be null when gamma == 0.
using ChebyshevFn = void (*)(const CsrView& a, int width, double alpha, double beta, double gamma, const double* x,
                             const double* prev, double* out);

/// y += (cr + i ci) * x over n complex numbers.
using CaxpyFn = void (*)(std::size_t n, double cr, double ci, const double* x, double* y);

struct KernelTable {
  const char* name;
  ChebyshevFn chebyshev;
  CaxpyFn caxpy;
};

const KernelTable& scalar_kernels();
/// Null when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();
/// Table picked at first call.
const KernelTable& active();

}  // namespace tcsim::kernels
