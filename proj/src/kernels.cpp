#include "qpow/kernels.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qpow::kern {

namespace {
std::atomic<bool> g_parallel{true};

// Below these sizes the fork/join overhead dominates on small matrices.
constexpr int kMatvecParallelRows = 64;
constexpr int kMatmulParallelRows = 32;
}  // namespace

bool parallel_enabled() {
#ifdef _OPENMP
  return g_parallel.load(std::memory_order_relaxed);
#else
  return false;
#endif
}

void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

int thread_count() {
#ifdef _OPENMP
  return parallel_enabled() ? omp_get_max_threads() : 1;
#else
  return 1;
#endif
}

void matvec_serial(const cplx* m, int rows, int cols, const cplx* x, cplx* y) {
  for (int r = 0; r < rows; ++r) {
    const cplx* row = m + static_cast<size_t>(r) * cols;
    cplx acc{0.0, 0.0};
    for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

void matvec_omp(const cplx* m, int rows, int cols, const cplx* x, cplx* y) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (rows >= kMatvecParallelRows)
  for (int r = 0; r < rows; ++r) {
    const cplx* row = m + static_cast<size_t>(r) * cols;
    cplx acc{0.0, 0.0};
    for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
#else
  matvec_serial(m, rows, cols, x, y);
#endif
}

void matvec(const cplx* m, int rows, int cols, const cplx* x, cplx* y) {
  if (parallel_enabled())
    matvec_omp(m, rows, cols, x, y);
  else
    matvec_serial(m, rows, cols, x, y);
}

namespace {
inline void matmul_row(const cplx* a, const cplx* b, cplx* c, int n, int k, int m, int r) {
  (void)n;
  cplx* out = c + static_cast<size_t>(r) * m;
  for (int j = 0; j < m; ++j) out[j] = cplx{0.0, 0.0};
  const cplx* arow = a + static_cast<size_t>(r) * k;
  for (int l = 0; l < k; ++l) {
    const cplx av = arow[l];
    if (av == cplx{0.0, 0.0}) continue;
    const cplx* brow = b + static_cast<size_t>(l) * m;
    for (int j = 0; j < m; ++j) out[j] += av * brow[j];
  }
}
}  // namespace

void matmul_serial(const cplx* a, const cplx* b, cplx* c, int n, int k, int m) {
  for (int r = 0; r < n; ++r) matmul_row(a, b, c, n, k, m, r);
}

void matmul_omp(const cplx* a, const cplx* b, cplx* c, int n, int k, int m) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= kMatmulParallelRows)
  for (int r = 0; r < n; ++r) matmul_row(a, b, c, n, k, m, r);
#else
  matmul_serial(a, b, c, n, k, m);
#endif
}

void matmul(const cplx* a, const cplx* b, cplx* c, int n, int k, int m) {
  if (parallel_enabled())
    matmul_omp(a, b, c, n, k, m);
  else
    matmul_serial(a, b, c, n, k, m);
}

}  // namespace qpow::kern
