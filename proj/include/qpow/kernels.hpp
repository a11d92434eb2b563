// Dense complex kernels. Every kernel has a serial reference implementation
// and an OpenMP variant; both use the same per-element summation order, so
// results are bit-identical and the serial path stays usable as a test
// reference. A process-wide switch selects the path at runtime.
#pragma once

#include <span>
#include <vector>

#include "qpow/core.hpp"

namespace qpow::kern {

bool parallel_enabled();
void set_parallel(bool on);
int thread_count();

// y = M x, M row-major rows x cols.
void matvec_serial(const cplx* m, int rows, int cols, const cplx* x, cplx* y);
void matvec_omp(const cplx* m, int rows, int cols, const cplx* x, cplx* y);
void matvec(const cplx* m, int rows, int cols, const cplx* x, cplx* y);

// c = a b, a: n x k, b: k x m, all row-major.
void matmul_serial(const cplx* a, const cplx* b, cplx* c, int n, int k, int m);
void matmul_omp(const cplx* a, const cplx* b, cplx* c, int n, int k, int m);
void matmul(const cplx* a, const cplx* b, cplx* c, int n, int k, int m);

}  // namespace qpow::kern

namespace qpow {

/// Row-major dense complex matrix. Sized for desk-scale walk spaces
/// (a few hundred to a few thousand rows); all products go through the
/// kern dispatch.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols) {}

  static CMatrix identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int r, int c) { return d_[static_cast<size_t>(r) * cols_ + c]; }
  const cplx& operator()(int r, int c) const { return d_[static_cast<size_t>(r) * cols_ + c]; }

  cplx* data() { return d_.data(); }
  const cplx* data() const { return d_.data(); }

  CMatrix adjoint() const {
    CMatrix a(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) a(c, r) = std::conj((*this)(r, c));
    return a;
  }

  std::vector<cplx> apply(std::span<const cplx> x) const {
    std::vector<cplx> y(rows_);
    kern::matvec(d_.data(), rows_, cols_, x.data(), y.data());
    return y;
  }

  /// max_{r,c} |(M - I)_{rc}|; unitarity checks use this on M^dagger M.
  double max_abs_diff_identity() const {
    double worst = 0.0;
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) {
        const cplx want = (r == c) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
        worst = std::max(worst, std::abs((*this)(r, c) - want));
      }
    return worst;
  }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    CMatrix c(a.rows_, b.cols_);
    kern::matmul(a.data(), b.data(), c.data(), a.rows_, a.cols_, b.cols_);
    return c;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> d_;
};

inline double vec_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline cplx vec_dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s{0.0, 0.0};
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace qpow
