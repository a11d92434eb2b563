// Sparse matrices in compressed sparse row layout, with the validation and
// norm machinery the estimators rely on. Indices are 0-based in memory;
// the file formats (mmio.hpp) are 1-based. Matrices are immutable after
// construction and safe to share across threads.
#pragma once

#include <span>
#include <vector>

#include "qpow/core.hpp"

namespace qpow {

/// Builder triplet. Duplicate (row, col) pairs are rejected, entries with
/// |z| < 1e-300 are dropped as explicit zeros.
struct Entry {
  int row = 0;
  int col = 0;
  cplx value{0.0, 0.0};
};

struct NormBounds {
  double one_norm = 0.0;        // exact max absolute column sum
  double two_norm_upper = 0.0;  // certified: min(one_norm, converged power-iteration value)
  double two_norm_lower = 0.0;  // certified: Rayleigh quotient of A^2
};

class GeneralSparseMatrix {
 public:
  GeneralSparseMatrix() = default;

  /// Builds from triplets. Throws std::invalid_argument on out-of-range
  /// indices, duplicates, or non-finite values.
  static GeneralSparseMatrix from_entries(int dim, std::vector<Entry> entries);

  /// Builds from raw CSR arrays; validates sortedness, uniqueness and
  /// finiteness (structural errors throw std::invalid_argument).
  static GeneralSparseMatrix from_csr(int dim, std::vector<int> row_ptr, std::vector<int> cols,
                                      std::vector<cplx> vals);

  int dim() const { return dim_; }
  /// Max nonzeros over rows and columns.
  int sparsity() const { return sparsity_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(cols_.size()); }

  std::span<const int> row_cols(int i) const {
    return {cols_.data() + row_ptr_[i], static_cast<size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }
  std::span<const cplx> row_vals(int i) const {
    return {vals_.data() + row_ptr_[i], static_cast<size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }

  /// y = A x
  std::vector<cplx> apply(std::span<const cplx> x) const;

  /// Exact max absolute column sum.
  double one_norm() const;
  /// Entrywise wise conjugate-pair check (exact comparison).
  bool is_hermitian() const;
  cplx entry(int r, int c) const;

  std::vector<Entry> entries() const;

 private:
  int dim_ = 0;
  int sparsity_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<cplx> vals_;
};

/// D-sparse Hermitian matrix. Construction enforces the exact conjugate
/// pair property, so every instance of this type is Hermitian.
class SparseHermitianMatrix {
 public:
  SparseHermitianMatrix() = default;

  /// Entries must contain both (i,j,z) and (j,i,conj(z)); mismatches throw
  /// std::invalid_argument ("Hermiticity violation").
  static SparseHermitianMatrix from_entries(int dim, std::vector<Entry> entries);

  /// Entries with row >= col (lower triangle, diagonal real); the mirror is
  /// filled in by conjugation. This is the MatrixMarket hermitian reading.
  static SparseHermitianMatrix from_lower_triangle(int dim, std::vector<Entry> lower);

  int dim() const { return m_.dim(); }
  int sparsity() const { return m_.sparsity(); }
  std::span<const int> row_cols(int i) const { return m_.row_cols(i); }
  std::span<const cplx> row_vals(int i) const { return m_.row_vals(i); }
  std::vector<cplx> apply(std::span<const cplx> x) const { return m_.apply(x); }
  double one_norm() const { return m_.one_norm(); }
  cplx entry(int r, int c) const { return m_.entry(r, c); }
  std::vector<Entry> entries() const { return m_.entries(); }
  const GeneralSparseMatrix& general() const { return m_; }

  /// A / c, entrywise; c real positive keeps Hermiticity exact.
  SparseHermitianMatrix scaled(double inv_factor) const;

 private:
  GeneralSparseMatrix m_;
};

struct ValidationReport {
  bool hermitian = false;
  NormBounds norms;
  bool stable = false;  // two_norm_upper <= 1 + 1e-9
  int sparsity = 0;
};

/// Exact max absolute column sum.
double one_norm(const SparseHermitianMatrix& a);

/// Two-sided ||A||_2 bracket via power iteration on A^2 (200 iterations,
/// relative tolerance 1e-10; A^2 handles the +/-lambda_max pair that stalls
/// plain power iteration on A). Lower bound is the Rayleigh quotient, upper
/// is min(one_norm, sqrt(rayleigh + residual)).
NormBounds two_norm_bounds(const SparseHermitianMatrix& a);

ValidationReport validate(const SparseHermitianMatrix& a);

/// A scaled so that ||A/C||_1 <= 1, remembering C for the C^t rescaling
/// applied by the estimators.
struct ScaledHermitian {
  SparseHermitianMatrix matrix;
  double c_bound = 1.0;
};

/// Requires C > 0 and C >= ||A||_1 (tiny relative slack); violations throw
/// MethodConstraintError.
ScaledHermitian scale_to_contraction(const SparseHermitianMatrix& a, double c);

}  // namespace qpow
