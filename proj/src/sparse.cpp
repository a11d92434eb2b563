#include "qpow/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpow/kernels.hpp"

namespace qpow {

namespace {

constexpr double kExplicitZero = 1e-300;

bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

GeneralSparseMatrix GeneralSparseMatrix::from_entries(int dim, std::vector<Entry> entries) {
  if (dim <= 0) throw std::invalid_argument("matrix dimension must be positive");
  std::erase_if(entries, [](const Entry& e) { return std::abs(e.value) < kExplicitZero; });
  for (const Entry& e : entries) {
    if (e.row < 0 || e.row >= dim || e.col < 0 || e.col >= dim)
      throw std::invalid_argument("entry index out of range");
    if (!finite(e.value)) throw std::invalid_argument("non-finite matrix entry");
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (size_t i = 1; i < entries.size(); ++i)
    if (entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col)
      throw std::invalid_argument("duplicate entry in sparse matrix");

  GeneralSparseMatrix m;
  m.dim_ = dim;
  m.row_ptr_.assign(dim + 1, 0);
  m.cols_.reserve(entries.size());
  m.vals_.reserve(entries.size());
  for (const Entry& e : entries) {
    ++m.row_ptr_[e.row + 1];
    m.cols_.push_back(e.col);
    m.vals_.push_back(e.value);
  }
  for (int i = 0; i < dim; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];

  std::vector<int> col_count(dim, 0);
  int row_max = 0;
  for (int i = 0; i < dim; ++i) {
    row_max = std::max(row_max, m.row_ptr_[i + 1] - m.row_ptr_[i]);
    for (int c : m.row_cols(i)) ++col_count[c];
  }
  int col_max = 0;
  for (int c : col_count) col_max = std::max(col_max, c);
  m.sparsity_ = std::max(row_max, col_max);
  return m;
}

GeneralSparseMatrix GeneralSparseMatrix::from_csr(int dim, std::vector<int> row_ptr,
                                                  std::vector<int> cols, std::vector<cplx> vals) {
  if (dim <= 0) throw std::invalid_argument("matrix dimension must be positive");
  if (row_ptr.size() != static_cast<size_t>(dim) + 1 || row_ptr.front() != 0 ||
      row_ptr.back() != static_cast<int>(cols.size()) || cols.size() != vals.size())
    throw std::invalid_argument("malformed CSR arrays");
  std::vector<Entry> entries;
  entries.reserve(cols.size());
  for (int i = 0; i < dim; ++i) {
    if (row_ptr[i] > row_ptr[i + 1]) throw std::invalid_argument("malformed CSR row pointers");
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (k > row_ptr[i] && cols[k] <= cols[k - 1])
        throw std::invalid_argument("CSR columns unsorted or duplicated within a row");
      entries.push_back({i, cols[k], vals[k]});
    }
  }
  return from_entries(dim, std::move(entries));
}

std::vector<cplx> GeneralSparseMatrix::apply(std::span<const cplx> x) const {
  if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("dimension mismatch");
  std::vector<cplx> y(dim_, cplx{0.0, 0.0});
  for (int i = 0; i < dim_; ++i) {
    cplx acc{0.0, 0.0};
    const auto cs = row_cols(i);
    const auto vs = row_vals(i);
    for (size_t k = 0; k < cs.size(); ++k) acc += vs[k] * x[cs[k]];
    y[i] = acc;
  }
  return y;
}

double GeneralSparseMatrix::one_norm() const {
  std::vector<double> col_sum(dim_, 0.0);
  for (int i = 0; i < dim_; ++i) {
    const auto cs = row_cols(i);
    const auto vs = row_vals(i);
    for (size_t k = 0; k < cs.size(); ++k) col_sum[cs[k]] += std::abs(vs[k]);
  }
  double best = 0.0;
  for (double s : col_sum) best = std::max(best, s);
  return best;
}

bool GeneralSparseMatrix::is_hermitian() const {
  for (int i = 0; i < dim_; ++i) {
    const auto cs = row_cols(i);
    const auto vs = row_vals(i);
    for (size_t k = 0; k < cs.size(); ++k) {
      const cplx mirror = entry(cs[k], i);
      if (mirror.real() != vs[k].real() || mirror.imag() != -vs[k].imag()) return false;
    }
  }
  return true;
}

cplx GeneralSparseMatrix::entry(int r, int c) const {
  const auto cs = row_cols(r);
  const auto it = std::lower_bound(cs.begin(), cs.end(), c);
  if (it == cs.end() || *it != c) return {0.0, 0.0};
  return row_vals(r)[static_cast<size_t>(it - cs.begin())];
}

std::vector<Entry> GeneralSparseMatrix::entries() const {
  std::vector<Entry> out;
  out.reserve(cols_.size());
  for (int i = 0; i < dim_; ++i) {
    const auto cs = row_cols(i);
    const auto vs = row_vals(i);
    for (size_t k = 0; k < cs.size(); ++k) out.push_back({i, cs[k], vs[k]});
  }
  return out;
}

SparseHermitianMatrix SparseHermitianMatrix::from_entries(int dim, std::vector<Entry> entries) {
  SparseHermitianMatrix h;
  h.m_ = GeneralSparseMatrix::from_entries(dim, std::move(entries));
  if (!h.m_.is_hermitian())
    throw std::invalid_argument("Hermiticity violation: missing or mismatched conjugate pair");
  return h;
}

SparseHermitianMatrix SparseHermitianMatrix::from_lower_triangle(int dim,
                                                                 std::vector<Entry> lower) {
  std::vector<Entry> full;
  full.reserve(2 * lower.size());
  for (const Entry& e : lower) {
    if (e.row < e.col)
      throw std::invalid_argument("hermitian input must store the lower triangle (row >= col)");
    if (e.row == e.col && e.value.imag() != 0.0)
      throw std::invalid_argument("hermitian diagonal entries must be real");
    full.push_back(e);
    if (e.row != e.col) full.push_back({e.col, e.row, std::conj(e.value)});
  }
  return from_entries(dim, std::move(full));
}

SparseHermitianMatrix SparseHermitianMatrix::scaled(double inv_factor) const {
  std::vector<Entry> es = entries();
  for (Entry& e : es) e.value /= inv_factor;
  return from_entries(dim(), std::move(es));
}

double one_norm(const SparseHermitianMatrix& a) { return a.one_norm(); }

NormBounds two_norm_bounds(const SparseHermitianMatrix& a) {
  NormBounds nb;
  nb.one_norm = a.one_norm();
  const int n = a.dim();

  // Power iteration on A^2.
  Rng rng = make_rng(0x5eedULL, static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<cplx> x(n);
  for (auto& z : x) z = cplx{uni(rng), uni(rng)};
  double nrm = vec_norm(x);
  if (nrm == 0.0) {
    x[0] = 1.0;
    nrm = 1.0;
  }
  for (auto& z : x) z /= nrm;

  double rayleigh = 0.0;
  double residual = 0.0;
  double prev = -1.0;
  for (int it = 0; it < 200; ++it) {
    std::vector<cplx> y = a.apply(a.apply(x));
    rayleigh = std::real(vec_dot(x, y));  // Rayleigh quotient of A^2, real for Hermitian A
    double rs = 0.0;
    for (int i = 0; i < n; ++i) rs += std::norm(y[i] - rayleigh * x[i]);
    residual = std::sqrt(rs);
    const double ynorm = vec_norm(y);
    if (ynorm == 0.0) {  // A^2 x = 0: x is in the kernel
      rayleigh = 0.0;
      residual = 0.0;
      break;
    }
    for (int i = 0; i < n; ++i) x[i] = y[i] / ynorm;
    if (prev >= 0.0 && std::abs(rayleigh - prev) <= 1e-10 * std::max(rayleigh, 1e-30)) break;
    prev = rayleigh;
  }
  rayleigh = std::max(rayleigh, 0.0);
  nb.two_norm_lower = std::sqrt(rayleigh);
  nb.two_norm_upper = std::min(nb.one_norm, std::sqrt(rayleigh + residual) + 1e-14);
  nb.two_norm_lower = std::min(nb.two_norm_lower, nb.two_norm_upper);
  return nb;
}

ValidationReport validate(const SparseHermitianMatrix& a) {
  ValidationReport r;
  r.hermitian = a.general().is_hermitian();
  r.norms = two_norm_bounds(a);
  r.stable = r.norms.two_norm_upper <= 1.0 + 1e-9;
  r.sparsity = a.sparsity();
  return r;
}

ScaledHermitian scale_to_contraction(const SparseHermitianMatrix& a, double c) {
  if (!(c > 0.0)) throw MethodConstraintError("norm bound C must be positive");
  const double n1 = a.one_norm();
  if (c < n1 * (1.0 - 1e-12))
    throw MethodConstraintError("norm bound C is below the one-norm of the matrix");
  if (c == 1.0) return {a, 1.0};
  return {a.scaled(c), c};
}

}  // namespace qpow
