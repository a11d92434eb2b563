#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qpow/kernels.hpp"

using namespace qpow;

namespace {
std::vector<cplx> random_cvec(size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx{uni(rng), uni(rng)};
  return v;
}
}  // namespace

TEST_CASE("serial and omp matvec agree bitwise") {
  for (int n : {1, 7, 64, 200}) {
    const auto m = random_cvec(static_cast<size_t>(n) * n, 1);
    const auto x = random_cvec(n, 2);
    std::vector<cplx> ys(n), yp(n);
    kern::matvec_serial(m.data(), n, n, x.data(), ys.data());
    kern::matvec_omp(m.data(), n, n, x.data(), yp.data());
    for (int i = 0; i < n; ++i) {
      CHECK(ys[i].real() == yp[i].real());
      CHECK(ys[i].imag() == yp[i].imag());
    }
  }
}

TEST_CASE("serial and omp matmul agree bitwise, including non-square") {
  const int n = 33, k = 41, m = 29;
  const auto a = random_cvec(static_cast<size_t>(n) * k, 3);
  const auto b = random_cvec(static_cast<size_t>(k) * m, 4);
  std::vector<cplx> cs(static_cast<size_t>(n) * m), cp(cs.size());
  kern::matmul_serial(a.data(), b.data(), cs.data(), n, k, m);
  kern::matmul_omp(a.data(), b.data(), cp.data(), n, k, m);
  for (size_t i = 0; i < cs.size(); ++i) {
    CHECK(cs[i].real() == cp[i].real());
    CHECK(cs[i].imag() == cp[i].imag());
  }
}

TEST_CASE("runtime switch falls back to the serial path") {
  kern::set_parallel(false);
  CHECK_FALSE(kern::parallel_enabled());
  CHECK(kern::thread_count() == 1);
  const int n = 16;
  const auto m = random_cvec(static_cast<size_t>(n) * n, 5);
  const auto x = random_cvec(n, 6);
  std::vector<cplx> y1(n), y2(n);
  kern::matvec(m.data(), n, n, x.data(), y1.data());
  kern::set_parallel(true);
  kern::matvec(m.data(), n, n, x.data(), y2.data());
  for (int i = 0; i < n; ++i) CHECK(y1[i] == y2[i]);
}

TEST_CASE("CMatrix identity, adjoint and products") {
  CMatrix a(2, 2);
  a(0, 0) = cplx{1, 2};
  a(0, 1) = cplx{0, -1};
  a(1, 0) = cplx{3, 0};
  a(1, 1) = cplx{0, 0};
  const CMatrix ad = a.adjoint();
  CHECK(ad(0, 0) == cplx{1, -2});
  CHECK(ad(1, 0) == cplx{0, 1});
  const CMatrix i2 = CMatrix::identity(2);
  const CMatrix prod = a * i2;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) CHECK(prod(r, c) == a(r, c));
  CHECK(i2.max_abs_diff_identity() == 0.0);
}
