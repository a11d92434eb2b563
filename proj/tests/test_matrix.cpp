#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <filesystem>

#include "qpow/generators.hpp"
#include "qpow/mmio.hpp"
#include "qpow/overlap.hpp"
#include "qpow/sparse.hpp"
#include "testutil.hpp"

using namespace qpow;

namespace {
SparseHermitianMatrix diag_half() {
  return SparseHermitianMatrix::from_entries(
      2, {{0, 0, cplx{0.5, 0.0}}, {1, 1, cplx{-0.5, 0.0}}});
}
}  // namespace

TEST_CASE("validate: diagonal case") {
  const ValidationReport r = validate(diag_half());
  CHECK(r.hermitian);
  CHECK(r.norms.one_norm == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.stable);
}

TEST_CASE("hermitian constructor rejects asymmetric patterns") {
  CHECK_THROWS_AS(SparseHermitianMatrix::from_entries(2, {{0, 1, cplx{1.0, 0.0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      SparseHermitianMatrix::from_entries(
          2, {{0, 1, cplx{1.0, 0.0}}, {1, 0, cplx{0.5, 0.0}}}),
      std::invalid_argument);
}

TEST_CASE("csr structural validation") {
  CHECK_THROWS_AS(GeneralSparseMatrix::from_csr(2, {0, 2, 2}, {1, 0}, {cplx{1, 0}, cplx{1, 0}}),
                  std::invalid_argument);  // unsorted within a row
  CHECK_THROWS_AS(GeneralSparseMatrix::from_entries(
                      2, {{0, 0, cplx{1, 0}}, {0, 0, cplx{2, 0}}}),
                  std::invalid_argument);  // duplicate
  const double nan = std::nan("");
  CHECK_THROWS_AS(GeneralSparseMatrix::from_entries(1, {{0, 0, cplx{nan, 0}}}),
                  std::invalid_argument);
}

TEST_CASE("two-norm bounds bracket the spectrum of a random Hermitian") {
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    std::vector<double> spec{0.9, -0.8, 0.3, -0.2, 0.5, 0.1, -0.6, 0.7};
    const SparseHermitianMatrix a = testutil::with_spectrum(spec, seed);
    const ValidationReport r = validate(a);
    CHECK(r.stable);
    const Eigen::MatrixXcd d = testutil::to_dense(a);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d);
    const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(r.norms.two_norm_lower <= lmax + 1e-9);
    CHECK(r.norms.two_norm_upper >= lmax - 1e-9);
    CHECK(r.norms.two_norm_upper <= r.norms.one_norm + 1e-12);
    // column-sum oracle for the one-norm
    const double col = d.cwiseAbs().colwise().sum().maxCoeff();
    CHECK(r.norms.one_norm == doctest::Approx(col).epsilon(1e-12));
  }
}

TEST_CASE("one_norm: stochastic ring sums to one") {
  std::vector<Entry> es;
  const int n = 4;
  for (int i = 0; i < n; ++i) {
    es.push_back({(i + 1) % n, i, cplx{0.5, 0.0}});
    es.push_back({(i + n - 1) % n, i, cplx{0.5, 0.0}});
  }
  const auto a = SparseHermitianMatrix::from_entries(n, std::move(es));
  CHECK(a.one_norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("scale_to_contraction") {
  const SparseHermitianMatrix a = diag_half();
  const ScaledHermitian s1 = scale_to_contraction(a, 1.0);
  CHECK(s1.matrix.entry(0, 0) == cplx{0.5, 0.0});
  const ScaledHermitian s2 = scale_to_contraction(a, 2.0);
  CHECK(s2.matrix.one_norm() == doctest::Approx(0.25));
  CHECK_THROWS_AS(scale_to_contraction(a, 0.1), MethodConstraintError);
}

TEST_CASE("gen_random_stable: determinism, feasibility, validation") {
  const auto a = gen_random_stable(4, 4, 0.9, 1);
  const auto b = gen_random_stable(4, 4, 0.9, 1);
  CHECK(a.entries().size() == b.entries().size());
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (size_t i = 0; i < ea.size(); ++i) {
    CHECK(ea[i].row == eb[i].row);
    CHECK(ea[i].col == eb[i].col);
    CHECK(ea[i].value == eb[i].value);
  }
  CHECK(validate(a).stable);
  CHECK(a.one_norm() == doctest::Approx(0.9).epsilon(1e-12));

  const auto tiny = gen_random_stable(1, 1, 0.5, 99);
  CHECK(std::abs(tiny.entry(0, 0)) <= 0.5 + 1e-15);

  CHECK_THROWS_AS(gen_random_stable(3, 4, 0.9, 0), std::invalid_argument);

  // sparsity bound respected
  const auto c = gen_random_stable(16, 3, 0.5, 7);
  CHECK(c.sparsity() <= 3);
}

TEST_CASE("hermiticity round-trip for generated matrices") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto a = gen_random_stable(10, 4, 0.8, seed);
    CHECK(a.general().is_hermitian());
  }
}

TEST_CASE("parity chain matches hand-powered small cases") {
  {
    const auto inst = gen_parity_chain({1});
    CHECK(dense_power_element(inst.a, inst.u, inst.v, 1) == cplx{-1.0, 0.0});
  }
  {
    const auto inst = gen_parity_chain({0, 0});
    CHECK(dense_power_element(inst.a, inst.u, inst.v, 2) == cplx{1.0, 0.0});
  }
  {
    const auto inst = gen_parity_chain({1, 0, 1});
    CHECK(dense_power_element(inst.a, inst.u, inst.v, 3) == cplx{1.0, 0.0});
  }
  CHECK_THROWS_AS(gen_parity_chain({}), std::invalid_argument);
}

TEST_CASE("parity chain structure: one nonzero per column") {
  const auto inst = gen_parity_chain({1, 0, 1, 1});
  const Eigen::MatrixXcd d = testutil::to_dense(inst.a);
  for (int c = 0; c < d.cols(); ++c) {
    int nnz = 0;
    for (int r = 0; r < d.rows(); ++r) nnz += d(r, c) != cplx{0.0, 0.0};
    CHECK(nnz == 1);
  }
  CHECK(inst.a.sparsity() == 1);
}

TEST_CASE("irreducible chain: stochastic, linear in delta, connected") {
  const std::vector<int> bits{1, 0, 1};
  const double delta = 1e-4;
  const auto ad = gen_parity_chain_irreducible(bits, delta);
  const Eigen::MatrixXcd d = testutil::to_dense(ad);
  for (int c = 0; c < d.cols(); ++c)
    CHECK(std::abs(d.col(c).sum().real() - 1.0) <= 1e-14);

  // A_delta - A = delta * B entrywise
  const auto a = gen_parity_chain({1, 0, 1}).a;
  const auto b = parity_chain_perturbation(bits);
  const Eigen::MatrixXcd diff = d - testutil::to_dense(a) - delta * testutil::to_dense(b);
  CHECK(diff.cwiseAbs().maxCoeff() <= 1e-16);

  CHECK(strongly_connected(ad));
  // The unperturbed even-parity chain splits into two spin sheets.
  CHECK_FALSE(strongly_connected(a));

  CHECK_THROWS_AS(gen_parity_chain_irreducible(bits, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gen_parity_chain_irreducible(bits, 1.0), std::invalid_argument);
}

TEST_CASE("ledger walk-step charge") {
  QueryLedger led;
  led.charge_walk_steps(1, 3);
  CHECK(led.calls_of == 12);
  CHECK(led.calls_oa == 12);
  led.charge_walk_steps(0, 3);
  CHECK(led.calls_of == 12);
  QueryLedger l2;
  l2.charge_walk_steps(5, 3);
  CHECK(l2.calls_of == 5 * 12);
  led.merge(l2);
  CHECK(led.calls_of == 6 * 12);
}

TEST_CASE("matrix market round trip: hermitian and general") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qpow_mmio_test";
  fs::create_directories(dir);

  const auto a = gen_random_stable(6, 3, 0.7, 3);
  const std::string hpath = (dir / "h.mtx").string();
  write_matrix_market(hpath, a);
  const MatrixFile mf = read_matrix_market(hpath);
  CHECK(mf.hermitian);
  const SparseHermitianMatrix back = hermitian_from_file(mf);
  for (const Entry& e : a.entries()) CHECK(back.entry(e.row, e.col) == e.value);

  const auto p = gen_parity_chain({1, 1, 0});
  const std::string gpath = (dir / "g.mtx").string();
  write_matrix_market(gpath, p.a);
  const GeneralSparseMatrix gback = general_from_file(read_matrix_market(gpath));
  for (const Entry& e : p.a.entries()) CHECK(gback.entry(e.row, e.col) == e.value);

  const std::string vpath = (dir / "v.txt").string();
  write_vector(vpath, p.v);
  const std::vector<cplx> vback = read_vector(vpath);
  REQUIRE(vback.size() == p.v.size());
  for (size_t i = 0; i < vback.size(); ++i) CHECK(vback[i] == p.v[i]);

  CHECK(files_digest_hex({hpath}) == files_digest_hex({hpath}));
  CHECK(files_digest_hex({hpath}) != files_digest_hex({gpath}));

  CHECK_THROWS_AS(read_matrix_market((dir / "absent.mtx").string()), std::runtime_error);

  // hermitian-typed files must store the lower triangle
  const std::string bad = (dir / "bad.mtx").string();
  {
    std::ofstream out(bad);
    out << "%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n1 2 1.0 0.0\n";
  }
  CHECK_THROWS_AS(hermitian_from_file(read_matrix_market(bad)), std::invalid_argument);
  fs::remove_all(dir);
}
