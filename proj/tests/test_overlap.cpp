#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "qpow/generators.hpp"
#include "qpow/overlap.hpp"
#include "testutil.hpp"

using namespace qpow;

namespace {

Eigen::MatrixXcd real_part_matrix(std::span<const cplx> u, std::span<const cplx> v) {
  const Eigen::VectorXcd ue = testutil::to_eigen(u), ve = testutil::to_eigen(v);
  return ue * ve.adjoint() + ve * ue.adjoint();
}

Eigen::MatrixXcd imag_part_matrix(std::span<const cplx> u, std::span<const cplx> v) {
  const Eigen::VectorXcd ue = testutil::to_eigen(u), ve = testutil::to_eigen(v);
  return cplx{0.0, 1.0} * (ve * ue.adjoint() - ue * ve.adjoint());
}

double reconstruction_residual(const Eigen::MatrixXcd& target,
                               const std::array<RankOneDecomposition::Pair, 2>& pairs) {
  Eigen::MatrixXcd rec = Eigen::MatrixXcd::Zero(target.rows(), target.cols());
  for (const auto& p : pairs) {
    if (p.psi.empty()) continue;
    const Eigen::VectorXcd v = testutil::to_eigen(p.psi);
    rec += p.lambda * (v * v.adjoint());
  }
  return (rec - target).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("decompose: orthonormal pair") {
  const std::vector<cplx> u{cplx{1, 0}, cplx{0, 0}};
  const std::vector<cplx> v{cplx{0, 0}, cplx{1, 0}};
  const RankOneDecomposition dec = rank_one_decompose(u, v);
  CHECK(dec.real_part[0].lambda == doctest::Approx(1.0));
  CHECK(dec.real_part[1].lambda == doctest::Approx(-1.0));
  CHECK(dec.imag_part[0].lambda == doctest::Approx(1.0));
  CHECK(dec.imag_part[1].lambda == doctest::Approx(-1.0));
  CHECK(reconstruction_residual(real_part_matrix(u, v), dec.real_part) <= 1e-12);
  CHECK(reconstruction_residual(imag_part_matrix(u, v), dec.imag_part) <= 1e-12);
}

TEST_CASE("decompose: parallel pair") {
  const std::vector<cplx> u{cplx{1, 0}, cplx{0, 0}};
  const RankOneDecomposition dec = rank_one_decompose(u, u);
  CHECK(dec.real_part[0].lambda == doctest::Approx(2.0));
  CHECK(dec.real_part[1].lambda == doctest::Approx(0.0));
  CHECK(std::abs(dec.real_part[0].psi[0]) == doctest::Approx(1.0));
  CHECK(dec.imag_part[0].lambda == doctest::Approx(0.0));
  CHECK(dec.imag_part[1].lambda == doctest::Approx(0.0));
}

TEST_CASE("decompose: zero vectors rejected") {
  const std::vector<cplx> z{cplx{0, 0}};
  const std::vector<cplx> u{cplx{1, 0}};
  CHECK_THROWS_AS(rank_one_decompose(z, u), std::invalid_argument);
}

TEST_CASE("decompose: random pairs reconstruct and respect the bound") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = make_rng(seed, 500);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.2, 3.0);
    const int n = 8;
    std::vector<cplx> u(n), v(n);
    for (auto& z : u) z = cplx{gauss(rng), gauss(rng)};
    for (auto& z : v) z = cplx{gauss(rng), gauss(rng)};
    const double su = scale(rng), sv = scale(rng);
    for (auto& z : u) z *= su;
    for (auto& z : v) z *= sv;

    const RankOneDecomposition dec = rank_one_decompose(u, v);
    const double bound = 2.0 * dec.norm_u * dec.norm_v;
    for (const auto& p : dec.real_part) CHECK(std::abs(p.lambda) <= bound * (1 + 1e-12));
    for (const auto& p : dec.imag_part) CHECK(std::abs(p.lambda) <= bound * (1 + 1e-12));
    const double scale_abs = std::max(1.0, bound);
    CHECK(reconstruction_residual(real_part_matrix(u, v), dec.real_part) <= 1e-12 * scale_abs);
    CHECK(reconstruction_residual(imag_part_matrix(u, v), dec.imag_part) <= 1e-12 * scale_abs);

    // orthonormality of the eigenvectors
    for (const auto& part : {dec.real_part, dec.imag_part}) {
      REQUIRE(!part[0].psi.empty());
      REQUIRE(!part[1].psi.empty());
      CHECK(std::abs(vec_norm(part[0].psi) - 1.0) <= 1e-12);
      CHECK(std::abs(vec_norm(part[1].psi) - 1.0) <= 1e-12);
      CHECK(std::abs(vec_dot(part[0].psi, std::span<const cplx>(part[1].psi))) <= 1e-12);
    }
  }
}

TEST_CASE("overlap identity against dense powering") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const int n = 8;
    const auto a = gen_random_stable(n, 4, 0.9, 700 + seed);
    const Eigen::MatrixXcd dense = testutil::to_dense(a);
    Rng rng = make_rng(seed, 9);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> u(n), v(n);
    for (auto& z : u) z = cplx{gauss(rng), gauss(rng)};
    for (auto& z : v) z = cplx{gauss(rng), gauss(rng)};

    const RankOneDecomposition dec = rank_one_decompose(u, v);
    for (int t : {0, 1, 3, 10}) {
      const cplx truth = testutil::dense_power_element(dense, u, v, t);
      double re = 0.0, im = 0.0;
      auto overlap = [&](const RankOneDecomposition::Pair& p) {
        if (p.psi.empty() || p.lambda == 0.0) return 0.0;
        return std::real(testutil::dense_power_element(dense, p.psi, p.psi, t));
      };
      for (const auto& p : dec.real_part) re += 0.5 * p.lambda * overlap(p);
      for (const auto& p : dec.imag_part) im += 0.5 * p.lambda * overlap(p);
      CHECK(std::abs(cplx{re, im} - truth) <= 1e-10 * std::max(1.0, std::abs(truth)));
    }
  }
}

TEST_CASE("dense_power_element basics") {
  const auto p = gen_parity_chain({1, 0, 1});
  CHECK(dense_power_element(p.a, p.u, p.v, 0) == vec_dot(p.v, std::span<const cplx>(p.u)));
  // nilpotent-style shift: strictly upper 3x3 cycle-free chain
  const auto shift = GeneralSparseMatrix::from_entries(
      3, {{0, 1, cplx{1, 0}}, {1, 2, cplx{1, 0}}});
  const std::vector<cplx> e1{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}};
  const std::vector<cplx> e3{cplx{0, 0}, cplx{0, 0}, cplx{1, 0}};
  CHECK(dense_power_element(shift, e1, e3, 3) == cplx{0.0, 0.0});
  CHECK(dense_power_element(shift, e3, e1, 2) == cplx{1.0, 0.0});
  // single matvec
  const std::vector<cplx> e2{cplx{0, 0}, cplx{1, 0}, cplx{0, 0}};
  CHECK(dense_power_element(shift, e2, e1, 1) == cplx{1.0, 0.0});
}

TEST_CASE("montecarlo: deterministic parity chain") {
  const auto p = gen_parity_chain({1, 0, 1});
  const EstimateReport rep = montecarlo_stochastic(p.a, p.u, p.v, 3, 0.1, 4);
  CHECK(rep.value == cplx{1.0, 0.0});
  CHECK(rep.std_error == 0.0);
  CHECK(rep.samples >= 1);
}

TEST_CASE("montecarlo: t=0 reduces to the start-state payoff") {
  const auto p = gen_parity_chain({1, 1});
  const EstimateReport rep = montecarlo_stochastic(p.a, p.u, p.v, 0, 0.1, 9);
  CHECK(rep.value == vec_dot(p.v, std::span<const cplx>(p.u)));
}

TEST_CASE("montecarlo: perturbed chain within four standard errors") {
  const std::vector<int> bits{1, 0, 1};
  const auto ad = gen_parity_chain_irreducible(bits, 1e-4);
  const auto p = gen_parity_chain(bits);
  const EstimateReport rep = montecarlo_stochastic(ad, p.u, p.v, 3, 0.008, 13);
  const cplx truth = dense_power_element(ad, p.u, p.v, 3);
  CHECK(std::abs(rep.value - truth) <= std::max(4 * rep.std_error, 1e-4));
  CHECK(rep.samples == 62500);  // ceil(4 max|v|^2 / eps^2)
}

TEST_CASE("montecarlo: rejects non-stochastic input") {
  const auto a = GeneralSparseMatrix::from_entries(2, {{0, 0, cplx{0.5, 0.0}}});
  const std::vector<cplx> u{cplx{1, 0}, cplx{0, 0}};
  CHECK_THROWS_AS(montecarlo_stochastic(a, u, u, 1, 0.1, 0), MethodConstraintError);
  const auto p = gen_parity_chain({1});
  const std::vector<cplx> bad_u{cplx{0.5, 0.0}, cplx{0.2, 0.0}};
  CHECK_THROWS_AS(montecarlo_stochastic(p.a, bad_u, p.v, 1, 0.1, 0), MethodConstraintError);
}

TEST_CASE("montecarlo coverage over seeded runs") {
  const std::vector<int> bits{1, 1, 0, 1};
  const auto ad = gen_parity_chain_irreducible(bits, 5e-3);
  const auto p = gen_parity_chain(bits);
  const cplx truth = dense_power_element(ad, p.u, p.v, 4);
  int covered = 0;
  const int runs = 200;
  for (int r = 0; r < runs; ++r) {
    const EstimateReport rep = montecarlo_stochastic(ad, p.u, p.v, 4, 0.08, 1000 + r);
    if (std::abs(rep.value - truth) <= std::max(4 * rep.std_error, 1e-12)) ++covered;
  }
  CHECK(covered >= 190);  // 95%
}

TEST_CASE("matrix_power_element: t=0 gives v'u for every method family") {
  const auto a = gen_random_stable(5, 3, 0.8, 55);
  const auto u = testutil::random_state(5, 1);
  const auto v = testutil::random_state(5, 2);
  PowerParams params;
  params.eps = 0.05;
  const cplx want = vec_dot(v, std::span<const cplx>(u));
  for (Method m : {Method::dense, Method::walk_sample, Method::walk_lcu, Method::fourier}) {
    const EstimateReport rep = matrix_power_element(a, u, v, 0, m, params);
    CHECK(std::abs(rep.value - want) <= 1e-9);
  }
}

TEST_CASE("matrix_power_element: fourier on the diagonal example") {
  const auto a = SparseHermitianMatrix::from_entries(
      2, {{0, 0, cplx{0.5, 0.0}}, {1, 1, cplx{-0.5, 0.0}}});
  const std::vector<cplx> e1{cplx{1, 0}, cplx{0, 0}};
  PowerParams params;
  params.eps = 0.01;
  const EstimateReport rep = matrix_power_element(a, e1, e1, 3, Method::fourier, params);
  CHECK(std::abs(rep.value - cplx{0.125, 0.0}) <= 0.01);
  CHECK(rep.ledger_analytic);
}

TEST_CASE("matrix_power_element: methods agree on seeded instances") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const int n = 4 + static_cast<int>(seed % 3);
    const auto a = gen_random_stable(n, 3, 0.85, 900 + seed);
    const auto u = testutil::random_state(n, 30 + seed);
    const auto v = testutil::random_state(n, 60 + seed);
    const int t = 3 + static_cast<int>(seed % 4);
    PowerParams params;
    params.eps = 0.02;
    params.seed = seed;
    const cplx truth =
        matrix_power_element(a, u, v, t, Method::dense, params).value;
    const EstimateReport lcu = matrix_power_element(a, u, v, t, Method::walk_lcu, params);
    const EstimateReport fou = matrix_power_element(a, u, v, t, Method::fourier, params);
    CHECK(std::abs(lcu.value - truth) <= 0.02);
    CHECK(std::abs(fou.value - truth) <= 0.02);
    const EstimateReport smp = matrix_power_element(a, u, v, t, Method::walk_sample, params);
    CHECK(std::abs(smp.value - truth) <= std::max(6 * smp.std_error, 0.02));
  }
}

TEST_CASE("matrix_power_element: parallel complex u,v estimates a nonzero imaginary part") {
  const auto a = gen_random_stable(4, 3, 0.8, 77);
  const auto u = testutil::random_state(4, 5);
  std::vector<cplx> v(u.begin(), u.end());
  for (auto& z : v) z *= cplx{0.0, 2.0};  // v = 2i u
  PowerParams params;
  params.eps = 0.02;
  const cplx truth = matrix_power_element(a, u, v, 2, Method::dense, params).value;
  CHECK(std::abs(truth.imag()) > 1e-3);  // genuinely complex
  const EstimateReport fou = matrix_power_element(a, u, v, 2, Method::fourier, params);
  CHECK(std::abs(fou.value - truth) <= 0.02);
}

TEST_CASE("quantum methods refuse general matrices") {
  const auto p = gen_parity_chain({1, 0});
  PowerParams params;
  for (Method m : {Method::walk_sample, Method::walk_lcu, Method::fourier}) {
    CHECK_THROWS_AS(matrix_power_element(p.a, p.u, p.v, 2, m, params), MethodConstraintError);
  }
  // the classical methods accept them
  CHECK(matrix_power_element(p.a, p.u, p.v, 2, Method::dense, params).value ==
        cplx{-1.0, 0.0});
}

TEST_CASE("c-bound below the one-norm is refused") {
  const auto a = gen_random_stable(4, 3, 0.9, 3);
  const auto psi = testutil::random_state(4, 4);
  PowerParams params;
  params.c_bound = 0.1;  // below 0.9
  CHECK_THROWS_AS(matrix_power_element(a, psi, psi, 2, Method::walk_sample, params),
                  MethodConstraintError);
}
