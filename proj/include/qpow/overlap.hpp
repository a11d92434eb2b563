// Reduction of v'A^t u to state overlaps <psi|A^t|psi> via the rank-two
// Hermitian parts of u v' + v u', the method drivers combining the pieces,
// and the classical baselines (repeated sparse matvec, Monte Carlo chain
// simulation).
#pragma once

#include <array>
#include <string>
#include <vector>

#include "qpow/sparse.hpp"
#include "qpow/walk.hpp"

namespace qpow {

/// Eigen-structure of uv' + vu' (real part) and i(vu' - uv') (imaginary
/// part), restricted to span{u, v}:
///   Re[v'A^t u] = (lam1 <psi1|A^t|psi1> + lam2 <psi2|A^t|psi2>) / 2
/// and the analogous identity for Im. All |lambda| <= 2 ||u|| ||v||.
struct RankOneDecomposition {
  struct Pair {
    double lambda = 0.0;
    std::vector<cplx> psi;  // unit norm; empty when lambda is exactly absent
  };
  std::array<Pair, 2> real_part;
  std::array<Pair, 2> imag_part;
  double norm_u = 0.0;
  double norm_v = 0.0;
};

/// Solves the 2x2 eigenproblem in an orthonormal basis of span{u, v}.
/// Parallel u, v collapse to one dimension; the second eigenvalue is then 0.
/// Zero vectors throw std::invalid_argument.
RankOneDecomposition rank_one_decompose(std::span<const cplx> u, std::span<const cplx> v);

/// Exact v'A^t u by t sparse matvecs. This is the reference every
/// estimator is tested against.
cplx dense_power_element(const GeneralSparseMatrix& a, std::span<const cplx> u,
                         std::span<const cplx> v, int t);

/// Unbiased v'A^t u for a column-stochastic A: simulates
/// ceil(4 max|v|^2 / eps^2) chain trajectories of length t started from the
/// distribution u and averages the v-payoff of the end state. Requires
/// nonnegative real A with unit column sums and u a probability vector.
EstimateReport montecarlo_stochastic(const GeneralSparseMatrix& a, std::span<const cplx> u,
                                     std::span<const cplx> v, int t, double eps,
                                     std::uint64_t seed);

enum class Method { walk_sample, walk_lcu, fourier, dense, montecarlo };

Method method_from_name(const std::string& name);
std::string method_name(Method m);

struct PowerParams {
  double eps = 0.01;
  double c_bound = 0.0;  // <= 0: use ||A||_1
  std::uint64_t seed = 0;
  LcuMode lcu_mode = LcuMode::exact;
  int cost_factor = kWalkCostFactor;
};

/// Drives one method end to end. Walk methods estimate the four eigen-state
/// overlaps of the scaled matrix to precision eps / (4 ||u|| ||v|| C^t) each
/// and rescale by C^t; the fourier route needs eps / (4 ||u|| ||v||); zero
/// eigenvalues skip estimation. dense and montecarlo bypass the
/// decomposition.
EstimateReport matrix_power_element(const SparseHermitianMatrix& a, std::span<const cplx> u,
                                    std::span<const cplx> v, int t, Method method,
                                    const PowerParams& params);

/// General matrices serve only the classical baselines; walk and fourier
/// methods throw MethodConstraintError (powering a non-Hermitian matrix
/// admits no sublinear-in-t method, so no quantum route is offered).
EstimateReport matrix_power_element(const GeneralSparseMatrix& a, std::span<const cplx> u,
                                    std::span<const cplx> v, int t, Method method,
                                    const PowerParams& params);

}  // namespace qpow
