// Statevector construction of the quantum walk. Registers: two position
// registers with n+2 levels each (0..n+1; register-1 level 0 is padding,
// register-2 uses both 0 and n+1), plus a two-level coin. The walk operator
// is W = (I x I x sigma_z) V' S V (V' the adjoint of V): the coin-0 sector
// of W^m acts as the Chebyshev polynomial T_m(A).
//
// States psi in C^n embed into register 1 at levels 1..n with registers
// 2 and the coin at 0.
#pragma once

#include <cstdint>
#include <vector>

#include "qpow/chebyshev.hpp"
#include "qpow/kernels.hpp"
#include "qpow/sparse.hpp"

namespace qpow {

struct WalkSpace {
  int n = 0;       // matrix dimension
  int levels = 0;  // n + 2

  int dim() const { return 2 * levels * levels; }
  int flat(int i, int j, int b) const { return (i * levels + j) * 2 + b; }
  struct Basis {
    int i, j, b;
  };
  Basis unflat(int idx) const {
    return {idx / (2 * levels), (idx / 2) % levels, idx % 2};
  }
};

struct WalkOperators {
  WalkSpace space;
  CMatrix v;  // column preparation unitary
  CMatrix s;  // signed swap
  CMatrix w;  // walk operator
  std::uint64_t completion_seed = 0;
  int sparsity = 0;  // D of the input matrix, for the query cost model
};

struct WalkConfig {
  std::uint64_t completion_seed = 0;
  int cost_factor = kWalkCostFactor;
};

/// Assembles V blockwise (identity on register-1 levels 0 and n+1, a
/// column-preparation unitary V_i elsewhere), S with the sign(A_ii) diagonal
/// case, and W. The unconstrained directions of each V_i are completed by
/// seeded Gram-Schmidt; the coin-0 dynamics are completion independent.
/// Requires ||A||_1 <= 1 + 1e-12 (callers pre-scale).
WalkOperators build_operators(const SparseHermitianMatrix& a, std::uint64_t completion_seed = 0);

/// || P_{b=0} W^m |psi,0,0> - (T_m(A) psi)(x)|0,0> ||_2.
double projected_walk_residual(const WalkOperators& ops, const SparseHermitianMatrix& a,
                               std::span<const cplx> psi, int m);

/// Max-norm unitarity residual ||M'M - I||_max.
double unitarity_residual(const CMatrix& m);

/// Outcome probabilities of the interference test on (W^c)^m |psi,0,0,+>:
/// the coin (x) control measurement yields X = +1 with p_plus, -1 with
/// p_minus, 0 otherwise, and p_plus - p_minus = <psi|T_m(A)|psi>.
struct HadamardProbs {
  double p_plus = 0.0;
  double p_minus = 0.0;
};
HadamardProbs hadamard_probabilities(const WalkOperators& ops, std::span<const cplx> psi, int m);

/// One draw of X_m; charges m walk steps to the ledger. psi must be
/// normalized to 1e-8.
int hadamard_sample(const WalkOperators& ops, std::span<const cplx> psi, int m, Rng& rng,
                    QueryLedger& ledger, int cost_factor = kWalkCostFactor);

/// Estimates <psi|A^t|psi> by sampling an order m from the Chebyshev weight
/// distribution and running the interference test, n = ceil(4/eps'^2) draws
/// with eps' = eps / C^t. Expected walk steps per draw ~ expected_order(t).
/// Draw streams are indexed, so the result is deterministic in seed for any
/// thread count.
EstimateReport sampling_estimate(const SparseHermitianMatrix& a, std::span<const cplx> psi,
                                 int t, double eps, double c_bound, std::uint64_t seed,
                                 const WalkConfig& cfg = {});

/// Weighted-sum-of-walk-powers bundle: V_P prepares sqrt(p_m) amplitudes on
/// an auxiliary register of tau+1 levels plus a flag qubit, W_tau applies
/// W^m per auxiliary level. The block of V_P' W_tau V_P on the (aux,flag) =
/// (0,0) sector is sum_{m<=tau} p_m W^m + tail_weight * I, where tail_weight
/// is the truncated weight mass folded back through the flag branch.
struct LcuOperators {
  WalkSpace space;
  int tau = 0;
  int sparsity = 0;
  std::vector<double> sqrt_p;    // m = 0..tau
  double tail_weight = 0.0;      // beta^2 = 1 - sum_{m<=tau} p_m
  CMatrix vp;                    // 2(tau+1) x 2(tau+1), aux index a = 2m + f
  std::vector<CMatrix> w_pow;    // W^0..W^tau
};

LcuOperators build_lcu_operators(const WalkOperators& ops, const ChebyshevWeights& w, int tau,
                                 std::uint64_t completion_seed = 0);

/// x and the result live on walk (x) aux space, flat index
/// walk_index * 2(tau+1) + (2m + f).
std::vector<cplx> apply_lcu(const LcuOperators& lcu, std::span<const cplx> x);

/// The (aux,flag)=(0,0) block of V_P' W_tau V_P as a dense walk-space
/// operator, computed by applying the bundle to basis columns.
CMatrix lcu_projected_block(const LcuOperators& lcu);

enum class LcuMode { exact, sampled };

/// Estimates <psi|A^t|psi> through the interference test around the
/// controlled bundle, with tau from truncation_plan(t, eps'/2) capped at t
/// and the known tail_weight bias subtracted. In exact mode the observable
/// is read from the statevector and the ledger carries the analytic
/// amplitude-estimation budget ceil(1/eps_est) * tau walk steps; in sampled
/// mode outcomes are drawn and steps are counted.
EstimateReport lcu_estimate(const SparseHermitianMatrix& a, std::span<const cplx> psi, int t,
                            double eps, double c_bound, LcuMode mode, std::uint64_t seed,
                            const WalkConfig& cfg = {});

}  // namespace qpow
