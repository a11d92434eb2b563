// Chebyshev expansion of x^t: the binomial weight distribution p_m, order
// sampling, polynomial application by the three-term recurrence, and the
// sqrt(C t) truncation rule.
#pragma once

#include <vector>

#include "qpow/sparse.hpp"

namespace qpow {

/// x^t = sum_m p_m T_m(x) with p_m a probability distribution supported on
/// m <= t, m == t (mod 2).
struct ChebyshevWeights {
  int t = 0;
  std::vector<double> p;  // indexed by m, 0..t; zero off the parity support

  double at(int m) const { return (m >= 0 && m <= t) ? p[m] : 0.0; }
};

/// Weights from a log-gamma anchor at the central term plus exact ratio
/// updates (2^t overflows doubles near t = 1024), normalized by the
/// computed sum. Requires t >= 0.
ChebyshevWeights weights(int t);

/// Draw m from p_m (inverse CDF over the parity support).
int sample_order(const ChebyshevWeights& w, Rng& rng);

/// sum_m m p_m by direct summation. Scales like ~0.8 sqrt(t).
double expected_order(int t);

double expected_order(const ChebyshevWeights& w);

/// T_m(A) psi via T_0 = I, T_1 = A, T_{k+1} = 2 A T_k - T_{k-1}; m sparse
/// matvecs. A is applied as stored: callers pre-scale so that the spectrum
/// lies in [-1, 1].
std::vector<cplx> apply_chebyshev(const SparseHermitianMatrix& a, std::span<const cplx> psi,
                                  int m);

/// Scalar version of the same recurrence, for grid sweeps.
double chebyshev_scalar(double x, int m);

/// Truncated weighted sum sum_{m<=cutoff} p_m T_m(x).
double truncated_power_scalar(const ChebyshevWeights& w, double x, int cutoff);

struct TruncationPlan {
  int cutoff = 0;            // tau
  double guaranteed_error = 0.0;
  double c_log = 0.0;        // >= 2 ln(2/eps)
};

/// cutoff = ceil(sqrt(c_log * t)) with c_log = max(2 ln(2/eps), 1):
/// |<psi|A^t|psi> - sum_{m<=cutoff} p_m <psi|T_m(A)|psi>| <= eps for stable
/// Hermitian A. Requires 0 < eps < 1.
TruncationPlan truncation_plan(int t, double eps);

}  // namespace qpow
