// Fourier-series route to matrix powers: x^t expanded in cos(p pi x) (even t)
// or sin((2p+1) pi x / 2) (odd t) on the continuous periodic extension, the
// matrix power recovered from evolution overlaps <psi|exp(i pi n A / 2)|psi>.
#pragma once

#include <vector>

#include "qpow/sparse.hpp"

namespace qpow {

enum class Parity { even, odd };

/// Coefficients c_p(t) (even t) or s_p(t) (odd t) for p = 0..n_h.
/// Signs alternate: (-1)^p coeff_p >= 0; the l1 norm approaches 1 from
/// below; |coeff_p| <= 2/(t+1) (the p = 0 even coefficient carries the
/// half-weight DC normalization 1/(t+1)).
struct FourierCoefficients {
  int t = 0;
  Parity parity = Parity::even;
  std::vector<double> coeffs;
  double l1 = 0.0;
};

/// The two-term recursion in t, run per p in its contractive direction:
/// upward from the parity base when a^2 >= t(t-1) (a = p pi, resp.
/// (p+1/2) pi), otherwise downward from a zero seed placed far enough above
/// t that the seed error is damped below 1e-18. O(n_h * t) work.
/// Requires t >= 1, n_h >= 0.
FourierCoefficients coefficients(int t, int n_h);

struct HarmonicPlan {
  int n_h = 0;
  double guaranteed_error = 0.0;
  double bound_value = 0.0;  // tail bound at n_h, <= guaranteed_error
};

/// n_h = ceil(t / (pi tanh(pi eps / 2))); the tail beyond n_h is bounded by
/// (1/pi) log((n_h pi + t)/(n_h pi - t)) <= eps. Requires t >= 1 and
/// 0 < eps < 2/pi.
HarmonicPlan harmonics_needed(int t, double eps);

/// Tail bound (1/pi) log((N pi + t)/(N pi - t)), valid for N > t/pi.
double coefficient_tail_bound(int t, int n);

/// Evaluates the truncated series at x in [-1, 1].
double series_eval(const FourierCoefficients& fc, double x);

/// <psi|exp(i pi n A / 2)|psi> by dense Hermitian eigendecomposition.
/// psi must be normalized.
cplx evolution_overlap(const SparseHermitianMatrix& a, std::span<const cplx> psi, int n);

/// <psi|A^tau|psi> for every tau in 0..t, each accurate to eps, from one
/// eigendecomposition shared by all harmonics. The modeled simulation cost
/// (D * |n| oracle calls per harmonic, all harmonics up to the plan for
/// (t, eps/2)) is charged to *ledger when given, flagged analytic by the
/// caller. Requires eps/2 in (0, 2/pi).
std::vector<cplx> power_overlaps(const SparseHermitianMatrix& a, std::span<const cplx> psi,
                                 int t, double eps, QueryLedger* ledger = nullptr);

}  // namespace qpow
