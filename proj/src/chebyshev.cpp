#include "qpow/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpow {

ChebyshevWeights weights(int t) {
  if (t < 0) throw std::invalid_argument("power t must be non-negative");
  ChebyshevWeights w;
  w.t = t;
  w.p.assign(t + 1, 0.0);
  if (t == 0) {
    w.p[0] = 1.0;
    return w;
  }

  // Anchor at the smallest supported order, then walk ratios outward.
  // k(m) = (t - m) / 2 indexes the binomial coefficient C(t, k).
  const int m0 = t % 2;
  double anchor;
  if (m0 == 0) {
    // p_0 = C(t, t/2) / 2^t
    anchor = std::exp(std::lgamma(t + 1.0) - 2.0 * std::lgamma(t / 2 + 1.0) -
                      t * std::log(2.0));
  } else {
    // p_1 = C(t, (t-1)/2) / 2^(t-1)
    anchor = std::exp(std::lgamma(t + 1.0) - std::lgamma((t - 1) / 2 + 1.0) -
                      std::lgamma((t + 1) / 2 + 1.0) - (t - 1) * std::log(2.0));
  }
  w.p[m0] = anchor;
  double cur = anchor;
  for (int m = m0 + 2; m <= t; m += 2) {
    const int k = (t - m + 2) / 2;  // k of the previous order m-2
    double ratio = static_cast<double>(k) / static_cast<double>(t - k + 1);
    if (m == 2 && m0 == 0) ratio *= 2.0;  // m = 0 carries 2^-t, the rest 2^-(t-1)
    cur *= ratio;
    w.p[m] = cur;
  }

  double sum = 0.0;
  for (double v : w.p) sum += v;
  for (double& v : w.p) v /= sum;
  return w;
}

int sample_order(const ChebyshevWeights& w, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double u = uni(rng);
  double acc = 0.0;
  const int m0 = w.t % 2;
  for (int m = m0; m <= w.t; m += 2) {
    acc += w.p[m];
    if (u < acc) return m;
  }
  return w.t;
}

double expected_order(const ChebyshevWeights& w) {
  double s = 0.0;
  for (int m = 0; m <= w.t; ++m) s += m * w.p[m];
  return s;
}

double expected_order(int t) { return expected_order(weights(t)); }

std::vector<cplx> apply_chebyshev(const SparseHermitianMatrix& a, std::span<const cplx> psi,
                                  int m) {
  if (static_cast<int>(psi.size()) != a.dim())
    throw std::invalid_argument("dimension mismatch between matrix and state");
  if (m < 0) throw std::invalid_argument("order m must be non-negative");
  std::vector<cplx> prev(psi.begin(), psi.end());  // T_0 psi
  if (m == 0) return prev;
  std::vector<cplx> cur = a.apply(psi);  // T_1 psi
  for (int k = 1; k < m; ++k) {
    std::vector<cplx> next = a.apply(cur);
    for (size_t i = 0; i < next.size(); ++i) next[i] = 2.0 * next[i] - prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

double chebyshev_scalar(double x, int m) {
  double prev = 1.0;
  if (m == 0) return prev;
  double cur = x;
  for (int k = 1; k < m; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double truncated_power_scalar(const ChebyshevWeights& w, double x, int cutoff) {
  cutoff = std::min(cutoff, w.t);
  double tprev = 1.0, tcur = x;
  double acc = w.p[0] * tprev;
  if (cutoff >= 1) acc += w.p[1] * tcur;
  for (int m = 2; m <= cutoff; ++m) {
    const double tnext = 2.0 * x * tcur - tprev;
    tprev = tcur;
    tcur = tnext;
    acc += w.p[m] * tcur;
  }
  return acc;
}

TruncationPlan truncation_plan(int t, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (t < 0) throw std::invalid_argument("power t must be non-negative");
  TruncationPlan plan;
  plan.c_log = std::max(2.0 * std::log(2.0 / eps), 1.0);
  plan.cutoff = static_cast<int>(std::ceil(std::sqrt(plan.c_log * t)));
  plan.guaranteed_error = eps;
  return plan;
}

}  // namespace qpow
