#include "qpow/fourier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qpow/kernels.hpp"

namespace qpow {

namespace {

constexpr double kPi = std::numbers::pi;

// Angular frequency of mode p: p*pi for the cosine family, (p+1/2)*pi for
// the sine family.
double mode_freq(int p, Parity parity) {
  return parity == Parity::even ? p * kPi : (p + 0.5) * kPi;
}

// Values of the coefficient at every power of matching parity up to t_max,
// index k -> power tau = base + 2k (base = 0 or 1).
//
// Recursion: coeff(tau) = 2(-1)^p tau / a^2 - tau(tau-1)/a^2 * coeff(tau-2).
// An upward step multiplies errors by tau(tau-1)/a^2 and a downward step by
// its inverse, so each direction is contractive on one side of the crossover
// tau_c (largest tau with tau(tau-1) <= a^2). The column is assembled from
// an upward pass below tau_c and a downward pass above it, seeded with zero
// at a start power where the accumulated damping is below 1e-18; the two
// passes must agree at the seam.
void coeff_column_into(int p, Parity parity, int t_max, std::vector<double>& col) {
  const double a = mode_freq(p, parity);
  const double a2 = a * a;
  const double sgn = (p % 2 == 0) ? 1.0 : -1.0;
  const int base = parity == Parity::even ? 0 : 1;
  const int count = (t_max - base) / 2 + 1;
  col.assign(count, 0.0);

  if (parity == Parity::even && p == 0) {
    // DC mode of the period-2 even extension: integral of x^tau on [0,1].
    for (int k = 0; k < count; ++k) col[k] = 1.0 / (2 * k + 1.0);
    return;
  }

  const double base_val = (parity == Parity::even) ? 0.0 : sgn * 2.0 / a2;
  col[0] = base_val;
  if (count == 1) return;

  int tau_c = static_cast<int>(std::floor(0.5 * (1.0 + std::sqrt(1.0 + 4.0 * a2))));
  if ((tau_c - base) % 2 != 0) tau_c -= 1;
  tau_c = std::clamp(tau_c, base, t_max);

  double cur_up = base_val;
  for (int tau = base + 2; tau <= tau_c; tau += 2) {
    cur_up = (2.0 * sgn * tau - tau * (tau - 1.0) * cur_up) / a2;
    col[(tau - base) / 2] = cur_up;
  }
  if (tau_c >= t_max) return;

  // One mildly expansive extra step gives a seam value to check against.
  const double tau_s = tau_c + 2.0;
  const double up_seam = (2.0 * sgn * tau_s - tau_s * (tau_s - 1.0) * cur_up) / a2;

  double damping = 1.0;
  int start = t_max + 2 - ((t_max - base) % 2);  // parity-matching, > t_max
  while (damping > 1e-18) {
    damping *= a2 / (start * (start - 1.0));
    start += 2;
  }
  start += 2;  // margin
  double cur = 0.0;  // seed
  for (int tau = start; tau - 2 > tau_c; tau -= 2) {
    cur = (2.0 * sgn * tau - a2 * cur) / (tau * (tau - 1.0));
    const int below = tau - 2;
    if (below <= t_max) col[(below - base) / 2] = cur;
  }
  if (std::abs(cur - up_seam) > 1e-8 * std::max(1.0, std::abs(cur)))
    throw std::runtime_error("fourier coefficient recursion: seam mismatch between passes");
}

std::vector<double> coeff_column(int p, Parity parity, int t_max) {
  std::vector<double> col;
  coeff_column_into(p, parity, t_max, col);
  return col;
}

void require_normalized(std::span<const cplx> psi) {
  if (std::abs(vec_norm(psi) - 1.0) > 1e-8)
    throw MethodConstraintError("state must be normalized");
}

struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<double> weights;  // |<phi_k|psi>|^2
};

Spectrum spectral_weights(const SparseHermitianMatrix& a, std::span<const cplx> psi) {
  const int n = a.dim();
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
  for (const Entry& e : a.entries()) dense(e.row, e.col) = e.value;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Spectrum sp;
  sp.eigenvalues.resize(n);
  sp.weights.resize(n);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = psi[i];
  const Eigen::VectorXcd proj = es.eigenvectors().adjoint() * v;
  for (int k = 0; k < n; ++k) {
    sp.eigenvalues[k] = es.eigenvalues()(k);
    sp.weights[k] = std::norm(proj(k));
    if (std::abs(sp.eigenvalues[k]) > 1.0 + 1e-9)
      throw MethodConstraintError("matrix is not stable: an eigenvalue exceeds 1 in magnitude");
  }
  return sp;
}

}  // namespace

FourierCoefficients coefficients(int t, int n_h) {
  if (t < 1) throw std::invalid_argument("power t must be at least 1");
  if (n_h < 0) throw std::invalid_argument("harmonic count must be non-negative");
  FourierCoefficients fc;
  fc.t = t;
  fc.parity = (t % 2 == 0) ? Parity::even : Parity::odd;
  fc.coeffs.resize(n_h + 1);
  for (int p = 0; p <= n_h; ++p) fc.coeffs[p] = coeff_column(p, fc.parity, t).back();
  fc.l1 = 0.0;
  for (double c : fc.coeffs) fc.l1 += std::abs(c);
  return fc;
}

double coefficient_tail_bound(int t, int n) {
  if (n * kPi <= t) throw std::invalid_argument("tail bound needs n > t/pi");
  return std::log((n * kPi + t) / (n * kPi - t)) / kPi;
}

HarmonicPlan harmonics_needed(int t, double eps) {
  if (t < 1) throw std::invalid_argument("power t must be at least 1");
  if (!(eps > 0.0 && eps < 2.0 / kPi))
    throw std::invalid_argument("eps must lie in (0, 2/pi)");
  HarmonicPlan plan;
  plan.n_h = static_cast<int>(std::ceil(t / (kPi * std::tanh(kPi * eps / 2.0))));
  plan.guaranteed_error = eps;
  plan.bound_value = coefficient_tail_bound(t, plan.n_h);
  return plan;
}

double series_eval(const FourierCoefficients& fc, double x) {
  double acc = 0.0;
  for (size_t p = 0; p < fc.coeffs.size(); ++p) {
    const double ang = mode_freq(static_cast<int>(p), fc.parity) * x;
    acc += fc.coeffs[p] * (fc.parity == Parity::even ? std::cos(ang) : std::sin(ang));
  }
  return acc;
}

cplx evolution_overlap(const SparseHermitianMatrix& a, std::span<const cplx> psi, int n) {
  require_normalized(psi);
  const Spectrum sp = spectral_weights(a, psi);
  cplx acc{0.0, 0.0};
  for (size_t k = 0; k < sp.eigenvalues.size(); ++k)
    acc += sp.weights[k] * std::polar(1.0, kPi * n * sp.eigenvalues[k] / 2.0);
  return acc;
}

std::vector<cplx> power_overlaps(const SparseHermitianMatrix& a, std::span<const cplx> psi,
                                 int t, double eps, QueryLedger* ledger) {
  if (t < 0) throw std::invalid_argument("power t must be non-negative");
  require_normalized(psi);
  std::vector<cplx> out(t + 1, cplx{0.0, 0.0});
  out[0] = 1.0;
  if (t == 0) return out;

  const HarmonicPlan plan = harmonics_needed(t, eps / 2.0);
  const int ph = plan.n_h;
  const Spectrum sp = spectral_weights(a, psi);

  // Harmonic overlaps, folded by conjugate symmetry:
  //   cos part[p] = Re <psi|e^{i pi (2p) A/2}|psi>,
  //   sin part[p] = Im <psi|e^{i pi (2p+1) A/2}|psi>.
  // One complex rotor per eigenvalue; drift stays ~ph * 1e-16.
  std::vector<double> cos_part(ph + 1, 0.0), sin_part(ph + 1, 0.0);
  for (size_t k = 0; k < sp.eigenvalues.size(); ++k) {
    const double w = sp.weights[k];
    const cplx step = std::polar(1.0, kPi * sp.eigenvalues[k]);
    const cplx half = std::polar(1.0, kPi * sp.eigenvalues[k] / 2.0);
    cplx rot{1.0, 0.0};  // e^{i p pi lambda}
    for (int p = 0; p <= ph; ++p) {
      cos_part[p] += w * rot.real();
      sin_part[p] += w * (rot * half).imag();
      rot *= step;
    }
  }

  std::vector<double> acc(t + 1, 0.0);
  std::vector<double> ec, oc;  // scratch, reused across harmonics
  for (int p = 0; p <= ph; ++p) {
    coeff_column_into(p, Parity::even, t, ec);
    for (size_t k = 0; k < ec.size(); ++k) {
      const int tau = static_cast<int>(2 * k);
      if (tau >= 1 && tau <= t) acc[tau] += ec[k] * cos_part[p];
    }
    coeff_column_into(p, Parity::odd, t, oc);
    for (size_t k = 0; k < oc.size(); ++k) {
      const int tau = static_cast<int>(2 * k + 1);
      if (tau <= t) acc[tau] += oc[k] * sin_part[p];
    }
  }
  for (int tau = 1; tau <= t; ++tau) out[tau] = cplx{acc[tau], 0.0};

  if (ledger) {
    // Modeled evolution budget: D * |n| per harmonic e^{i pi n A / 2},
    // n = -(2 ph + 1) .. (2 ph + 1).
    const std::uint64_t m = 2 * static_cast<std::uint64_t>(ph) + 1;
    const std::uint64_t calls = m * (m + 1) * static_cast<std::uint64_t>(a.sparsity());
    ledger->charge(calls, calls);
  }
  return out;
}

}  // namespace qpow
