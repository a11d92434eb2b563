#include "qpow/walk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace qpow {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void require_normalized(std::span<const cplx> psi) {
  if (std::abs(vec_norm(psi) - 1.0) > 1e-8)
    throw MethodConstraintError("state must be normalized");
}

// Seeded Gram-Schmidt: extends `fixed` (orthonormal) by `count` vectors
// orthogonal to all of them, drawn from the given stream. Two projection
// passes keep orthogonality near machine precision.
std::vector<std::vector<cplx>> complete_orthonormal(const std::vector<std::vector<cplx>>& fixed,
                                                    int count, int dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<cplx>> built;
  built.reserve(count);
  while (static_cast<int>(built.size()) < count) {
    std::vector<cplx> cand(dim);
    for (auto& z : cand) z = cplx{gauss(rng), gauss(rng)};
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& f : fixed) {
        const cplx ov = vec_dot(f, cand);
        for (int k = 0; k < dim; ++k) cand[k] -= ov * f[k];
      }
      for (const auto& b : built) {
        const cplx ov = vec_dot(b, cand);
        for (int k = 0; k < dim; ++k) cand[k] -= ov * b[k];
      }
    }
    const double nrm = vec_norm(cand);
    if (nrm < 1e-6) continue;  // unlucky draw, take the next one
    for (auto& z : cand) z /= nrm;
    built.push_back(std::move(cand));
  }
  return built;
}

// Half-phase factor exp(i phi_{k,i} / 2) with the antisymmetric phase
// convention: phi_{k,i} = arg A_{k,i} for k >= i and -arg A_{i,k} for
// k < i. Away from the branch cut this is each entry's own angle; the
// convention pins the k < i half so that the two halves compose to the
// full entry phase even for negative real entries.
cplx half_phase(const cplx& a_ki, bool k_ge_i) {
  const double ang = k_ge_i ? std::arg(a_ki) : -std::arg(std::conj(a_ki));
  return std::polar(1.0, 0.5 * ang);
}

}  // namespace

WalkOperators build_operators(const SparseHermitianMatrix& a, std::uint64_t completion_seed) {
  const int n = a.dim();
  const double n1 = a.one_norm();
  if (n1 > 1.0 + 1e-12)
    throw MethodConstraintError("walk operators need ||A||_1 <= 1; scale the matrix first");

  WalkOperators ops;
  ops.space = WalkSpace{n, n + 2};
  ops.completion_seed = completion_seed;
  ops.sparsity = a.sparsity();
  const WalkSpace& sp = ops.space;
  const int levels = sp.levels;
  const int sub = 2 * levels;  // register-2 (x) coin block size
  const int dim = sp.dim();

  ops.v = CMatrix(dim, dim);
  // Register-1 levels 0 and n+1 pass through.
  for (int j = 0; j < levels; ++j)
    for (int b = 0; b < 2; ++b) {
      ops.v(sp.flat(0, j, b), sp.flat(0, j, b)) = 1.0;
      ops.v(sp.flat(n + 1, j, b), sp.flat(n + 1, j, b)) = 1.0;
    }

  const auto sub_idx = [](int j, int b) { return 2 * j + b; };

  for (int i = 1; i <= n; ++i) {
    // Column i of A read from row i-1 (Hermitian: A_{k,i} = conj(A_{i-1,k})).
    const auto cols = a.row_cols(i - 1);
    const auto vals = a.row_vals(i - 1);

    std::vector<cplx> psi_i(sub, cplx{0.0, 0.0});
    double col_mass = 0.0;
    for (size_t kk = 0; kk < cols.size(); ++kk) {
      const int k = cols[kk];              // 0-based row index of A_{k,i}
      const cplx a_ki = std::conj(vals[kk]);
      const double mag = std::abs(a_ki);
      col_mass += mag;
      psi_i[sub_idx(k + 1, 1)] = std::sqrt(mag) * half_phase(a_ki, k >= i - 1);
    }
    psi_i[sub_idx(n + 1, 1)] = std::sqrt(std::max(0.0, 1.0 - col_mass));
    const double pnorm = vec_norm(psi_i);
    for (auto& z : psi_i) z /= pnorm;  // absorbs the <=1e-12 one-norm slack

    // Fixed images: |psi_i><0,0| and |j,0><j,0| for j = 1..n+1.
    std::vector<std::vector<cplx>> fixed;
    fixed.push_back(psi_i);
    for (int j = 1; j <= n + 1; ++j) {
      std::vector<cplx> e(sub, cplx{0.0, 0.0});
      e[sub_idx(j, 0)] = 1.0;
      fixed.push_back(std::move(e));
    }
    Rng rng = make_rng(completion_seed, static_cast<std::uint64_t>(i));
    const auto completion = complete_orthonormal(fixed, levels, sub, rng);

    CMatrix vi(sub, sub);
    for (int r = 0; r < sub; ++r) vi(r, sub_idx(0, 0)) = psi_i[r];
    for (int j = 1; j <= n + 1; ++j) vi(sub_idx(j, 0), sub_idx(j, 0)) = 1.0;
    for (int j = 0; j < levels; ++j) {
      const auto& img = completion[j];
      for (int r = 0; r < sub; ++r) vi(r, sub_idx(j, 1)) = img[r];
    }

    for (int r = 0; r < sub; ++r)
      for (int c = 0; c < sub; ++c)
        if (vi(r, c) != cplx{0.0, 0.0})
          ops.v(sp.flat(i, r / 2, r % 2), sp.flat(i, c / 2, c % 2)) = vi(r, c);
  }

  ops.s = CMatrix(dim, dim);
  for (int i = 0; i < levels; ++i)
    for (int j = 0; j < levels; ++j) {
      ops.s(sp.flat(i, j, 0), sp.flat(i, j, 0)) = 1.0;
      if (i != j) {
        ops.s(sp.flat(j, i, 1), sp.flat(i, j, 1)) = 1.0;
      } else {
        double sign = 1.0;  // sign(0) := +1; levels 0 and n+1 carry no A entry
        if (i >= 1 && i <= n && a.entry(i - 1, i - 1).real() < 0.0) sign = -1.0;
        ops.s(sp.flat(i, i, 1), sp.flat(i, i, 1)) = sign;
      }
    }

  CMatrix sv = ops.s * ops.v;
  ops.w = ops.v.adjoint() * sv;
  // Coin reflection: +1 on b=0, -1 on b=1.
  for (int r = 0; r < dim; ++r)
    if (r % 2 == 1)
      for (int c = 0; c < dim; ++c) ops.w(r, c) = -ops.w(r, c);
  return ops;
}

double unitarity_residual(const CMatrix& m) {
  return (m.adjoint() * m).max_abs_diff_identity();
}

namespace {

std::vector<cplx> embed_state(const WalkSpace& sp, std::span<const cplx> psi) {
  std::vector<cplx> x(sp.dim(), cplx{0.0, 0.0});
  for (int i = 0; i < sp.n; ++i) x[sp.flat(i + 1, 0, 0)] = psi[i];
  return x;
}

}  // namespace

double projected_walk_residual(const WalkOperators& ops, const SparseHermitianMatrix& a,
                               std::span<const cplx> psi, int m) {
  if (static_cast<int>(psi.size()) != ops.space.n)
    throw std::invalid_argument("state dimension does not match the walk space");
  std::vector<cplx> x = embed_state(ops.space, psi);
  for (int k = 0; k < m; ++k) x = ops.w.apply(x);
  const std::vector<cplx> want = apply_chebyshev(a, psi, m);
  double r2 = 0.0;
  const WalkSpace& sp = ops.space;
  for (int i = 0; i < sp.levels; ++i)
    for (int j = 0; j < sp.levels; ++j) {
      const cplx got = x[sp.flat(i, j, 0)];
      const cplx exp_v = (j == 0 && i >= 1 && i <= sp.n) ? want[i - 1] : cplx{0.0, 0.0};
      r2 += std::norm(got - exp_v);
    }
  return std::sqrt(r2);
}

HadamardProbs hadamard_probabilities(const WalkOperators& ops, std::span<const cplx> psi,
                                     int m) {
  require_normalized(psi);
  const WalkSpace& sp = ops.space;
  std::vector<cplx> s0 = embed_state(sp, psi);
  std::vector<cplx> sm = s0;
  for (int k = 0; k < m; ++k) sm = ops.w.apply(sm);
  HadamardProbs pr;
  for (int idx = 0; idx < sp.dim(); ++idx) {
    if (idx % 2 != 0) continue;  // coin b = 0 only
    pr.p_plus += 0.25 * std::norm(s0[idx] + sm[idx]);
    pr.p_minus += 0.25 * std::norm(s0[idx] - sm[idx]);
  }
  return pr;
}

namespace {

int classify_draw(double u, const HadamardProbs& pr) {
  if (u < pr.p_plus) return 1;
  if (u < pr.p_plus + pr.p_minus) return -1;
  return 0;
}

}  // namespace

int hadamard_sample(const WalkOperators& ops, std::span<const cplx> psi, int m, Rng& rng,
                    QueryLedger& ledger, int cost_factor) {
  const HadamardProbs pr = hadamard_probabilities(ops, psi, m);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  ledger.charge_walk_steps(static_cast<std::uint64_t>(m), ops.sparsity, cost_factor);
  return classify_draw(uni(rng), pr);
}

namespace {

std::uint64_t draw_budget(double eps_prime) {
  const double n = std::ceil(4.0 / (eps_prime * eps_prime));
  if (!(n >= 1.0)) return 1;
  if (n > 1e9)
    throw MethodConstraintError(
        "sample budget exceeds 1e9 draws; lower t, raise eps, or tighten the norm bound");
  return static_cast<std::uint64_t>(n);
}

}  // namespace

EstimateReport sampling_estimate(const SparseHermitianMatrix& a, std::span<const cplx> psi,
                                 int t, double eps, double c_bound, std::uint64_t seed,
                                 const WalkConfig& cfg) {
  const auto t0 = Clock::now();
  if (t < 0) throw std::invalid_argument("power t must be non-negative");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  require_normalized(psi);

  const ScaledHermitian scaled = scale_to_contraction(a, c_bound);
  const double ct = std::pow(c_bound, t);
  const double eps_prime = eps / ct;
  const std::uint64_t n_draws = draw_budget(eps_prime);

  EstimateReport rep;
  rep.method = "walk-sample";
  rep.seed = seed;
  rep.internal_eps = eps_prime;
  rep.samples = n_draws;

  const ChebyshevWeights w = weights(t);
  const WalkOperators ops = build_operators(scaled.matrix, cfg.completion_seed);

  // Phase 1: draw (order, outcome-uniform) pairs from per-draw substreams.
  std::vector<int> m_of(n_draws);
  std::vector<double> u_of(n_draws);
  int max_m = 0;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::uint64_t d = 0; d < n_draws; ++d) {
    Rng rng = make_rng(seed, d);
    m_of[d] = sample_order(w, rng);
    u_of[d] = uni(rng);
    max_m = std::max(max_m, m_of[d]);
  }

  // Probability table for every order up to the largest sampled one.
  std::vector<HadamardProbs> table(max_m + 1);
  {
    const WalkSpace& sp = ops.space;
    std::vector<cplx> s0 = embed_state(sp, psi);
    std::vector<cplx> sm = s0;
    for (int m = 0; m <= max_m; ++m) {
      if (m > 0) sm = ops.w.apply(sm);
      HadamardProbs pr;
      for (int idx = 0; idx < sp.dim(); idx += 2) {
        pr.p_plus += 0.25 * std::norm(s0[idx] + sm[idx]);
        pr.p_minus += 0.25 * std::norm(s0[idx] - sm[idx]);
      }
      table[m] = pr;
    }
  }

  // Phase 2: classify. Integer tallies keep the reduction exact and
  // order-independent.
  std::int64_t n_plus = 0, n_minus = 0;
  std::int64_t total_steps = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : n_plus, n_minus, total_steps) \
    if (kern::parallel_enabled() && n_draws > 4096)
#endif
  for (std::int64_t d = 0; d < static_cast<std::int64_t>(n_draws); ++d) {
    const int x = classify_draw(u_of[d], table[m_of[d]]);
    n_plus += (x == 1);
    n_minus += (x == -1);
    total_steps += m_of[d];
  }

  const double mean = static_cast<double>(n_plus - n_minus) / static_cast<double>(n_draws);
  const double second = static_cast<double>(n_plus + n_minus) / static_cast<double>(n_draws);
  const double var = std::max(0.0, second - mean * mean);
  rep.value = cplx{ct * mean, 0.0};
  rep.std_error = ct * std::sqrt(var / static_cast<double>(n_draws));
  rep.ledger.charge_walk_steps(static_cast<std::uint64_t>(total_steps), ops.sparsity,
                               cfg.cost_factor);
  rep.wall_ms = ms_since(t0);
  return rep;
}

LcuOperators build_lcu_operators(const WalkOperators& ops, const ChebyshevWeights& w, int tau,
                                 std::uint64_t completion_seed) {
  if (tau < 0) throw std::invalid_argument("tau must be non-negative");
  LcuOperators lcu;
  lcu.space = ops.space;
  lcu.tau = tau;
  lcu.sparsity = ops.sparsity;
  lcu.sqrt_p.assign(tau + 1, 0.0);
  double mass = 0.0;
  for (int m = 0; m <= tau; ++m) {
    const double pm = w.at(m);
    lcu.sqrt_p[m] = std::sqrt(pm);
    mass += pm;
  }
  lcu.tail_weight = std::max(0.0, 1.0 - mass);

  const int aux = 2 * (tau + 1);
  std::vector<cplx> col0(aux, cplx{0.0, 0.0});
  for (int m = 0; m <= tau; ++m) col0[2 * m] = lcu.sqrt_p[m];
  col0[1] = std::sqrt(lcu.tail_weight);
  Rng rng = make_rng(completion_seed, 0x1c0ULL);
  const auto rest = complete_orthonormal({col0}, aux - 1, aux, rng);
  lcu.vp = CMatrix(aux, aux);
  for (int r = 0; r < aux; ++r) lcu.vp(r, 0) = col0[r];
  for (int c = 1; c < aux; ++c)
    for (int r = 0; r < aux; ++r) lcu.vp(r, c) = rest[c - 1][r];

  lcu.w_pow.reserve(tau + 1);
  lcu.w_pow.push_back(CMatrix::identity(ops.space.dim()));
  for (int m = 1; m <= tau; ++m) lcu.w_pow.push_back(lcu.w_pow.back() * ops.w);
  return lcu;
}

std::vector<cplx> apply_lcu(const LcuOperators& lcu, std::span<const cplx> x) {
  const int wd = lcu.space.dim();
  const int aux = 2 * (lcu.tau + 1);
  if (static_cast<int>(x.size()) != wd * aux)
    throw std::invalid_argument("state size does not match the bundle");

  const CMatrix vp_dag = lcu.vp.adjoint();
  std::vector<cplx> y(x.begin(), x.end());
  std::vector<cplx> tmp(aux);

  // I (x) V_P
  for (int wi = 0; wi < wd; ++wi) {
    cplx* seg = y.data() + static_cast<size_t>(wi) * aux;
    kern::matvec_serial(lcu.vp.data(), aux, aux, seg, tmp.data());
    std::copy(tmp.begin(), tmp.end(), seg);
  }
  // W^m per auxiliary level (both flag values)
  std::vector<cplx> block(wd), blout(wd);
  for (int m = 0; m <= lcu.tau; ++m)
    for (int f = 0; f < 2; ++f) {
      if (m == 0) continue;  // W^0 = I
      const int a = 2 * m + f;
      for (int wi = 0; wi < wd; ++wi) block[wi] = y[static_cast<size_t>(wi) * aux + a];
      kern::matvec(lcu.w_pow[m].data(), wd, wd, block.data(), blout.data());
      for (int wi = 0; wi < wd; ++wi) y[static_cast<size_t>(wi) * aux + a] = blout[wi];
    }
  // I (x) V_P'
  for (int wi = 0; wi < wd; ++wi) {
    cplx* seg = y.data() + static_cast<size_t>(wi) * aux;
    kern::matvec_serial(vp_dag.data(), aux, aux, seg, tmp.data());
    std::copy(tmp.begin(), tmp.end(), seg);
  }
  return y;
}

CMatrix lcu_projected_block(const LcuOperators& lcu) {
  const int wd = lcu.space.dim();
  const int aux = 2 * (lcu.tau + 1);
  CMatrix block(wd, wd);
  std::vector<cplx> x(static_cast<size_t>(wd) * aux);
  for (int c = 0; c < wd; ++c) {
    std::fill(x.begin(), x.end(), cplx{0.0, 0.0});
    x[static_cast<size_t>(c) * aux] = 1.0;  // aux (m,f) = (0,0)
    const std::vector<cplx> y = apply_lcu(lcu, x);
    for (int r = 0; r < wd; ++r) block(r, c) = y[static_cast<size_t>(r) * aux];
  }
  return block;
}

EstimateReport lcu_estimate(const SparseHermitianMatrix& a, std::span<const cplx> psi, int t,
                            double eps, double c_bound, LcuMode mode, std::uint64_t seed,
                            const WalkConfig& cfg) {
  const auto t0 = Clock::now();
  if (t < 0) throw std::invalid_argument("power t must be non-negative");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  require_normalized(psi);

  EstimateReport rep;
  rep.method = mode == LcuMode::exact ? "walk-lcu" : "walk-lcu-sampled";
  rep.seed = seed;

  if (t == 0) {  // A^0 = I
    rep.value = cplx{1.0, 0.0};
    rep.internal_eps = eps;
    rep.ledger_analytic = mode == LcuMode::exact;
    rep.wall_ms = ms_since(t0);
    return rep;
  }

  const ScaledHermitian scaled = scale_to_contraction(a, c_bound);
  const double ct = std::pow(c_bound, t);
  const double eps_prime = eps / ct;
  const double eps_trunc = std::min(eps_prime / 2.0, 0.5);
  const double eps_est = eps_prime / 2.0;
  rep.internal_eps = eps_prime;

  const TruncationPlan plan = truncation_plan(t, eps_trunc);
  const int tau = std::min(plan.cutoff, t);
  const ChebyshevWeights w = weights(t);
  const WalkOperators ops = build_operators(scaled.matrix, cfg.completion_seed);
  const LcuOperators lcu = build_lcu_operators(ops, w, tau, cfg.completion_seed);

  const int wd = ops.space.dim();
  const int aux = 2 * (tau + 1);
  std::vector<cplx> x(static_cast<size_t>(wd) * aux, cplx{0.0, 0.0});
  for (int i = 0; i < ops.space.n; ++i)
    x[static_cast<size_t>(ops.space.flat(i + 1, 0, 0)) * aux] = psi[i];
  const std::vector<cplx> y = apply_lcu(lcu, x);

  if (mode == LcuMode::exact) {
    const double e_raw = std::real(vec_dot(x, y));
    rep.value = cplx{ct * (e_raw - lcu.tail_weight), 0.0};
    rep.std_error = 0.0;
    const std::uint64_t reps =
        static_cast<std::uint64_t>(std::max(1.0, std::ceil(1.0 / eps_est)));
    rep.ledger.charge_walk_steps(reps * static_cast<std::uint64_t>(tau), ops.sparsity,
                                 cfg.cost_factor);
    rep.ledger_analytic = true;
    rep.wall_ms = ms_since(t0);
    return rep;
  }

  // Sampled mode: the good sector is coin b = 0 and aux (m,f) = (0,0).
  double p_plus = 0.0, p_minus = 0.0;
  for (int wi = 0; wi < wd; ++wi) {
    if (wi % 2 != 0) continue;
    const size_t idx = static_cast<size_t>(wi) * aux;
    p_plus += 0.25 * std::norm(x[idx] + y[idx]);
    p_minus += 0.25 * std::norm(x[idx] - y[idx]);
  }
  const HadamardProbs pr{p_plus, p_minus};
  const std::uint64_t n_draws = draw_budget(eps_est);
  std::int64_t n_plus = 0, n_minus = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : n_plus, n_minus) \
    if (kern::parallel_enabled() && n_draws > 4096)
#endif
  for (std::int64_t d = 0; d < static_cast<std::int64_t>(n_draws); ++d) {
    Rng rng = make_rng(seed, d);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int xd = classify_draw(uni(rng), pr);
    n_plus += (xd == 1);
    n_minus += (xd == -1);
  }
  const double mean = static_cast<double>(n_plus - n_minus) / static_cast<double>(n_draws);
  const double second = static_cast<double>(n_plus + n_minus) / static_cast<double>(n_draws);
  const double var = std::max(0.0, second - mean * mean);
  rep.value = cplx{ct * (mean - lcu.tail_weight), 0.0};
  rep.std_error = ct * std::sqrt(var / static_cast<double>(n_draws));
  rep.samples = n_draws;
  rep.ledger.charge_walk_steps(n_draws * static_cast<std::uint64_t>(tau), ops.sparsity,
                               cfg.cost_factor);
  rep.wall_ms = ms_since(t0);
  return rep;
}

}  // namespace qpow
