#include "qpow/overlap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qpow/fourier.hpp"

namespace qpow {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<cplx> scaled_copy(std::span<const cplx> v, cplx factor) {
  std::vector<cplx> out(v.begin(), v.end());
  for (auto& z : out) z *= factor;
  return out;
}

// Eigenpairs of the 2x2 Hermitian matrix [[a, b], [conj(b), d]] (a, d real).
struct Eig2 {
  double lambda1, lambda2;
  std::array<cplx, 2> v1, v2;
};

Eig2 eig2(double a, cplx b, double d) {
  Eig2 e;
  const double half_tr = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), std::abs(b));
  e.lambda1 = half_tr + rad;
  e.lambda2 = half_tr - rad;
  if (std::abs(b) < 1e-300) {
    if (a >= d) {
      e.v1 = {cplx{1, 0}, cplx{0, 0}};
      e.v2 = {cplx{0, 0}, cplx{1, 0}};
    } else {
      e.v1 = {cplx{0, 0}, cplx{1, 0}};
      e.v2 = {cplx{1, 0}, cplx{0, 0}};
    }
    return e;
  }
  // (b, lambda - a) is an eigenvector for lambda; orthonormalize.
  auto build = [&](double lambda) -> std::array<cplx, 2> {
    std::array<cplx, 2> v{b, cplx{lambda - a, 0.0}};
    const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    return {v[0] / n, v[1] / n};
  };
  e.v1 = build(e.lambda1);
  // exact orthogonal complement of v1
  e.v2 = {-std::conj(e.v1[1]), std::conj(e.v1[0])};
  return e;
}

}  // namespace

RankOneDecomposition rank_one_decompose(std::span<const cplx> u, std::span<const cplx> v) {
  const double nu = vec_norm(u);
  const double nv = vec_norm(v);
  if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("u and v must be nonzero");
  const size_t n = u.size();
  if (v.size() != n) throw std::invalid_argument("u and v must have equal dimension");

  RankOneDecomposition dec;
  dec.norm_u = nu;
  dec.norm_v = nv;

  // Orthonormal basis {e1, e2} of span{u, v}.
  std::vector<cplx> e1 = scaled_copy(u, 1.0 / nu);
  std::vector<cplx> w(v.begin(), v.end());
  const cplx c1 = vec_dot(e1, std::span<const cplx>(v));  // <e1, v>
  for (size_t i = 0; i < n; ++i) w[i] -= c1 * e1[i];
  const double wn = vec_norm(w);
  const bool parallel = wn <= 1e-14 * nv;

  std::vector<cplx> e2;
  if (!parallel) {
    e2 = scaled_copy(w, 1.0 / wn);
  } else if (n > 1) {
    // Any deterministic unit vector orthogonal to e1.
    size_t k = 0;
    for (size_t i = 1; i < n; ++i)
      if (std::abs(e1[i]) < std::abs(e1[k])) k = i;
    e2.assign(n, cplx{0.0, 0.0});
    e2[k] = 1.0;
    const cplx ov = vec_dot(e1, std::span<const cplx>(e2));
    for (size_t i = 0; i < n; ++i) e2[i] -= ov * e1[i];
    const double n2 = vec_norm(e2);
    for (auto& z : e2) z /= n2;
  }

  // Coordinates: u = (nu, 0), v = (c1, c2) with c2 = ||w|| (0 when parallel).
  const cplx uc1{nu, 0.0};
  const cplx vc1 = c1;
  const cplx vc2{parallel ? 0.0 : wn, 0.0};

  auto assemble = [&](double m11, cplx m12, double m22) {
    const Eig2 e = eig2(m11, m12, m22);
    std::array<RankOneDecomposition::Pair, 2> out;
    const std::array<double, 2> lams{e.lambda1, e.lambda2};
    const std::array<std::array<cplx, 2>, 2> vecs{e.v1, e.v2};
    for (int k = 0; k < 2; ++k) {
      out[k].lambda = lams[k];
      if (e2.empty() && std::abs(vecs[k][1]) > 1e-12) continue;  // 1-dim span, absent direction
      out[k].psi.assign(n, cplx{0.0, 0.0});
      for (size_t i = 0; i < n; ++i) {
        out[k].psi[i] = vecs[k][0] * e1[i];
        if (!e2.empty()) out[k].psi[i] += vecs[k][1] * e2[i];
      }
    }
    return out;
  };

  // uv' + vu' in basis coordinates: M_rc = u_r conj(v_c) + v_r conj(u_c).
  {
    const double m11 = 2.0 * std::real(uc1 * std::conj(vc1));
    const cplx m12 = uc1 * std::conj(vc2);
    const double m22 = 0.0;
    dec.real_part = assemble(m11, m12, m22);
  }
  // i(vu' - uv'): M_rc = i (v_r conj(u_c) - u_r conj(v_c)).
  {
    const cplx i_{0.0, 1.0};
    const double m11 = std::real(i_ * (vc1 * std::conj(uc1) - uc1 * std::conj(vc1)));
    const cplx m12 = -i_ * uc1 * std::conj(vc2);
    const double m22 = 0.0;
    dec.imag_part = assemble(m11, m12, m22);
  }
  return dec;
}

cplx dense_power_element(const GeneralSparseMatrix& a, std::span<const cplx> u,
                         std::span<const cplx> v, int t) {
  if (t < 0) throw std::invalid_argument("power t must be non-negative");
  if (static_cast<int>(u.size()) != a.dim() || static_cast<int>(v.size()) != a.dim())
    throw std::invalid_argument("vector dimension does not match the matrix");
  std::vector<cplx> x(u.begin(), u.end());
  for (int k = 0; k < t; ++k) x = a.apply(x);
  return vec_dot(v, std::span<const cplx>(x));
}

EstimateReport montecarlo_stochastic(const GeneralSparseMatrix& a, std::span<const cplx> u,
                                     std::span<const cplx> v, int t, double eps,
                                     std::uint64_t seed) {
  const auto t0 = Clock::now();
  if (t < 0) throw std::invalid_argument("power t must be non-negative");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const int n = a.dim();
  if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n)
    throw std::invalid_argument("vector dimension does not match the matrix");

  // Column-major transition table with cumulative probabilities.
  std::vector<std::vector<std::pair<double, int>>> col_cdf(n);
  {
    std::vector<double> col_sum(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const auto cs = a.row_cols(i);
      const auto vs = a.row_vals(i);
      for (size_t k = 0; k < cs.size(); ++k) {
        const cplx z = vs[k];
        if (std::abs(z.imag()) > 1e-12 || z.real() < -1e-12)
          throw MethodConstraintError("Monte Carlo needs a nonnegative real matrix");
        col_cdf[cs[k]].push_back({std::max(0.0, z.real()), i});
        col_sum[cs[k]] += z.real();
      }
    }
    for (int c = 0; c < n; ++c) {
      if (std::abs(col_sum[c] - 1.0) > 1e-12)
        throw MethodConstraintError("Monte Carlo needs unit column sums (column-stochastic A)");
      double acc = 0.0;
      for (auto& [p, row] : col_cdf[c]) {
        acc += p;
        p = acc;
      }
    }
  }

  // Start distribution.
  std::vector<std::pair<double, int>> start_cdf;
  {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const cplx z = u[i];
      if (std::abs(z.imag()) > 1e-12 || z.real() < -1e-12)
        throw MethodConstraintError("Monte Carlo needs u to be a probability vector");
      if (z.real() > 0.0) {
        acc += z.real();
        start_cdf.push_back({acc, i});
      }
    }
    if (std::abs(acc - 1.0) > 1e-10)
      throw MethodConstraintError("Monte Carlo needs u to sum to 1");
  }

  double vmax = 0.0;
  for (const cplx& z : v) vmax = std::max(vmax, std::abs(z));
  const double n_req = std::ceil(std::max(1.0, 4.0 * vmax * vmax / (eps * eps)));
  if (n_req > 1e9) throw MethodConstraintError("trajectory budget exceeds 1e9");
  const std::int64_t n_traj = static_cast<std::int64_t>(n_req);

  auto pick = [](const std::vector<std::pair<double, int>>& cdf, double x) {
    for (const auto& [acc, idx] : cdf)
      if (x < acc) return idx;
    return cdf.back().second;
  };

  // Fixed-size chunks with serially combined partial sums keep the result
  // independent of the thread count.
  constexpr std::int64_t kChunk = 4096;
  const std::int64_t n_chunks = (n_traj + kChunk - 1) / kChunk;
  std::vector<cplx> chunk_sum(n_chunks, cplx{0.0, 0.0});
  std::vector<double> chunk_sq(n_chunks, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (kern::parallel_enabled() && n_chunks > 1)
#endif
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    cplx sum{0.0, 0.0};
    double sq = 0.0;
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = std::min(n_traj, lo + kChunk);
    for (std::int64_t d = lo; d < hi; ++d) {
      Rng rng = make_rng(seed, static_cast<std::uint64_t>(d));
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      int state = pick(start_cdf, uni(rng));
      for (int step = 0; step < t; ++step) state = pick(col_cdf[state], uni(rng));
      const cplx payoff = std::conj(v[state]);
      sum += payoff;
      sq += std::norm(payoff);
    }
    chunk_sum[c] = sum;
    chunk_sq[c] = sq;
  }

  cplx total{0.0, 0.0};
  double total_sq = 0.0;
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    total += chunk_sum[c];
    total_sq += chunk_sq[c];
  }

  EstimateReport rep;
  rep.method = "montecarlo";
  rep.seed = seed;
  rep.samples = static_cast<std::uint64_t>(n_traj);
  rep.internal_eps = eps;
  rep.value = total / static_cast<double>(n_traj);
  const double var = std::max(0.0, total_sq / static_cast<double>(n_traj) - std::norm(rep.value));
  rep.std_error = std::sqrt(var / static_cast<double>(n_traj));
  rep.wall_ms = ms_since(t0);
  return rep;
}

Method method_from_name(const std::string& name) {
  if (name == "walk-sample") return Method::walk_sample;
  if (name == "walk-lcu") return Method::walk_lcu;
  if (name == "fourier") return Method::fourier;
  if (name == "dense") return Method::dense;
  if (name == "montecarlo") return Method::montecarlo;
  throw std::invalid_argument("unknown method: " + name);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::walk_sample: return "walk-sample";
    case Method::walk_lcu: return "walk-lcu";
    case Method::fourier: return "fourier";
    case Method::dense: return "dense";
    case Method::montecarlo: return "montecarlo";
  }
  return "?";
}

namespace {

EstimateReport drive_decomposed(const SparseHermitianMatrix& a, std::span<const cplx> u,
                                std::span<const cplx> v, int t, Method method,
                                const PowerParams& params) {
  const auto t0 = Clock::now();
  const RankOneDecomposition dec = rank_one_decompose(u, v);
  const double scale = dec.norm_u * dec.norm_v;
  const double c_bound = params.c_bound > 0.0 ? params.c_bound : a.one_norm();
  const double eps_ov = params.eps / (4.0 * scale);

  EstimateReport rep;
  rep.method = method_name(method);
  rep.seed = params.seed;
  const double ct = std::pow(std::max(c_bound, 1e-300), t);
  rep.internal_eps =
      method == Method::fourier ? eps_ov : eps_ov / ct;

  WalkConfig cfg;
  cfg.completion_seed = mix_seed(params.seed, 0xc031ULL);
  cfg.cost_factor = params.cost_factor;

  double re = 0.0, im = 0.0, var = 0.0;
  std::uint64_t overlap_index = 0;
  auto accumulate = [&](const RankOneDecomposition::Pair& pair, double& part) {
    ++overlap_index;
    if (pair.psi.empty() || std::abs(pair.lambda) <= 1e-14 * 2.0 * scale) return;
    EstimateReport sub;
    const std::uint64_t sub_seed = mix_seed(params.seed, overlap_index);
    switch (method) {
      case Method::walk_sample:
        sub = sampling_estimate(a, pair.psi, t, eps_ov, c_bound, sub_seed, cfg);
        break;
      case Method::walk_lcu:
        sub = lcu_estimate(a, pair.psi, t, eps_ov, c_bound, params.lcu_mode, sub_seed, cfg);
        break;
      case Method::fourier: {
        QueryLedger led;
        const std::vector<cplx> seq = power_overlaps(a, pair.psi, t, eps_ov, &led);
        sub.value = seq[t];
        sub.ledger = led;
        sub.ledger_analytic = true;
        break;
      }
      default:
        throw std::logic_error("not an overlap method");
    }
    part += 0.5 * pair.lambda * std::real(sub.value);
    var += std::pow(0.5 * pair.lambda * sub.std_error, 2);
    rep.samples += sub.samples;
    rep.ledger.merge(sub.ledger);
    rep.ledger_analytic = rep.ledger_analytic || sub.ledger_analytic;
  };

  for (const auto& p : dec.real_part) accumulate(p, re);
  for (const auto& p : dec.imag_part) accumulate(p, im);

  rep.value = cplx{re, im};
  rep.std_error = std::sqrt(var);
  rep.wall_ms = ms_since(t0);
  return rep;
}

}  // namespace

EstimateReport matrix_power_element(const SparseHermitianMatrix& a, std::span<const cplx> u,
                                    std::span<const cplx> v, int t, Method method,
                                    const PowerParams& params) {
  switch (method) {
    case Method::dense: {
      const auto t0 = Clock::now();
      EstimateReport rep;
      rep.method = "dense";
      rep.seed = params.seed;
      rep.value = dense_power_element(a.general(), u, v, t);
      rep.wall_ms = ms_since(t0);
      return rep;
    }
    case Method::montecarlo:
      return montecarlo_stochastic(a.general(), u, v, t, params.eps, params.seed);
    default:
      return drive_decomposed(a, u, v, t, method, params);
  }
}

EstimateReport matrix_power_element(const GeneralSparseMatrix& a, std::span<const cplx> u,
                                    std::span<const cplx> v, int t, Method method,
                                    const PowerParams& params) {
  switch (method) {
    case Method::dense: {
      const auto t0 = Clock::now();
      EstimateReport rep;
      rep.method = "dense";
      rep.seed = params.seed;
      rep.value = dense_power_element(a, u, v, t);
      rep.wall_ms = ms_since(t0);
      return rep;
    }
    case Method::montecarlo:
      return montecarlo_stochastic(a, u, v, t, params.eps, params.seed);
    default:
      throw MethodConstraintError(
          "method '" + method_name(method) +
          "' requires a Hermitian matrix: powering a non-Hermitian matrix admits no "
          "sublinear-in-t algorithm, use 'dense' or 'montecarlo'");
  }
}

}  // namespace qpow
