// Compares the serial reference kernels against the OpenMP variants:
// dense complex matvec/matmul and a chain-trajectory sampling loop.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "qpow/generators.hpp"
#include "qpow/kernels.hpp"
#include "qpow/overlap.hpp"

using namespace qpow;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& fn, int reps) {
  const auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const double ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return ms / reps;
}

std::vector<cplx> random_cvec(int n, Rng& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx{uni(rng), uni(rng)};
  return v;
}

}  // namespace

int main() {
  std::printf("threads=%d\n", kern::thread_count());
  std::printf("kernel,size,serial_ms,omp_ms,speedup\n");

  Rng rng = make_rng(7);
  for (int n : {128, 256, 512, 1024}) {
    const std::vector<cplx> m = random_cvec(n * n, rng);
    const std::vector<cplx> x = random_cvec(n, rng);
    std::vector<cplx> y(n);
    const int reps = n <= 256 ? 2000 : 200;
    const double ser =
        time_ms([&] { kern::matvec_serial(m.data(), n, n, x.data(), y.data()); }, reps);
    const double par =
        time_ms([&] { kern::matvec_omp(m.data(), n, n, x.data(), y.data()); }, reps);
    std::printf("matvec,%d,%.4f,%.4f,%.2f\n", n, ser, par, ser / par);
  }

  for (int n : {64, 128, 256, 512}) {
    const std::vector<cplx> a = random_cvec(n * n, rng);
    const std::vector<cplx> b = random_cvec(n * n, rng);
    std::vector<cplx> c(static_cast<size_t>(n) * n);
    const int reps = n <= 128 ? 50 : 5;
    const double ser =
        time_ms([&] { kern::matmul_serial(a.data(), b.data(), c.data(), n, n, n); }, reps);
    const double par =
        time_ms([&] { kern::matmul_omp(a.data(), b.data(), c.data(), n, n, n); }, reps);
    std::printf("matmul,%d,%.4f,%.4f,%.2f\n", n, ser, par, ser / par);
  }

  // Monte Carlo trajectory loop (parallelism across chunks of draws).
  {
    std::vector<int> bits(16);
    for (size_t i = 0; i < bits.size(); ++i) bits[i] = (i * 2654435761u >> 3) & 1;
    const GeneralSparseMatrix a = gen_parity_chain_irreducible(bits, 1e-3);
    const ParityChainInstance inst = gen_parity_chain(bits);
    const double eps = 0.005;  // ~160k trajectories
    kern::set_parallel(false);
    const double ser = time_ms(
        [&] { montecarlo_stochastic(a, inst.u, inst.v, 16, eps, 1); }, 3);
    kern::set_parallel(true);
    const double par = time_ms(
        [&] { montecarlo_stochastic(a, inst.u, inst.v, 16, eps, 1); }, 3);
    std::printf("mc-trajectories,%zu,%.4f,%.4f,%.2f\n", bits.size() * 2, ser, par, ser / par);
  }
  return 0;
}
