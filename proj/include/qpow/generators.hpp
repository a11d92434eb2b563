// Test-instance generators: seeded random stable Hermitian matrices and the
// adversarial parity-chain family (a permutation chain whose N-th power reads
// out the XOR of N bits, plus its irreducible stochastic perturbation).
#pragma once

#include <cstdint>
#include <vector>

#include "qpow/sparse.hpp"

namespace qpow {

/// Deterministic in seed. The result is scaled so that ||A||_1 equals
/// spectral_radius exactly, which certifies ||A||_2 <= spectral_radius and
/// makes the instance directly usable by the walk methods with C = 1.
/// Requires 0 < spectral_radius < 1, 1 <= d <= n.
SparseHermitianMatrix gen_random_stable(int n, int d, double spectral_radius,
                                        std::uint64_t seed);

/// Parity chain over bits b_1..b_N: 2N states (site p in 0..N-1, spin s),
/// one edge per column (p,s) -> (p+1 mod N, s ^ b_{p+1}). State index is
/// 2p + s. u starts the chain at (0,0); v = e_{(0,0)} - e_{(0,1)} reads the
/// accumulated parity after N steps: v^T A^N u = +1 for even parity, -1 for
/// odd.
struct ParityChainInstance {
  GeneralSparseMatrix a;
  std::vector<cplx> u;
  std::vector<cplx> v;
};

/// bits entries must be 0/1; empty input throws std::invalid_argument.
ParityChainInstance gen_parity_chain(const std::vector<int>& bits);

/// The perturbation direction B with exactly zero column sums: every column
/// loses its forward edge (-1); interior sites gain the reverse edge (+1);
/// the two end sites (p = 0 and p = N-1) gain the spin flip (+1) instead.
/// ||B||_2 <= sqrt(6) for every N.
GeneralSparseMatrix parity_chain_perturbation(const std::vector<int>& bits);

/// A + delta * B: column stochastic to rounding, strongly connected for
/// any delta in (0,1).
GeneralSparseMatrix gen_parity_chain_irreducible(const std::vector<int>& bits, double delta);

/// BFS strong-connectivity check on the nonzero pattern (used to confirm
/// irreducibility of the perturbed chains).
bool strongly_connected(const GeneralSparseMatrix& a);

}  // namespace qpow
