#include "qpow/generators.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qpow {

SparseHermitianMatrix gen_random_stable(int n, int d, double spectral_radius,
                                        std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("n must be positive");
  if (d < 1 || d > n) throw std::invalid_argument("need 1 <= d <= n");
  if (!(spectral_radius > 0.0 && spectral_radius < 1.0))
    throw std::invalid_argument("spectral_radius must lie in (0, 1)");

  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);

  // Diagonal first, then symmetric off-diagonal pairs while the row budget
  // allows. Row counts never exceed d.
  std::map<std::pair<int, int>, cplx> vals;
  std::vector<int> row_count(n, 0);
  for (int i = 0; i < n; ++i) {
    vals[{i, i}] = cplx{uni(rng), 0.0};
    row_count[i] = 1;
  }
  if (d > 1) {
    const int attempts = 8 * n * d;
    for (int a = 0; a < attempts; ++a) {
      int i = pick(rng);
      int j = pick(rng);
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      if (vals.count({i, j})) continue;
      if (row_count[i] + 1 > d || row_count[j] + 1 > d) continue;
      const cplx z{uni(rng), uni(rng)};
      vals[{i, j}] = z;
      ++row_count[i];
      ++row_count[j];
    }
  }

  std::vector<Entry> entries;
  for (const auto& [rc, z] : vals) {
    entries.push_back({rc.first, rc.second, z});
    if (rc.first != rc.second) entries.push_back({rc.second, rc.first, std::conj(z)});
  }
  SparseHermitianMatrix a = SparseHermitianMatrix::from_entries(n, std::move(entries));
  const double n1 = a.one_norm();
  return a.scaled(n1 / spectral_radius);
}

namespace {

void check_bits(const std::vector<int>& bits) {
  if (bits.empty()) throw std::invalid_argument("bit string must be non-empty");
  for (int b : bits)
    if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
}

inline int state(int site, int spin) { return 2 * site + spin; }

}  // namespace

ParityChainInstance gen_parity_chain(const std::vector<int>& bits) {
  check_bits(bits);
  const int n = static_cast<int>(bits.size());
  std::vector<Entry> entries;
  for (int p = 0; p < n; ++p) {
    const int q = (p + 1) % n;
    const int b = bits[p];  // bit consumed when leaving site p
    for (int s = 0; s < 2; ++s) entries.push_back({state(q, s ^ b), state(p, s), cplx{1.0, 0.0}});
  }
  ParityChainInstance inst;
  inst.a = GeneralSparseMatrix::from_entries(2 * n, std::move(entries));
  inst.u.assign(2 * n, cplx{0.0, 0.0});
  inst.v.assign(2 * n, cplx{0.0, 0.0});
  inst.u[state(0, 0)] = 1.0;
  inst.v[state(0, 0)] = 1.0;
  inst.v[state(0, 1)] = -1.0;
  return inst;
}

GeneralSparseMatrix parity_chain_perturbation(const std::vector<int>& bits) {
  check_bits(bits);
  const int n = static_cast<int>(bits.size());
  std::map<std::pair<int, int>, double> b;
  for (int p = 0; p < n; ++p) {
    const int q = (p + 1) % n;
    for (int s = 0; s < 2; ++s) {
      const int col = state(p, s);
      b[{state(q, s ^ bits[p]), col}] -= 1.0;  // cancel the forward edge
      if (p == 0 || p == n - 1) {
        b[{state(p, 1 - s), col}] += 1.0;  // end sites: spin flip
      } else {
        const int r = (p - 1 + n) % n;
        b[{state(r, s ^ bits[r]), col}] += 1.0;  // interior: reverse edge
      }
    }
  }
  std::vector<Entry> entries;
  for (const auto& [rc, v] : b)
    if (v != 0.0) entries.push_back({rc.first, rc.second, cplx{v, 0.0}});
  return GeneralSparseMatrix::from_entries(2 * n, std::move(entries));
}

GeneralSparseMatrix gen_parity_chain_irreducible(const std::vector<int>& bits, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  check_bits(bits);
  const int n = static_cast<int>(bits.size());
  const GeneralSparseMatrix a = gen_parity_chain(bits).a;
  const GeneralSparseMatrix b = parity_chain_perturbation(bits);

  std::map<std::pair<int, int>, cplx> sum;
  for (const Entry& e : a.entries()) sum[{e.row, e.col}] += e.value;
  for (const Entry& e : b.entries()) sum[{e.row, e.col}] += delta * e.value;
  std::vector<Entry> entries;
  for (const auto& [rc, v] : sum) entries.push_back({rc.first, rc.second, v});
  return GeneralSparseMatrix::from_entries(2 * n, std::move(entries));
}

bool strongly_connected(const GeneralSparseMatrix& a) {
  const int n = a.dim();
  // Forward and transposed adjacency.
  std::vector<std::vector<int>> fwd(n), rev(n);
  for (int i = 0; i < n; ++i)
    for (int c : a.row_cols(i)) {
      fwd[c].push_back(i);  // column c feeds row i
      rev[i].push_back(c);
    }
  auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    return count == n;
  };
  return reaches_all(fwd) && reaches_all(rev);
}

}  // namespace qpow
