// Shared basic types: complex alias, oracle-call ledger, estimate reports,
// deterministic RNG substreams.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace qpow {

using cplx = std::complex<double>;

/// Thrown when an estimation method is invoked outside its contract
/// (non-Hermitian input to a walk method, C below the one-norm, a
/// non-stochastic matrix handed to the Monte Carlo baseline, ...).
/// The CLI maps this to exit code 3; argument/file problems map to 2.
class MethodConstraintError : public std::runtime_error {
 public:
  explicit MethodConstraintError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Calls charged to each oracle per walk step, per sparse column touched:
/// two state preparations and their inverses, each reading every nonzero
/// of a column once. Echoed in reports so alternative constants can be
/// compared offline.
inline constexpr int kWalkCostFactor = 4;

/// Modeled call counters for the position oracle (O_F) and the value
/// oracle (O_A). Counters are monotone; parallel runs use one ledger per
/// stream and merge by summation.
struct QueryLedger {
  std::uint64_t calls_of = 0;
  std::uint64_t calls_oa = 0;

  void charge(std::uint64_t of, std::uint64_t oa) {
    calls_of += of;
    calls_oa += oa;
  }

  /// One application of the walk operator (or its controlled version)
  /// costs cost_factor * sparsity calls to each oracle.
  void charge_walk_steps(std::uint64_t steps, int sparsity, int cost_factor = kWalkCostFactor) {
    const std::uint64_t c = steps * static_cast<std::uint64_t>(sparsity) *
                            static_cast<std::uint64_t>(cost_factor);
    charge(c, c);
  }

  void merge(const QueryLedger& other) { charge(other.calls_of, other.calls_oa); }
};

/// Result of one estimator run.
struct EstimateReport {
  cplx value{0.0, 0.0};
  double std_error = 0.0;
  std::uint64_t samples = 0;
  QueryLedger ledger;
  std::string method;
  bool ledger_analytic = false;  // true when the ledger is a modeled budget
  std::uint64_t seed = 0;
  double internal_eps = 0.0;
  double wall_ms = 0.0;
};

using Rng = std::mt19937_64;

/// splitmix64 finalizer. Used to derive independent substreams from
/// (seed, index) so that parallel sampling loops are deterministic for
/// any thread count.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t index = 0) {
  return Rng(mix_seed(seed, index));
}

}  // namespace qpow
