// Machine-readable run reports with a frozen field order, plus the little
// statistics used by the bench sweeps.
#pragma once

#include <span>
#include <string>

#include "qpow/core.hpp"

namespace qpow {

struct RunReport {
  std::string method;
  int t = 0;
  cplx estimate{0.0, 0.0};
  double target_eps = 0.0;
  double internal_eps = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t oracle_calls_of = 0;
  std::uint64_t oracle_calls_oa = 0;
  std::string ledger_mode = "counted";  // counted | analytic
  double c_bound = 0.0;
  int cost_w_factor = kWalkCostFactor;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
  std::string matrix_digest;
};

RunReport run_report_from(const EstimateReport& est, int t, double target_eps, double c_bound,
                          const std::string& digest);

/// Two-space-indented JSON with fields in declaration order. Re-running with
/// the same seed reproduces everything except wall_ms byte for byte.
std::string to_json(const RunReport& r);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace qpow
