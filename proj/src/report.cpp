#include "qpow/report.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace qpow {

RunReport run_report_from(const EstimateReport& est, int t, double target_eps, double c_bound,
                          const std::string& digest) {
  RunReport r;
  r.method = est.method;
  r.t = t;
  r.estimate = est.value;
  r.target_eps = target_eps;
  r.internal_eps = est.internal_eps;
  r.samples = est.samples;
  r.oracle_calls_of = est.ledger.calls_of;
  r.oracle_calls_oa = est.ledger.calls_oa;
  r.ledger_mode = est.ledger_analytic ? "analytic" : "counted";
  r.c_bound = c_bound;
  r.seed = est.seed;
  r.wall_ms = est.wall_ms;
  r.matrix_digest = digest;
  return r;
}

std::string to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["t"] = r.t;
  j["estimate"] = {{"re", r.estimate.real()}, {"im", r.estimate.imag()}};
  j["target_eps"] = r.target_eps;
  j["internal_eps"] = r.internal_eps;
  j["samples"] = r.samples;
  j["oracle_calls_OF"] = r.oracle_calls_of;
  j["oracle_calls_OA"] = r.oracle_calls_oa;
  j["ledger_mode"] = r.ledger_mode;
  j["C_bound"] = r.c_bound;
  j["cost_w_factor"] = r.cost_w_factor;
  j["seed"] = r.seed;
  j["wall_ms"] = r.wall_ms;
  j["matrix_digest"] = r.matrix_digest;
  return j.dump(2);
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("slope fit needs at least two points");
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qpow
