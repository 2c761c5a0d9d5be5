#pragma once

#include <optional>
#include <utility>

#include "platform_qbd/params.hpp"
#include "platform_qbd/qbd_solver.hpp"

namespace pqbd {

enum class Provenance { analytic, simulated, oracle };

struct PerformanceReport {
  double rho = 0.0;
  double mean_idle_owners = 0.0;      // eq1
  double mean_waiting_seekers = 0.0;  // eq2
  double sojourn_little = 0.0;
  std::optional<double> sojourn_rg;    // model one only, filled by the caller
  double platform_profit = 0.0;        // keeps share (1 - d) of the service fees
  double owner_profit_each = 0.0;      // the owners split share d evenly
  double platform_profit_throughput = 0.0;  // flow-balance form of the same rate
  double throughput = 0.0;
  Provenance source = Provenance::analytic;
};

double mean_idle_owners_one(const StationarySolution& s, const ModelParams& p);
double mean_waiting_seekers_one(const StationarySolution& s, const ModelParams& p);

// (mean idle owners, mean waiting seekers) for the two-stage model. A level
// k >= 1 carries k-1 seekers in the waiting room proper.
std::pair<double, double> measures_two(const StationarySolution& s, const ModelParams& p);

// (platform profit rate, per-owner profit rate) from the busy-owner count.
std::pair<double, double> profit_rates(const ModelParams& p, double mean_idle);

// Mean sojourn via Little's law: waiting room plus service. NaN when
// lambda == 0 (no arrivals to average over).
double little_sojourn(Model model, const ModelParams& p, double mean_idle,
                      double mean_waiting);

PerformanceReport analytic_report(Model model, const ModelParams& p,
                                  const StationarySolution& s);

}  // namespace pqbd
