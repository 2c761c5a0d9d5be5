#pragma once

#include <utility>
#include <vector>

namespace pqbd {

enum class Model { one, two };

// Instance parameters shared by both models.
//   lambda   seeker arrival rate
//   mu       service completion rate
//   gamma    matching rate
//   n_owners pool size N
//   price    service price, share in (0,1) the platform's cut
struct ModelParams {
  double lambda = 0.0;
  double mu = 1.0;
  double gamma = 1.0;
  int n_owners = 1;
  double price = 1.0;
  double share = 0.5;

  void validate() const;  // throws std::invalid_argument
};

struct StabilityReport {
  double rho = 0.0;
  bool stable = false;
  int n_min_exact = 1;      // smallest pool size with rho < 1
  int n_min_corollary = 1;  // the simpler sufficient bound
  std::vector<double> alpha;  // stationary phase distribution of the free process
  double drift_up = 0.0;
  double drift_down = 0.0;
};

// rho = lambda (mu + gamma) / (N mu gamma); the instance is stable iff rho < 1.
double traffic_intensity(const ModelParams& p);

// (exact, corollary) minimal pool sizes; both clamp to 1 when lambda == 0.
std::pair<int, int> min_stable_owners(const ModelParams& p);

// Stationary distribution of the idle-owner phase process with the level
// fixed: alpha_k proportional to binom(N, k-1) (mu/gamma)^(k-1), evaluated
// in log space so large N stays finite.
std::vector<double> drift_alpha(const ModelParams& p);

// Mean upward and downward drift rates (lambda, N mu gamma / (mu + gamma)).
std::pair<double, double> mean_drift_rates(const ModelParams& p);

StabilityReport stability_report(const ModelParams& p);

}  // namespace pqbd
