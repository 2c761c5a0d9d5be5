#include "platform_qbd/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pqbd {

void ModelParams::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be finite and >= 0");
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("mu must be finite and > 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("gamma must be finite and > 0");
  if (n_owners < 1) throw std::invalid_argument("n_owners must be >= 1");
  if (!(price >= 0.0) || !std::isfinite(price))
    throw std::invalid_argument("price must be finite and >= 0");
  if (!(share > 0.0 && share < 1.0))
    throw std::invalid_argument("share must lie strictly between 0 and 1");
}

double traffic_intensity(const ModelParams& p) {
  return p.lambda * (p.mu + p.gamma) / (p.n_owners * p.mu * p.gamma);
}

std::pair<int, int> min_stable_owners(const ModelParams& p) {
  if (p.lambda == 0.0) return {1, 1};
  // rho < 1  <=>  N > lambda (mu + gamma) / (mu gamma)
  const double x = p.lambda * (p.mu + p.gamma) / (p.mu * p.gamma);
  const int exact = static_cast<int>(std::floor(x)) + 1;
  // sufficient bound: N >= 2 + floor((lambda/mu)(1 + mu/gamma))
  const double y = (p.lambda / p.mu) * (1.0 + p.mu / p.gamma);
  const int corollary = static_cast<int>(std::floor(y)) + 2;
  return {std::max(exact, 1), std::max(corollary, 1)};
}

std::vector<double> drift_alpha(const ModelParams& p) {
  const int n = p.n_owners;
  const double logx = std::log(p.mu) - std::log(p.gamma);
  std::vector<double> logw(n + 1);
  double peak = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    // weight for alpha_{k+1}: binom(n, k) (mu/gamma)^k
    logw[k] = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
              k * logx;
    peak = std::max(peak, logw[k]);
  }
  std::vector<double> alpha(n + 1);
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    alpha[k] = std::exp(logw[k] - peak);
    total += alpha[k];
  }
  for (double& a : alpha) a /= total;
  return alpha;
}

std::pair<double, double> mean_drift_rates(const ModelParams& p) {
  const double down = p.n_owners * p.mu * p.gamma / (p.mu + p.gamma);
  return {p.lambda, down};
}

StabilityReport stability_report(const ModelParams& p) {
  p.validate();
  StabilityReport r;
  r.rho = traffic_intensity(p);
  r.stable = r.rho < 1.0;
  const auto [exact, corollary] = min_stable_owners(p);
  r.n_min_exact = exact;
  r.n_min_corollary = corollary;
  r.alpha = drift_alpha(p);
  const auto [up, down] = mean_drift_rates(p);
  r.drift_up = up;
  r.drift_down = down;
  return r;
}

}  // namespace pqbd
