#include "platform_qbd/measures.hpp"

#include <cmath>
#include <limits>

#include "platform_qbd/errors.hpp"

namespace pqbd {

namespace {

// h1 = (I-R)^{-1} 1 and h2 = (I-R)^{-2} 1
std::pair<Vec, Vec> geometric_sums(const Mat& r) {
  Mat eye_r = Mat::identity(r.rows());
  eye_r -= r;
  const LuFactor lu(eye_r);
  Vec h1 = lu.solve(ones(r.rows()));
  Vec h2 = lu.solve(h1);
  return {std::move(h1), std::move(h2)};
}

}  // namespace

double mean_idle_owners_one(const StationarySolution& s, const ModelParams& p) {
  const std::size_t m = static_cast<std::size_t>(p.n_owners) + 1;
  Vec f(m);
  for (std::size_t j = 0; j < m; ++j) f[j] = static_cast<double>(j);

  double total = 0.0;
  for (std::size_t off = 0; off < s.pi0.size(); off += m)
    for (std::size_t j = 0; j < m; ++j) total += s.pi0[off + j] * f[j];

  Mat eye_r = Mat::identity(m);
  eye_r -= s.r;
  const Vec g = LuFactor(eye_r).solve(f);
  return total + dot(s.pi1, g);
}

double mean_waiting_seekers_one(const StationarySolution& s, const ModelParams& p) {
  const std::size_t m = static_cast<std::size_t>(p.n_owners) + 1;
  const int n = p.n_owners;

  double total = 0.0;
  for (int i = 1; i < n; ++i) {
    double mass = 0.0;
    for (std::size_t j = 0; j < m; ++j) mass += s.pi0[i * m + j];
    total += static_cast<double>(i) * mass;
  }
  const auto [h1, h2] = geometric_sums(s.r);
  return total + static_cast<double>(n - 1) * dot(s.pi1, h1) + dot(s.pi1, h2);
}

std::pair<double, double> measures_two(const StationarySolution& s, const ModelParams& p) {
  const int n = p.n_owners;
  double idle = 0.0;
  for (int k = 0; k < n; ++k) {
    const std::size_t off = (std::size_t{1} << k) - 1;
    const std::size_t len = std::size_t{1} << k;
    double mass = 0.0;
    for (std::size_t i = 0; i < len; ++i) mass += s.pi0[off + i];
    idle += static_cast<double>(n - k) * mass;
  }

  // sum over levels of (k-1) pi_k 1 = pi1 R (I-R)^{-2} 1
  const auto [h1, h2] = geometric_sums(s.r);
  (void)h1;
  const double waiting = dot(vec_mat(s.pi1, s.r), h2);
  return {idle, waiting};
}

std::pair<double, double> profit_rates(const ModelParams& p, double mean_idle) {
  const double busy = static_cast<double>(p.n_owners) - mean_idle;
  const double fee_rate = busy * p.mu * p.price;
  const double platform = (1.0 - p.share) * fee_rate;
  const double owner_each = p.share * fee_rate / static_cast<double>(p.n_owners);
  return {platform, owner_each};
}

double little_sojourn(Model model, const ModelParams& p, double mean_idle,
                      double mean_waiting) {
  if (p.lambda == 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (model == Model::one) {
    const double busy = static_cast<double>(p.n_owners) - mean_idle;
    return (mean_waiting + busy) / p.lambda;
  }
  return mean_waiting / p.lambda + 1.0 / p.gamma + 1.0 / p.mu;
}

PerformanceReport analytic_report(Model model, const ModelParams& p,
                                  const StationarySolution& s) {
  PerformanceReport r;
  r.rho = traffic_intensity(p);
  r.source = Provenance::analytic;
  if (model == Model::one) {
    r.mean_idle_owners = mean_idle_owners_one(s, p);
    r.mean_waiting_seekers = mean_waiting_seekers_one(s, p);
  } else {
    const auto [idle, waiting] = measures_two(s, p);
    r.mean_idle_owners = idle;
    r.mean_waiting_seekers = waiting;
  }
  r.sojourn_little = little_sojourn(model, p, r.mean_idle_owners, r.mean_waiting_seekers);
  const auto [platform, owner_each] = profit_rates(p, r.mean_idle_owners);
  r.platform_profit = platform;
  r.owner_profit_each = owner_each;
  r.platform_profit_throughput = (1.0 - p.share) * p.price * p.lambda;
  r.throughput = p.lambda;
  return r;
}

}  // namespace pqbd
