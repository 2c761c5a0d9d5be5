#include "platform_qbd/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "platform_qbd/errors.hpp"

namespace pqbd {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // 99% two-sided normal quantile

double exp_draw(double u, double rate) { return -std::log1p(-u) / rate; }

SimEstimate reduce(const std::vector<double>& rep_means) {
  SimEstimate e;
  e.rep_means = rep_means;
  const std::size_t n = rep_means.size();
  double total = 0.0;
  for (double v : rep_means) total += v;
  e.mean = total / static_cast<double>(n);
  if (n < 2) {
    e.ci_halfwidth = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  double ss = 0.0;
  for (double v : rep_means) ss += (v - e.mean) * (v - e.mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  e.ci_halfwidth = kZ99 * sd / std::sqrt(static_cast<double>(n));
  return e;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SimulatorOne::SimulatorOne(const ModelParams& p, std::uint64_t seed)
    : n_(static_cast<std::size_t>(p.n_owners)),
      lambda_(p.lambda),
      mu_(p.mu),
      gamma_(p.gamma),
      rng_(seed) {
  p.validate();
}

double SimulatorOne::uniform01() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double SimulatorOne::total_rate() const {
  const std::size_t pairs = std::min(waiting_.size(), idle_count());
  return lambda_ + static_cast<double>(pairs) * gamma_ +
         static_cast<double>(serving_.size()) * mu_;
}

SimulatorOne::Step SimulatorOne::step() {
  const std::size_t pairs = std::min(waiting_.size(), idle_count());
  const double rate_match = static_cast<double>(pairs) * gamma_;
  const double rate_service = static_cast<double>(serving_.size()) * mu_;
  const double total = lambda_ + rate_match + rate_service;
  if (total <= 0.0) throw SolverError("simulator: no enabled transition");

  Step st;
  st.dt = exp_draw(uniform01(), total);
  now_ += st.dt;

  const double pick = uniform01() * total;
  if (pick < lambda_) {
    st.type = SimEvent::arrival;
    waiting_.push_back(now_);
  } else if (pick < lambda_ + rate_match) {
    st.type = SimEvent::match;
    // the head min(i,j) seekers are pairing; each finishes at the same rate
    const std::size_t idx =
        std::min(static_cast<std::size_t>(uniform01() * static_cast<double>(pairs)),
                 pairs - 1);
    serving_.push_back(waiting_[idx]);
    waiting_.erase(waiting_.begin() + static_cast<std::ptrdiff_t>(idx));
  } else {
    st.type = SimEvent::service;
    const std::size_t idx = std::min(
        static_cast<std::size_t>(uniform01() * static_cast<double>(serving_.size())),
        serving_.size() - 1);
    st.sojourn = now_ - serving_[idx];
    serving_[idx] = serving_.back();
    serving_.pop_back();
  }
  return st;
}

void SimulatorOne::set_state(std::size_t waiting, std::size_t busy) {
  if (busy > n_) throw DimensionError("simulator: busy count exceeds the pool");
  waiting_.assign(waiting, now_);
  serving_.assign(busy, now_);
}

SimulatorTwo::SimulatorTwo(const ModelParams& p, std::uint64_t seed)
    : n_(static_cast<std::size_t>(p.n_owners)),
      lambda_(p.lambda),
      mu_(p.mu),
      gamma_(p.gamma),
      rng_(seed) {
  p.validate();
}

double SimulatorTwo::uniform01() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double SimulatorTwo::total_rate() const {
  return lambda_ + static_cast<double>(n1_) * gamma_ + static_cast<double>(n2_) * mu_;
}

SimulatorTwo::Step SimulatorTwo::step() {
  const double rate_match = static_cast<double>(n1_) * gamma_;
  const double rate_service = static_cast<double>(n2_) * mu_;
  const double total = lambda_ + rate_match + rate_service;
  if (total <= 0.0) throw SolverError("simulator: no enabled transition");

  Step st;
  st.dt = exp_draw(uniform01(), total);
  now_ += st.dt;

  const double pick = uniform01() * total;
  if (pick < lambda_) {
    st.type = SimEvent::arrival;
    if (stages_.size() < n_) {
      stages_.push_back(1);
      arrivals_.push_back(now_);
      ++n1_;
    } else {
      waiting_.push_back(now_);
    }
  } else if (pick < lambda_ + rate_match) {
    st.type = SimEvent::match;
    std::size_t want =
        std::min(static_cast<std::size_t>(uniform01() * static_cast<double>(n1_)),
                 n1_ - 1);
    for (std::size_t k = 0; k < stages_.size(); ++k) {
      if (stages_[k] != 1) continue;
      if (want == 0) {
        stages_[k] = 2;
        --n1_;
        ++n2_;
        break;
      }
      --want;
    }
  } else {
    st.type = SimEvent::service;
    std::size_t want =
        std::min(static_cast<std::size_t>(uniform01() * static_cast<double>(n2_)),
                 n2_ - 1);
    for (std::size_t k = 0; k < stages_.size(); ++k) {
      if (stages_[k] != 2) continue;
      if (want == 0) {
        st.sojourn = now_ - arrivals_[k];
        if (!waiting_.empty()) {
          stages_[k] = 1;
          arrivals_[k] = waiting_.front();
          waiting_.pop_front();
          ++n1_;
        } else {
          stages_[k] = stages_.back();
          arrivals_[k] = arrivals_.back();
          stages_.pop_back();
          arrivals_.pop_back();
        }
        --n2_;
        break;
      }
      --want;
    }
  }
  return st;
}

void SimulatorTwo::set_state(std::size_t waiting, std::size_t stage1, std::size_t stage2) {
  if (stage1 + stage2 > n_) throw DimensionError("simulator: working count exceeds the pool");
  waiting_.assign(waiting, now_);
  stages_.clear();
  arrivals_.clear();
  for (std::size_t k = 0; k < stage1; ++k) stages_.push_back(1);
  for (std::size_t k = 0; k < stage2; ++k) stages_.push_back(2);
  arrivals_.assign(stage1 + stage2, now_);
  n1_ = stage1;
  n2_ = stage2;
}

namespace {

template <typename Sim, typename WaitingFn, typename IdleFn>
void run_replication(Sim& sim, const SimConfig& cfg, const std::vector<double>& grid,
                     WaitingFn waiting_of, IdleFn idle_of, double& mean_waiting,
                     double& mean_idle, double& throughput, double& mean_sojourn,
                     std::vector<double>& cdf, std::size_t& departures_out) {
  const std::size_t warmup =
      static_cast<std::size_t>(cfg.warmup_fraction * static_cast<double>(cfg.max_events));
  double elapsed = 0.0, int_waiting = 0.0, int_idle = 0.0, sojourn_total = 0.0;
  std::size_t departures = 0;
  std::vector<std::size_t> cdf_hits(grid.size(), 0);

  for (std::size_t ev = 0; ev < cfg.max_events; ++ev) {
    if (sim.total_rate() <= 0.0) break;
    const double w_before = static_cast<double>(waiting_of(sim));
    const double i_before = static_cast<double>(idle_of(sim));
    const auto st = sim.step();
    if (ev < warmup) continue;
    elapsed += st.dt;
    int_waiting += w_before * st.dt;
    int_idle += i_before * st.dt;
    if (st.type == SimEvent::service) {
      ++departures;
      sojourn_total += st.sojourn;
      for (std::size_t g = 0; g < grid.size(); ++g)
        if (st.sojourn <= grid[g]) ++cdf_hits[g];
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  mean_waiting = elapsed > 0.0 ? int_waiting / elapsed : nan;
  mean_idle = elapsed > 0.0 ? int_idle / elapsed : nan;
  throughput = elapsed > 0.0 ? static_cast<double>(departures) / elapsed : nan;
  mean_sojourn = departures > 0 ? sojourn_total / static_cast<double>(departures) : nan;
  cdf.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
    cdf[g] = departures > 0
                 ? static_cast<double>(cdf_hits[g]) / static_cast<double>(departures)
                 : nan;
  departures_out = departures;
}

}  // namespace

SimResult simulate(Model model, const ModelParams& p, const SimConfig& cfg,
                   const std::vector<double>& cdf_grid) {
  p.validate();
  if (cfg.replications < 1) throw ConfigError("simulate: need at least one replication");
  if (!(cfg.warmup_fraction >= 0.0 && cfg.warmup_fraction < 1.0))
    throw ConfigError("simulate: warmup_fraction must lie in [0, 1)");

  std::vector<double> waiting_means, idle_means, tput_means, sojourn_means;
  std::vector<std::vector<double>> cdfs;
  std::size_t departures = 0;

  for (int rep = 0; rep < cfg.replications; ++rep) {
    const std::uint64_t seed = mix_seed(cfg.base_seed + static_cast<std::uint64_t>(rep));
    double w, i, t, s;
    std::vector<double> cdf;
    std::size_t dep = 0;
    if (model == Model::one) {
      SimulatorOne sim(p, seed);
      run_replication(
          sim, cfg, cdf_grid, [](const SimulatorOne& s_) { return s_.waiting_count(); },
          [](const SimulatorOne& s_) { return s_.idle_count(); }, w, i, t, s, cdf, dep);
    } else {
      SimulatorTwo sim(p, seed);
      run_replication(
          sim, cfg, cdf_grid, [](const SimulatorTwo& s_) { return s_.waiting_count(); },
          [](const SimulatorTwo& s_) { return s_.idle_count(); }, w, i, t, s, cdf, dep);
    }
    waiting_means.push_back(w);
    idle_means.push_back(i);
    tput_means.push_back(t);
    sojourn_means.push_back(s);
    cdfs.push_back(std::move(cdf));
    departures += dep;
  }

  SimResult out;
  out.waiting_seekers = reduce(waiting_means);
  out.idle_owners = reduce(idle_means);
  out.throughput = reduce(tput_means);
  out.sojourn_mean = reduce(sojourn_means);
  out.departures = departures;
  out.sojourn_cdf.assign(cdf_grid.size(), 0.0);
  for (std::size_t g = 0; g < cdf_grid.size(); ++g) {
    double total = 0.0;
    for (const auto& c : cdfs) total += c[g];
    out.sojourn_cdf[g] = total / static_cast<double>(cdfs.size());
  }
  return out;
}

}  // namespace pqbd
