#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "platform_qbd/params.hpp"

namespace pqbd {

struct SimConfig {
  std::size_t max_events = 500000;
  double warmup_fraction = 0.2;  // leading share of events excluded
  int replications = 20;
  std::uint64_t base_seed = 1;
};

struct SimEstimate {
  double mean = 0.0;
  double ci_halfwidth = 0.0;  // 99% normal CI across replications; NaN for one rep
  std::vector<double> rep_means;
};

struct SimResult {
  SimEstimate idle_owners;
  SimEstimate waiting_seekers;
  SimEstimate throughput;
  SimEstimate sojourn_mean;
  std::vector<double> sojourn_cdf;  // per grid point, averaged over replications
  std::size_t departures = 0;
};

// splitmix64 finalizer; replication r runs on mix_seed(base_seed + r)
std::uint64_t mix_seed(std::uint64_t x);

enum class SimEvent { arrival, match, service };

// One replication of the matching-queue model, advanced event by event.
// Exposed so tests can pin a state and tally transition frequencies.
class SimulatorOne {
 public:
  struct Step {
    SimEvent type;
    double dt = 0.0;
    double sojourn = -1.0;  // set on service events
  };

  SimulatorOne(const ModelParams& p, std::uint64_t seed);

  double total_rate() const;
  Step step();

  std::size_t waiting_count() const { return waiting_.size(); }
  std::size_t busy_count() const { return serving_.size(); }
  std::size_t idle_count() const { return n_ - serving_.size(); }
  double now() const { return now_; }

  // overwrite the state; entity clocks restart at the current time
  void set_state(std::size_t waiting, std::size_t busy);

 private:
  double uniform01();

  std::size_t n_;
  double lambda_, mu_, gamma_;
  double now_ = 0.0;
  std::deque<double> waiting_;   // arrival stamps, oldest first
  std::vector<double> serving_;  // arrival stamps of seekers in service
  std::mt19937_64 rng_;
};

// One replication of the two-stage model.
class SimulatorTwo {
 public:
  using Step = SimulatorOne::Step;

  SimulatorTwo(const ModelParams& p, std::uint64_t seed);

  double total_rate() const;
  Step step();

  std::size_t waiting_count() const { return waiting_.size(); }
  std::size_t working_count() const { return stages_.size(); }
  std::size_t idle_count() const { return n_ - stages_.size(); }
  std::size_t stage1_count() const { return n1_; }
  std::size_t stage2_count() const { return n2_; }
  double now() const { return now_; }

  void set_state(std::size_t waiting, std::size_t stage1, std::size_t stage2);

 private:
  double uniform01();

  std::size_t n_;
  double lambda_, mu_, gamma_;
  double now_ = 0.0;
  std::deque<double> waiting_;
  std::vector<int> stages_;       // stage per working owner
  std::vector<double> arrivals_;  // arrival stamp of the seeker each owner serves
  std::size_t n1_ = 0, n2_ = 0;
  std::mt19937_64 rng_;
};

// Replications are reduced in index order, so results depend only on the
// configuration, never on scheduling.
SimResult simulate(Model model, const ModelParams& p, const SimConfig& cfg,
                   const std::vector<double>& cdf_grid = {});

}  // namespace pqbd
