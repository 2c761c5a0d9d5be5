#pragma once

#include <cstddef>

#include "platform_qbd/dense_matrix.hpp"
#include "platform_qbd/params.hpp"

namespace pqbd {

// Brute-force reference: build the generator of the chain truncated at a
// finite level count directly from the transition rules, state by state,
// without reusing the block constructors. The last level reflects (dropped
// outflow folds into the diagonal), so the result is a proper generator.
Mat rule_generator_one(const ModelParams& p, std::size_t levels);
Mat rule_generator_two(const ModelParams& p, std::size_t levels);

struct TruncatedStationary {
  Model model = Model::one;
  int n_owners = 1;
  std::size_t levels = 0;       // repeated levels kept (1..levels)
  std::size_t level0_size = 0;  // states below the repeating part
  std::size_t repeat_size = 0;
  Vec probs;        // stationary vector over all truncated states
  double tail_mass = 0.0;  // probability of the last kept level
  double eq1 = 0.0;        // mean idle owners, summed from the states
  double eq2 = 0.0;        // mean waiting seekers, summed from the states
};

TruncatedStationary truncated_stationary(Model model, const ModelParams& p,
                                         std::size_t levels);

// Smallest truncation whose tail mass drops below `tail_tol`, starting from
// `levels` and doubling. Throws NonConvergenceError past `max_levels`.
TruncatedStationary truncated_stationary_auto(Model model, const ModelParams& p,
                                              std::size_t levels, double tail_tol,
                                              std::size_t max_levels = 100000);

}  // namespace pqbd
