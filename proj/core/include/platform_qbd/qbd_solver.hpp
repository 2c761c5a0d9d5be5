#pragma once

#include <cstddef>

#include "platform_qbd/dense_matrix.hpp"
#include "platform_qbd/model_one.hpp"
#include "platform_qbd/model_two.hpp"
#include "platform_qbd/params.hpp"

namespace pqbd {

struct SolverOptions {
  double epsilon = 1e-12;       // stop when successive iterates agree entrywise
  long max_iter = 100000;
  double residual_target = 0.0;  // optional: keep polishing until the defect
                                 // of the quadratic drops below this bound
};

struct RateMatrixSolution {
  Mat r;
  long iterations = 0;
  double residual = 0.0;            // max-entry defect of R^2 down + R local + up
  double spectral_radius = 0.0;
  double monotonicity_defect = 0.0;  // worst observed decrease between iterates
};

// Minimal nonnegative solution of R^2 down + R local + up = 0 by successive
// substitution from R = 0. Iterates increase entrywise toward the limit.
RateMatrixSolution solve_rate_matrix(const Mat& down, const Mat& local, const Mat& up,
                                     const SolverOptions& opts = {});

// Minimal nonnegative solution of down + local G + up G^2 = 0 (first-passage
// probabilities one level down).
Mat solve_g_matrix(const Mat& down, const Mat& local, const Mat& up,
                   const SolverOptions& opts = {});

struct StationarySolution {
  Model model = Model::one;
  int n_owners = 1;
  Vec pi0;  // boundary level
  Vec pi1;  // first repeating level; level k is pi1 R^(k-1)
  Mat r;
  double residual_r = 0.0;
  double sp_r = 0.0;
  long iterations = 0;
  double balance_residual = 0.0;  // worst cut/balance equation defect
};

Vec level_vector(const StationarySolution& s, std::size_t level);

// Boundary equations solved by censoring the chain level by level down to
// the lowest sub-level; the redundant balance equation there is replaced by
// the normalization condition.
StationarySolution solve_boundary(const QbdBlocksOne& blocks, const RateMatrixSolution& rate);
StationarySolution solve_boundary(const QbdBlocksTwo& blocks, const RateMatrixSolution& rate);

// End-to-end: blocks, rate matrix, boundary. Throws UnstableModelError when
// rho >= 1.
StationarySolution solve_model(Model model, const ModelParams& p,
                               const SolverOptions& opts = {});

}  // namespace pqbd
