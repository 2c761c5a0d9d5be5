#pragma once

#include <cstddef>
#include <vector>

#include "platform_qbd/dense_matrix.hpp"
#include "platform_qbd/params.hpp"
#include "platform_qbd/qbd_solver.hpp"

namespace pqbd {

// Absorbing chain for the time until the waiting room next empties, started
// from stationarity. Absorbing set: states without waiting seekers. The
// transient part keeps the level/phase layout with the boundary reduced to
// its sub-levels 1..N-1 (empty when N == 1, where the first repeating level
// absorbs directly).
struct AbsorbingChainOne {
  int n_owners = 1;

  std::vector<Mat> band_diag;  // boundary sub-levels 1..N-1
  std::vector<Mat> band_down;  // band block b+1 -> b
  double up_rate = 0.0;        // every upward block is up_rate * I
  Mat from_level1;             // first repeating level -> last band block

  Mat down, local, up;  // repeating blocks

  Vec absorb;  // absorption rates out of the first transient block

  double omega_delta = 0.0;  // stationary mass starting inside the absorbing set
  Vec omega_band;
  Vec pi1;  // level weights: omega_k = pi1 R^(k-1)
  Mat r;
  double sp_r = 0.0;

  std::size_t phase_size() const { return static_cast<std::size_t>(n_owners) + 1; }
  std::size_t band_size() const { return band_diag.size() * phase_size(); }
};

AbsorbingChainOne build_absorbing_chain(const ModelParams& p, const StationarySolution& s);

// Right-hand side for (-T) y = rhs: an explicit prefix of level blocks and a
// constant continuation for every level past it.
struct LevelRhs {
  Vec band;
  std::vector<Vec> levels;
  Vec tail;
};

struct CensoredInverseResult {
  Vec band;
  std::vector<Vec> levels;
  double residual = 0.0;  // max-entry defect over the materialized rows
  std::size_t levels_used = 0;
};

// Applies (-T)^{-1} by factoring the transient generator into level-censored
// pieces; cost is linear in the number of materialized levels.
CensoredInverseResult censored_inverse_apply(const AbsorbingChainOne& chain,
                                             const LevelRhs& rhs, double tol = 1e-10,
                                             std::size_t min_levels = 0);

struct SojournMean {
  double mean = 0.0;
  double residual = 0.0;
  std::size_t levels_used = 0;
};

// Mean absorption time weighted by the stationary start distribution.
SojournMean expected_sojourn_rg(const AbsorbingChainOne& chain, double tol = 1e-10);

// P(absorbed by t) for each requested time; one shared truncation, evaluated
// by uniformization over the block structure (never densified).
Vec sojourn_cdf(const AbsorbingChainOne& chain, const Vec& times, double tol = 1e-10);

// Dense truncation of the transient generator (upward rate of the last kept
// level folded into its diagonal) with absorption column and start weights.
// Test aid; quadratic memory in the level count.
struct TruncatedChain {
  Mat t;
  Vec absorb;
  Vec omega;
};
TruncatedChain materialize_chain(const AbsorbingChainOne& chain, std::size_t levels);

}  // namespace pqbd
