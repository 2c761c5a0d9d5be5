#include "platform_qbd/model_one.hpp"

#include <algorithm>

#include "platform_qbd/errors.hpp"

namespace pqbd {

namespace {

// writes src into dst with its top-left corner at (r0, c0)
void set_block(Mat& dst, std::size_t r0, std::size_t c0, const Mat& src) {
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) dst(r0 + i, c0 + j) = src(i, j);
}

}  // namespace

Mat repeated_down_block_one(const ModelParams& p) {
  const std::size_t m = static_cast<std::size_t>(p.n_owners) + 1;
  Mat a(m, m);
  // pairing consumes one idle owner; with at least N waiting seekers every
  // idle owner is matched, so the rate from phase j is j*gamma
  for (std::size_t j = 1; j < m; ++j) a(j, j - 1) = static_cast<double>(j) * p.gamma;
  return a;
}

Mat repeated_local_block_one(const ModelParams& p) {
  const int n = p.n_owners;
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  Mat b(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    const double busy = static_cast<double>(n - static_cast<int>(j));
    b(j, j) = -(p.lambda + busy * p.mu + static_cast<double>(j) * p.gamma);
    if (j + 1 < m) b(j, j + 1) = busy * p.mu;  // a busy owner finishes
  }
  return b;
}

Mat repeated_up_block_one(const ModelParams& p) {
  const std::size_t m = static_cast<std::size_t>(p.n_owners) + 1;
  Mat c(m, m);
  for (std::size_t j = 0; j < m; ++j) c(j, j) = p.lambda;
  return c;
}

Mat boundary_local_block_one(const ModelParams& p, int k) {
  const int n = p.n_owners;
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  Mat b(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    const int jj = static_cast<int>(j);
    const double busy = static_cast<double>(n - jj);
    const double pairing = static_cast<double>(std::min(jj, k)) * p.gamma;
    b(j, j) = -(p.lambda + pairing + busy * p.mu);
    if (j + 1 < m) b(j, j + 1) = busy * p.mu;
  }
  return b;
}

Mat boundary_down_block_one(const ModelParams& p, int k) {
  const int n = p.n_owners;
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  Mat a(m, m);
  // only min(j, k) pairs can form when k seekers wait and j owners idle
  for (std::size_t j = 1; j < m; ++j)
    a(j, j - 1) = static_cast<double>(std::min(static_cast<int>(j), k)) * p.gamma;
  return a;
}

QbdBlocksOne build_blocks_one(const ModelParams& p) {
  p.validate();
  QbdBlocksOne q;
  q.n_owners = p.n_owners;
  q.down = repeated_down_block_one(p);
  q.local = repeated_local_block_one(p);
  q.up = repeated_up_block_one(p);

  const int n = p.n_owners;
  const std::size_t m = q.repeat_size();
  const std::size_t l0 = q.level0_size();

  q.band.diag.clear();
  q.band.up.clear();
  q.band.down.clear();
  for (int k = 0; k < n; ++k) {
    q.band.diag.push_back(boundary_local_block_one(p, k));
    if (k > 0) q.band.down.push_back(boundary_down_block_one(p, k));
    if (k + 1 < n) q.band.up.push_back(repeated_up_block_one(p));
  }
  q.band.to_level1 = repeated_up_block_one(p);
  q.band.from_level1 = boundary_down_block_one(p, n);

  q.level0_local = Mat(l0, l0);
  for (int k = 0; k < n; ++k) {
    set_block(q.level0_local, k * m, k * m, q.band.diag[k]);
    if (k > 0) set_block(q.level0_local, k * m, (k - 1) * m, q.band.down[k - 1]);
    if (k + 1 < n) set_block(q.level0_local, k * m, (k + 1) * m, q.band.up[k]);
  }

  q.level0_up = Mat(l0, m);
  set_block(q.level0_up, (n - 1) * m, 0, q.band.to_level1);

  q.level1_down = Mat(m, l0);
  set_block(q.level1_down, 0, (n - 1) * m, q.band.from_level1);
  return q;
}

std::pair<std::size_t, std::size_t> StateIndexOne::to_level_phase(
    std::size_t waiting, std::size_t idle) const {
  const std::size_t n = static_cast<std::size_t>(n_owners);
  if (idle > n) throw DimensionError("state index: idle owners out of range");
  if (waiting < n) return {0, waiting * (n + 1) + idle};
  return {waiting - n + 1, idle};
}

std::pair<std::size_t, std::size_t> StateIndexOne::to_state(std::size_t level,
                                                            std::size_t phase) const {
  const std::size_t n = static_cast<std::size_t>(n_owners);
  if (level == 0) {
    if (phase >= n * (n + 1)) throw DimensionError("state index: phase out of range");
    return {phase / (n + 1), phase % (n + 1)};
  }
  if (phase > n) throw DimensionError("state index: phase out of range");
  return {n + level - 1, phase};
}

std::size_t StateIndexOne::flat_index(std::size_t waiting, std::size_t idle) const {
  const std::size_t n = static_cast<std::size_t>(n_owners);
  const auto [level, phase] = to_level_phase(waiting, idle);
  if (level == 0) return phase;
  return n * (n + 1) + (level - 1) * (n + 1) + phase;
}

Mat assemble_truncated_generator_one(const ModelParams& p, std::size_t levels) {
  if (levels < 1) throw DimensionError("truncation needs at least one repeating level");
  const QbdBlocksOne q = build_blocks_one(p);
  const std::size_t m = q.repeat_size();
  const std::size_t l0 = q.level0_size();
  const std::size_t dim = l0 + levels * m;

  Mat g(dim, dim);
  set_block(g, 0, 0, q.level0_local);
  set_block(g, 0, l0, q.level0_up);
  set_block(g, l0, 0, q.level1_down);

  const Mat folded = q.local + q.up;
  for (std::size_t k = 1; k <= levels; ++k) {
    const std::size_t r = l0 + (k - 1) * m;
    set_block(g, r, r, k == levels ? folded : q.local);
    if (k >= 2) set_block(g, r, r - m, q.down);
    if (k < levels) set_block(g, r, r + m, q.up);
  }
  return g;
}

}  // namespace pqbd
