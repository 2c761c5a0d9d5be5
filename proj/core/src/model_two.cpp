#include "platform_qbd/model_two.hpp"

#include <string>

#include "platform_qbd/errors.hpp"

namespace pqbd {

namespace {

void set_block(Mat& dst, std::size_t r0, std::size_t c0, const Mat& src) {
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) dst(r0 + i, c0 + j) = src(i, j);
}

void check_capacity(int n) {
  if (n > kMaxOwnersTwo)
    throw CapacityError("model two needs 2^" + std::to_string(n) +
                        " phases per level; the cap is n_owners <= " +
                        std::to_string(kMaxOwnersTwo));
}

Mat row_mat(const Vec& v) {
  Mat m(1, v.size());
  for (std::size_t j = 0; j < v.size(); ++j) m(0, j) = v[j];
  return m;
}

Mat col_mat(const Vec& v) {
  Mat m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

// sum over owner positions m of I^(m-1) ⊗ core ⊗ I^(n-m)
Mat positionwise_sum(const Mat& core, int n) {
  Mat total;
  const Mat eye2 = Mat::identity(2);
  for (int m = 1; m <= n; ++m) {
    Mat term = Mat::identity(1);
    for (int k = 1; k <= n; ++k)
      term = kron_product(term, k == m ? core : eye2);
    total = (m == 1) ? term : total + term;
  }
  return total;
}

}  // namespace

PhRep ph_generalized_erlang(double gamma, double mu) {
  PhRep ph;
  ph.alpha = {1.0, 0.0};
  ph.t = Mat(2, 2);
  ph.t(0, 0) = -gamma;
  ph.t(0, 1) = gamma;
  ph.t(1, 1) = -mu;
  ph.exit = {0.0, mu};
  return ph;
}

std::size_t phase_index_two(const std::vector<int>& stages) {
  std::size_t idx = 0;
  for (int s : stages) {
    if (s != 1 && s != 2) throw DimensionError("stage tuple entries must be 1 or 2");
    idx = idx * 2 + static_cast<std::size_t>(s - 1);
  }
  return idx;
}

std::vector<int> index_phase_two(int n, std::size_t index) {
  if (n < 0 || index >= (std::size_t{1} << n))
    throw DimensionError("phase index out of range");
  std::vector<int> stages(n);
  for (int k = n - 1; k >= 0; --k) {
    stages[k] = 1 + static_cast<int>(index & 1u);
    index >>= 1;
  }
  return stages;
}

std::size_t level0_offset_two(int n) { return (std::size_t{1} << n) - 1; }

Mat stage_generator_two(const PhRep& ph, int n) {
  Mat g = Mat(1, 1);
  for (int k = 0; k < n; ++k) g = kron_sum(g, ph.t);
  return g;
}

Mat arrival_expand_two(const PhRep& ph, int n) {
  return kron_product(Mat::identity(std::size_t{1} << n), row_mat(ph.alpha));
}

Mat completion_contract_two(const PhRep& ph, int n) {
  if (n < 1) throw DimensionError("completion map needs at least one working owner");
  return positionwise_sum(col_mat(ph.exit), n);
}

QbdBlocksTwo build_blocks_two(const ModelParams& p) {
  p.validate();
  check_capacity(p.n_owners);
  const int n = p.n_owners;
  const PhRep ph = ph_generalized_erlang(p.gamma, p.mu);

  QbdBlocksTwo q;
  q.n_owners = n;
  const std::size_t m = q.repeat_size();

  q.up = Mat(m, m);
  for (std::size_t i = 0; i < m; ++i) q.up(i, i) = p.lambda;

  q.local = stage_generator_two(ph, n);
  for (std::size_t i = 0; i < m; ++i) q.local(i, i) -= p.lambda;

  // completion hands the slot straight to the waiting queue's head
  q.down = positionwise_sum(col_mat(ph.exit) * row_mat(ph.alpha), n);

  q.band.diag.clear();
  q.band.up.clear();
  q.band.down.clear();
  for (int k = 0; k < n; ++k) {
    Mat d = stage_generator_two(ph, k);
    for (std::size_t i = 0; i < d.rows(); ++i) d(i, i) -= p.lambda;
    q.band.diag.push_back(std::move(d));
    if (k > 0) q.band.down.push_back(completion_contract_two(ph, k));
    if (k + 1 < n) q.band.up.push_back(p.lambda * arrival_expand_two(ph, k));
  }
  q.band.to_level1 = p.lambda * arrival_expand_two(ph, n - 1);
  q.band.from_level1 = completion_contract_two(ph, n);

  const std::size_t l0 = q.level0_size();
  q.level0_local = Mat(l0, l0);
  for (int k = 0; k < n; ++k) {
    const std::size_t off = level0_offset_two(k);
    set_block(q.level0_local, off, off, q.band.diag[k]);
    if (k > 0) set_block(q.level0_local, off, level0_offset_two(k - 1), q.band.down[k - 1]);
    if (k + 1 < n) set_block(q.level0_local, off, level0_offset_two(k + 1), q.band.up[k]);
  }

  q.level0_up = Mat(l0, m);
  set_block(q.level0_up, level0_offset_two(n - 1), 0, q.band.to_level1);

  q.level1_down = Mat(m, l0);
  set_block(q.level1_down, 0, level0_offset_two(n - 1), q.band.from_level1);
  return q;
}

Vec drift_vector_two(double gamma, double mu) {
  return {mu / (gamma + mu), gamma / (gamma + mu)};
}

Mat assemble_truncated_generator_two(const ModelParams& p, std::size_t levels) {
  if (levels < 1) throw DimensionError("truncation needs at least one repeating level");
  const QbdBlocksTwo q = build_blocks_two(p);
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
