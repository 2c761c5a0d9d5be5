#include "platform_qbd/qbd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "platform_qbd/errors.hpp"

namespace pqbd {

namespace {

double max_entry_delta(const Mat& a, const Mat& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

// worst entrywise decrease from a to b (0 when b >= a)
double decrease_defect(const Mat& a, const Mat& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    d = std::max(d, a.data()[i] - b.data()[i]);
  return d;
}

double quadratic_defect(const Mat& r, const Mat& down, const Mat& local, const Mat& up) {
  return max_abs(r * r * down + r * local + up);
}

}  // namespace

RateMatrixSolution solve_rate_matrix(const Mat& down, const Mat& local, const Mat& up,
                                     const SolverOptions& opts) {
  const std::size_t n = local.rows();
  if (down.rows() != n || down.cols() != n || up.rows() != n || up.cols() != n ||
      local.cols() != n)
    throw DimensionError("rate matrix: blocks must be square and same size");

  // right division by the local block: X local = M  <=>  local^T X^T = M^T
  const LuFactor lu_local_t(transpose(local));

  RateMatrixSolution out;
  out.r = Mat(n, n);
  double last_delta = 0.0;
  double last_residual = std::numeric_limits<double>::infinity();
  int stagnant = 0;

  for (long it = 1; it <= opts.max_iter; ++it) {
    const Mat s = out.r * out.r * down + up;
    Mat next = transpose(lu_local_t.solve(transpose(s)));
    next *= -1.0;

    last_delta = max_entry_delta(next, out.r);
    out.monotonicity_defect = std::max(out.monotonicity_defect, decrease_defect(out.r, next));
    out.r = std::move(next);
    out.iterations = it;

    if (last_delta < opts.epsilon) {
      if (opts.residual_target <= 0.0) break;
      const double res = quadratic_defect(out.r, down, local, up);
      if (res <= opts.residual_target) break;
      // keep polishing until the defect stops improving
      if (res >= last_residual * 0.999) {
        if (++stagnant >= 8) break;
      } else {
        stagnant = 0;
      }
      last_residual = res;
    }
    if (it == opts.max_iter)
      throw NonConvergenceError("rate matrix iteration did not converge (delta " +
                                    std::to_string(last_delta) + ")",
                                it, last_delta);
  }

  out.residual = quadratic_defect(out.r, down, local, up);
  out.spectral_radius = spectral_radius(out.r);
  return out;
}

Mat solve_g_matrix(const Mat& down, const Mat& local, const Mat& up,
                   const SolverOptions& opts) {
  const std::size_t n = local.rows();
  if (down.rows() != n || down.cols() != n || up.rows() != n || up.cols() != n ||
      local.cols() != n)
    throw DimensionError("g matrix: blocks must be square and same size");

  const LuFactor lu_local(local);
  Mat g(n, n);
  for (long it = 1; it <= opts.max_iter; ++it) {
    Mat s = down + up * g * g;
    s *= -1.0;
    Mat next = lu_local.solve(std::move(s));
    const double delta = max_entry_delta(next, g);
    g = std::move(next);
    if (delta < opts.epsilon) return g;
  }
  throw NonConvergenceError("first-passage iteration did not converge", opts.max_iter, 0.0);
}

Vec level_vector(const StationarySolution& s, std::size_t level) {
  if (level == 0) return s.pi0;
  Vec v = s.pi1;
  for (std::size_t k = 1; k < level; ++k) v = vec_mat(v, s.r);
  return v;
}

namespace {

struct BandSolveOut {
  Vec pi0;
  Vec pi1;
};

// Stationary vector of a chain whose boundary is block-tridiagonal and whose
// repeating part has already been summarized by u = local + r down. Censors
// sub-level by sub-level down to the lowest block, solves there, and unrolls.
BandSolveOut solve_band(const BoundaryBand& band, const Mat& u, const Mat& r) {
  const std::size_t m = band.diag.size();
  const LuFactor lu_u(u);

  std::vector<Mat> w(m);
  w[m - 1] = band.diag[m - 1] - band.to_level1 * lu_u.solve(band.from_level1);
  for (std::size_t k = m - 1; k-- > 0;) {
    const LuFactor lu_next(w[k + 1]);
    w[k] = band.diag[k] - band.up[k] * lu_next.solve(band.down[k]);
  }

  std::vector<Vec> x(m);
  x[0] = stationary_from_generator(w[0]);
  for (std::size_t k = 1; k < m; ++k) {
    Vec t = vec_mat(x[k - 1], band.up[k - 1]);
    for (double& v : t) v = -v;
    x[k] = LuFactor(transpose(w[k])).solve(std::move(t));
  }

  Vec t = vec_mat(x[m - 1], band.to_level1);
  for (double& v : t) v = -v;
  Vec pi1 = LuFactor(transpose(u)).solve(std::move(t));

  // normalize over the whole chain
  const std::size_t rep = u.rows();
  Mat eye_r = Mat::identity(rep);
  eye_r -= r;
  const Vec h = LuFactor(eye_r).solve(ones(rep));
  double total = dot(pi1, h);
  for (const Vec& xv : x) total += sum(xv);

  BandSolveOut out;
  out.pi0.reserve(m * band.diag[0].rows());
  for (const Vec& xv : x)
    for (double v : xv) out.pi0.push_back(v / total);
  for (double& v : pi1) v /= total;
  out.pi1 = std::move(pi1);

  // sweep away roundoff-scale negatives
  for (double& v : out.pi0)
    if (v < 0.0 && v > -1e-12) v = 0.0;
  for (double& v : out.pi1)
    if (v < 0.0 && v > -1e-12) v = 0.0;
  return out;
}

template <typename Blocks>
StationarySolution finish_solution(const Blocks& blocks, const RateMatrixSolution& rate,
                                   Model model) {
  const Mat u = blocks.local + rate.r * blocks.down;
  BandSolveOut band = solve_band(blocks.band, u, rate.r);

  StationarySolution s;
  s.model = model;
  s.n_owners = blocks.n_owners;
  s.pi0 = std::move(band.pi0);
  s.pi1 = std::move(band.pi1);
  s.r = rate.r;
  s.residual_r = rate.residual;
  s.sp_r = rate.spectral_radius;
  s.iterations = rate.iterations;

  const Vec pi2 = vec_mat(s.pi1, s.r);
  const Vec pi3 = vec_mat(pi2, s.r);
  Vec res0 = vec_mat(s.pi0, blocks.level0_local);
  {
    const Vec t = vec_mat(s.pi1, blocks.level1_down);
    for (std::size_t i = 0; i < res0.size(); ++i) res0[i] += t[i];
  }
  Vec res1 = vec_mat(s.pi0, blocks.level0_up);
  {
    const Vec t1 = vec_mat(s.pi1, blocks.local);
    const Vec t2 = vec_mat(pi2, blocks.down);
    for (std::size_t i = 0; i < res1.size(); ++i) res1[i] += t1[i] + t2[i];
  }
  Vec res2 = vec_mat(s.pi1, blocks.up);
  {
    const Vec t1 = vec_mat(pi2, blocks.local);
    const Vec t2 = vec_mat(pi3, blocks.down);
    for (std::size_t i = 0; i < res2.size(); ++i) res2[i] += t1[i] + t2[i];
  }
  s.balance_residual = std::max({max_abs(res0), max_abs(res1), max_abs(res2)});
  return s;
}

}  // namespace

StationarySolution solve_boundary(const QbdBlocksOne& blocks, const RateMatrixSolution& rate) {
  return finish_solution(blocks, rate, Model::one);
}

StationarySolution solve_boundary(const QbdBlocksTwo& blocks, const RateMatrixSolution& rate) {
  return finish_solution(blocks, rate, Model::two);
}

StationarySolution solve_model(Model model, const ModelParams& p, const SolverOptions& opts) {
  p.validate();
  const double rho = traffic_intensity(p);
  if (rho >= 1.0)
    throw UnstableModelError("instance is unstable (rho = " + std::to_string(rho) + ")");

  if (model == Model::one) {
    const QbdBlocksOne blocks = build_blocks_one(p);
    const RateMatrixSolution rate = solve_rate_matrix(blocks.down, blocks.local, blocks.up, opts);
    return solve_boundary(blocks, rate);
  }
  const QbdBlocksTwo blocks = build_blocks_two(p);
  const RateMatrixSolution rate = solve_rate_matrix(blocks.down, blocks.local, blocks.up, opts);
  return solve_boundary(blocks, rate);
}

}  // namespace pqbd
