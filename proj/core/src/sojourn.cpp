#include "platform_qbd/sojourn.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "platform_qbd/errors.hpp"
#include "platform_qbd/model_one.hpp"

namespace pqbd {

namespace {

Vec row_sums(const Mat& a) {
  Vec s(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s[i] += a(i, j);
  return s;
}

void set_block(Mat& dst, std::size_t r0, std::size_t c0, const Mat& src) {
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) dst(r0 + i, c0 + j) = src(i, j);
}

std::size_t geometric_horizon(double sp, double tol, std::size_t floor_levels) {
  const double s = std::clamp(sp, 1e-6, 1.0 - 1e-9);
  const double need = std::log(std::max(tol, 1e-300)) / std::log(s);
  const std::size_t k = static_cast<std::size_t>(std::max(0.0, std::ceil(need))) + 16;
  return std::clamp<std::size_t>(std::max(k, floor_levels), 8, 20000);
}

Vec scaled(const Vec& v, double f) {
  Vec out = v;
  for (double& x : out) x *= f;
  return out;
}

}  // namespace

AbsorbingChainOne build_absorbing_chain(const ModelParams& p, const StationarySolution& s) {
  p.validate();
  if (s.model != Model::one)
    throw DimensionError("absorbing chain is defined for model one only");
  if (s.n_owners != p.n_owners)
    throw DimensionError("absorbing chain: solution does not match parameters");

  const int n = p.n_owners;
  AbsorbingChainOne c;
  c.n_owners = n;
  for (int k = 1; k < n; ++k) {
    c.band_diag.push_back(boundary_local_block_one(p, k));
    if (k >= 2) c.band_down.push_back(boundary_down_block_one(p, k));
  }
  c.up_rate = p.lambda;
  c.from_level1 = boundary_down_block_one(p, n);
  c.down = repeated_down_block_one(p);
  c.local = repeated_local_block_one(p);
  c.up = repeated_up_block_one(p);
  c.absorb = row_sums(boundary_down_block_one(p, 1));

  const std::size_t m = c.phase_size();
  c.omega_delta = 0.0;
  for (std::size_t j = 0; j < m; ++j) c.omega_delta += s.pi0[j];
  c.omega_band.assign(s.pi0.begin() + static_cast<std::ptrdiff_t>(m), s.pi0.end());
  c.pi1 = s.pi1;
  c.r = s.r;
  c.sp_r = s.sp_r > 0.0 ? s.sp_r : spectral_radius(s.r);
  return c;
}

CensoredInverseResult censored_inverse_apply(const AbsorbingChainOne& chain,
                                             const LevelRhs& rhs, double tol,
                                             std::size_t min_levels) {
  const std::size_t phase = chain.phase_size();
  const std::size_t nb = chain.band_diag.size();
  if (rhs.tail.size() != phase)
    throw DimensionError("censored inverse: tail block has the wrong size");
  if (nb > 0 && rhs.band.size() != nb * phase)
    throw DimensionError("censored inverse: band rhs has the wrong size");
  for (const Vec& v : rhs.levels)
    if (v.size() != phase) throw DimensionError("censored inverse: level rhs size");

  const std::size_t prefix = rhs.levels.size();
  const std::size_t k_levels =
      geometric_horizon(chain.sp_r, tol, std::max(min_levels, prefix + 2));

  const Mat u = chain.local + chain.r * chain.down;
  const LuFactor lu_u(u);
  SolverOptions gopts;
  const Mat g = solve_g_matrix(chain.down, chain.local, chain.up, gopts);

  // w_m = sum_{j>=m} R^{j-m} rhs_j, constant past the prefix
  Mat eye_r = Mat::identity(phase);
  eye_r -= chain.r;
  const Vec w_tail = LuFactor(eye_r).solve(rhs.tail);
  std::vector<Vec> u_pref(prefix);
  {
    Vec w = w_tail;
    for (std::size_t m = prefix; m-- > 0;) {
      Vec wm = mat_vec(chain.r, w);
      for (std::size_t i = 0; i < phase; ++i) wm[i] += rhs.levels[m][i];
      u_pref[m] = lu_u.solve(wm);
      w = std::move(wm);
    }
  }
  const Vec u_tail = lu_u.solve(w_tail);

  // z_m = G z_{m-1} + u_m gives the repeating part before the band feedback
  std::vector<Vec> z(k_levels + 1);
  {
    Vec prev(phase, 0.0);
    for (std::size_t m = 1; m <= k_levels + 1; ++m) {
      Vec zm = mat_vec(g, prev);
      const Vec& um = (m <= prefix) ? u_pref[m - 1] : u_tail;
      for (std::size_t i = 0; i < phase; ++i) zm[i] += um[i];
      z[m - 1] = std::move(zm);
      prev = z[m - 1];
    }
  }

  // band solve (Schur complement in the band's last block)
  std::vector<Vec> yband(nb);
  if (nb > 0) {
    std::vector<Mat> v(nb);
    std::vector<std::unique_ptr<LuFactor>> lus(nb);
    v[nb - 1] = chain.band_diag[nb - 1] - chain.up_rate * lu_u.solve(chain.from_level1);

    std::vector<Vec> d(nb);
    for (std::size_t b = 0; b < nb; ++b)
      d[b].assign(rhs.band.begin() + static_cast<std::ptrdiff_t>(b * phase),
                  rhs.band.begin() + static_cast<std::ptrdiff_t>((b + 1) * phase));
    for (std::size_t i = 0; i < phase; ++i) d[nb - 1][i] -= chain.up_rate * z[0][i];

    for (std::size_t b = nb - 1; b-- > 0;) {
      lus[b + 1] = std::make_unique<LuFactor>(v[b + 1]);
      v[b] = chain.band_diag[b] - chain.up_rate * lus[b + 1]->solve(chain.band_down[b]);
      const Vec dn = lus[b + 1]->solve(d[b + 1]);
      for (std::size_t i = 0; i < phase; ++i) d[b][i] -= chain.up_rate * dn[i];
    }
    lus[0] = std::make_unique<LuFactor>(v[0]);
    yband[0] = lus[0]->solve(d[0]);
    for (std::size_t b = 0; b + 1 < nb; ++b) {
      Vec t = mat_vec(chain.band_down[b], yband[b]);
      for (std::size_t i = 0; i < phase; ++i) t[i] = d[b + 1][i] - t[i];
      yband[b + 1] = lus[b + 1]->solve(t);
    }
  }

  // feed the band solution back into the repeating levels
  std::vector<Vec> ylev(k_levels + 1);
  if (nb > 0) {
    Vec q1 = mat_vec(chain.from_level1, yband[nb - 1]);
    Vec gv = lu_u.solve(q1);
    for (std::size_t m = 0; m <= k_levels; ++m) {
      ylev[m] = z[m];
      for (std::size_t i = 0; i < phase; ++i) ylev[m][i] -= gv[i];
      if (m < k_levels) gv = mat_vec(g, gv);
    }
  } else {
    ylev = z;
  }

  // residual of T y~ = rhs over all materialized rows
  double res = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    Vec row = mat_vec(chain.band_diag[b], yband[b]);
    if (b > 0) {
      const Vec t = mat_vec(chain.band_down[b - 1], yband[b - 1]);
      for (std::size_t i = 0; i < phase; ++i) row[i] += t[i];
    }
    const Vec& above = (b + 1 < nb) ? yband[b + 1] : ylev[0];
    for (std::size_t i = 0; i < phase; ++i)
      row[i] += chain.up_rate * above[i] - rhs.band[b * phase + i];
    res = std::max(res, max_abs(row));
  }
  for (std::size_t m = 0; m < k_levels; ++m) {
    Vec row = mat_vec(chain.local, ylev[m]);
    const Vec t = mat_vec(chain.up, ylev[m + 1]);
    for (std::size_t i = 0; i < phase; ++i) row[i] += t[i];
    if (m == 0) {
      if (nb > 0) {
        const Vec t2 = mat_vec(chain.from_level1, yband[nb - 1]);
        for (std::size_t i = 0; i < phase; ++i) row[i] += t2[i];
      }
    } else {
      const Vec t2 = mat_vec(chain.down, ylev[m - 1]);
      for (std::size_t i = 0; i < phase; ++i) row[i] += t2[i];
    }
    const Vec& r_m = (m < prefix) ? rhs.levels[m] : rhs.tail;
    for (std::size_t i = 0; i < phase; ++i) row[i] -= r_m[i];
    res = std::max(res, max_abs(row));
  }

  CensoredInverseResult out;
  out.levels_used = k_levels;
  out.residual = res;
  out.band.reserve(nb * phase);
  for (const Vec& v : yband)
    for (double x : v) out.band.push_back(-x);
  out.levels.resize(k_levels);
  for (std::size_t m = 0; m < k_levels; ++m) out.levels[m] = scaled(ylev[m], -1.0);
  return out;
}

SojournMean expected_sojourn_rg(const AbsorbingChainOne& chain, double tol) {
  const std::size_t phase = chain.phase_size();
  LevelRhs rhs;
  rhs.band = ones(chain.band_size());
  rhs.tail = ones(phase);

  const std::size_t want = geometric_horizon(chain.sp_r, tol * 1e-2, 8);
  CensoredInverseResult inv = censored_inverse_apply(chain, rhs, tol, want);

  double mean = dot(chain.omega_band, inv.band);
  Vec p = chain.pi1;
  double last_term = 0.0;
  for (std::size_t m = 0; m < inv.levels.size(); ++m) {
    last_term = dot(p, inv.levels[m]);
    mean += last_term;
    p = vec_mat(p, chain.r);
  }
  const double sp = std::clamp(chain.sp_r, 0.0, 1.0 - 1e-9);
  const double tail_est = std::abs(last_term) * sp / (1.0 - sp) * 2.0;

  SojournMean out;
  out.mean = mean;
  out.residual = std::max(inv.residual, tail_est);
  out.levels_used = inv.levels_used;
  return out;
}

namespace {

// truncated-chain matvec y = T x over the block layout, last level folded
struct ChainApply {
  const AbsorbingChainOne* c;
  std::size_t levels;
  Mat folded;  // local + up

  std::size_t dim() const { return c->band_size() + levels * c->phase_size(); }

  double diag_bound() const {
    double lam = 0.0;
    for (const Mat& d : c->band_diag)
      for (std::size_t i = 0; i < d.rows(); ++i) lam = std::max(lam, std::abs(d(i, i)));
    for (std::size_t i = 0; i < c->local.rows(); ++i)
      lam = std::max(lam, std::abs(c->local(i, i)));
    return lam;
  }

  void matvec(const Vec& x, Vec& y) const {
    const std::size_t phase = c->phase_size();
    const std::size_t nb = c->band_diag.size();
    y.assign(x.size(), 0.0);
    auto xblk = [&](std::size_t b) { return x.data() + b * phase; };
    auto yblk = [&](std::size_t b) { return y.data() + b * phase; };

    auto add_mat_vec = [phase](double* out, const Mat& m, const double* in) {
      for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = m.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < phase; ++j) s += row[j] * in[j];
        out[i] += s;
      }
    };
    auto add_scaled = [phase](double* out, double f, const double* in) {
      for (std::size_t i = 0; i < phase; ++i) out[i] += f * in[i];
    };

    for (std::size_t b = 0; b < nb; ++b) {
      add_mat_vec(yblk(b), c->band_diag[b], xblk(b));
      if (b > 0) add_mat_vec(yblk(b), c->band_down[b - 1], xblk(b - 1));
      add_scaled(yblk(b), c->up_rate, xblk(b + 1));  // band top couples to level 1
    }
    for (std::size_t m = 0; m < levels; ++m) {
      const std::size_t blk = nb + m;
      add_mat_vec(yblk(blk), m + 1 == levels ? folded : c->local, xblk(blk));
      if (m + 1 < levels) add_mat_vec(yblk(blk), c->up, xblk(blk + 1));
      if (m == 0) {
        if (nb > 0) add_mat_vec(yblk(blk), c->from_level1, xblk(nb - 1));
      } else {
        add_mat_vec(yblk(blk), c->down, xblk(blk - 1));
      }
    }
  }
};

}  // namespace

Vec sojourn_cdf(const AbsorbingChainOne& chain, const Vec& times, double tol) {
  for (double t : times)
    if (!(t >= 0.0)) throw SolverError("sojourn cdf: times must be >= 0");
  if (times.empty()) return {};

  const std::size_t phase = chain.phase_size();
  const std::size_t levels = geometric_horizon(chain.sp_r, tol * 1e-2, 8);

  ChainApply op{&chain, levels, chain.local + chain.up};

  // start weights, with the geometric tail folded onto the last kept level
  Vec omega = chain.omega_band;
  omega.reserve(op.dim());
  Vec p = chain.pi1;
  for (std::size_t m = 0; m + 1 < levels; ++m) {
    omega.insert(omega.end(), p.begin(), p.end());
    p = vec_mat(p, chain.r);
  }
  Mat eye_r = Mat::identity(phase);
  eye_r -= chain.r;
  const Vec tail = LuFactor(transpose(eye_r)).solve(p);
  omega.insert(omega.end(), tail.begin(), tail.end());

  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

  const double lam = op.diag_bound();
  Vec x = ones(op.dim());
  Vec out(times.size(), 0.0);
  double reached = 0.0;
  Vec tmp;
  for (std::size_t idx : order) {
    const double dt_total = times[idx] - reached;
    if (dt_total > 0.0 && lam > 0.0) {
      const std::size_t steps =
          static_cast<std::size_t>(std::max(1.0, std::ceil(lam * dt_total / 40.0)));
      const double s = lam * (dt_total / static_cast<double>(steps));
      const double step_tol = tol / static_cast<double>(steps);
      const std::size_t k_max =
          static_cast<std::size_t>(s + 20.0 * std::sqrt(s) + 60.0);
      for (std::size_t st = 0; st < steps; ++st) {
        const double scale = std::max(1.0, max_abs(x));
        Vec term = x;
        double coef = std::exp(-s);
        double cum = coef;
        Vec acc = scaled(term, coef);
        for (std::size_t k = 1; k <= k_max; ++k) {
          op.matvec(term, tmp);
          for (std::size_t i = 0; i < term.size(); ++i)
            term[i] += tmp[i] / lam;  // term <- (I + T/lam) term
          coef *= s / static_cast<double>(k);
          for (std::size_t i = 0; i < term.size(); ++i) acc[i] += coef * term[i];
          cum += coef;
          if (1.0 - cum <= step_tol / scale) break;
        }
        x = std::move(acc);
      }
      reached = times[idx];
    }
    out[idx] = 1.0 - chain.omega_delta - dot(omega, x);
  }
  return out;
}

TruncatedChain materialize_chain(const AbsorbingChainOne& chain, std::size_t levels) {
  if (levels < 1) throw DimensionError("chain truncation needs at least one level");
  const std::size_t phase = chain.phase_size();
  const std::size_t nb = chain.band_diag.size();
  const std::size_t dim = nb * phase + levels * phase;

  TruncatedChain out;
  out.t = Mat(dim, dim);
  out.absorb.assign(dim, 0.0);

  for (std::size_t b = 0; b < nb; ++b) {
    set_block(out.t, b * phase, b * phase, chain.band_diag[b]);
    if (b > 0) set_block(out.t, b * phase, (b - 1) * phase, chain.band_down[b - 1]);
    for (std::size_t i = 0; i < phase; ++i)
      out.t(b * phase + i, (b + 1) * phase + i) = chain.up_rate;
  }
  const Mat folded = chain.local + chain.up;
  for (std::size_t m = 0; m < levels; ++m) {
    const std::size_t r0 = (nb + m) * phase;
    set_block(out.t, r0, r0, m + 1 == levels ? folded : chain.local);
    if (m + 1 < levels) set_block(out.t, r0, r0 + phase, chain.up);
    if (m == 0) {
      if (nb > 0) set_block(out.t, r0, (nb - 1) * phase, chain.from_level1);
    } else {
      set_block(out.t, r0, r0 - phase, chain.down);
    }
  }
  for (std::size_t i = 0; i < phase; ++i) out.absorb[i] = chain.absorb[i];

  out.omega = chain.omega_band;
  Vec p = chain.pi1;
  for (std::size_t m = 0; m + 1 < levels; ++m) {
    out.omega.insert(out.omega.end(), p.begin(), p.end());
    p = vec_mat(p, chain.r);
  }
  Mat eye_r = Mat::identity(phase);
  eye_r -= chain.r;
  const Vec tail = LuFactor(transpose(eye_r)).solve(p);
  out.omega.insert(out.omega.end(), tail.begin(), tail.end());
  return out;
}

}  // namespace pqbd
