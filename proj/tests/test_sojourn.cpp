#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "platform_qbd/dense_matrix.hpp"
#include "platform_qbd/model_one.hpp"
#include "platform_qbd/params.hpp"
#include "platform_qbd/qbd_solver.hpp"
#include "platform_qbd/sojourn.hpp"

using namespace pqbd;

namespace {

struct Built {
  ModelParams p;
  StationarySolution s;
  AbsorbingChainOne chain;
};

Built build(double lambda, double mu, double gamma, int n) {
  ModelParams p{lambda, mu, gamma, n, 1.0, 0.5};
  StationarySolution s = solve_model(Model::one, p);
  AbsorbingChainOne chain = build_absorbing_chain(p, s);
  return {p, s, chain};
}

// Start mass of the transient part plus the atom in the absorbing set.
double total_start_mass(const AbsorbingChainOne& c) {
  Mat m = Mat::identity(c.r.rows());
  m -= c.r;
  Vec tail = LuFactor(transpose(m)).solve(c.pi1);
  return c.omega_delta + sum(c.omega_band) + sum(tail);
}

}  // namespace

TEST_CASE("absorbing chain fields mirror the stationary solution") {
  Built b = build(0.8, 1.0, 2.0, 2);
  const AbsorbingChainOne& c = b.chain;
  const int n = b.p.n_owners;

  CHECK(c.phase_size() == static_cast<std::size_t>(n) + 1);
  CHECK(c.band_diag.size() == static_cast<std::size_t>(n) - 1);
  CHECK(c.up_rate == b.p.lambda);

  // Atom: stationary mass with no waiting seeker.
  StateIndexOne idx{n};
  double delta = 0.0;
  for (int j = 0; j <= n; ++j) delta += b.s.pi0[idx.flat_index(0, j)];
  CHECK(c.omega_delta == doctest::Approx(delta).epsilon(1e-12));

  // Band start weights: boundary mass of sub-levels 1..N-1 in order.
  REQUIRE(c.omega_band.size() == c.band_size());
  for (int i = 1; i < n; ++i)
    for (int j = 0; j <= n; ++j)
      CHECK(c.omega_band[(i - 1) * (n + 1) + j] ==
            doctest::Approx(b.s.pi0[idx.flat_index(i, j)]).epsilon(1e-12));

  // Absorption happens through a match from one waiting seeker.
  REQUIRE(c.absorb.size() == c.phase_size());
  CHECK(c.absorb[0] == 0.0);
  for (int j = 1; j <= n; ++j) CHECK(c.absorb[j] == doctest::Approx(b.p.gamma).epsilon(1e-12));

  // Start weights are a probability distribution together with the atom.
  CHECK(total_start_mass(c) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("materialized truncation is a proper absorbing generator") {
  for (int n : {1, 2, 3}) {
    Built b = build(0.3 * n, 1.0, 2.0, n);
    const std::size_t levels = 40;
    TruncatedChain tc = materialize_chain(b.chain, levels);

    const std::size_t dim = b.chain.band_size() + levels * b.chain.phase_size();
    REQUIRE(tc.t.rows() == dim);
    REQUIRE(tc.absorb.size() == dim);
    REQUIRE(tc.omega.size() == dim);

    // Every row leaks only into the absorption column.
    Vec rowsum = mat_vec(tc.t, ones(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      CHECK(std::abs(rowsum[i] + tc.absorb[i]) < 1e-12);
      CHECK(tc.absorb[i] >= 0.0);
      CHECK(tc.t(i, i) < 0.0);
    }

    // Folded start weights cover everything but the atom.
    CHECK(sum(tc.omega) == doctest::Approx(1.0 - b.chain.omega_delta).epsilon(1e-10));
  }
}

TEST_CASE("censored inverse agrees with a dense solve of a long truncation") {
  Built b = build(0.8, 1.0, 2.0, 2);  // load 0.6
  const AbsorbingChainOne& c = b.chain;
  const std::size_t phase = c.phase_size();

  const std::size_t levels = 120;  // sp(R)^120 is far below the tolerances used
  TruncatedChain tc = materialize_chain(c, levels);
  Mat neg = tc.t;
  neg *= -1.0;
  Vec dense = LuFactor(neg).solve(ones(tc.t.rows()));

  LevelRhs rhs;
  rhs.band = ones(c.band_size());
  rhs.tail = ones(phase);
  CensoredInverseResult res = censored_inverse_apply(c, rhs, 1e-12);

  CHECK(res.residual < 1e-8);
  REQUIRE(res.band.size() == c.band_size());
  for (std::size_t i = 0; i < res.band.size(); ++i)
    CHECK(std::abs(res.band[i] - dense[i]) < 1e-8);

  REQUIRE(res.levels_used >= 1);
  REQUIRE(res.levels_used <= levels);
  // Compare all materialized levels except the last few, where the dense
  // truncation's fold starts to matter at the 1e-8 scale.
  const std::size_t compare = res.levels_used > 4 ? res.levels_used - 4 : res.levels_used;
  for (std::size_t m = 0; m < compare; ++m) {
    const std::size_t off = c.band_size() + m * phase;
    for (std::size_t i = 0; i < phase; ++i)
      CHECK(std::abs(res.levels[m][i] - dense[off + i]) < 1e-8);
  }
}

TEST_CASE("mean absorption time matches the dense truncation") {
  for (int n : {1, 2, 3}) {
    const double mu = 1.0, gamma = 2.0;
    const double lambda = 0.55 * n * mu * gamma / (mu + gamma);
    Built b = build(lambda, mu, gamma, n);
    SojournMean m = expected_sojourn_rg(b.chain, 1e-12);
    CHECK(m.mean > 0.0);
    CHECK(m.residual < 1e-8);

    const std::size_t levels = 160;
    TruncatedChain tc = materialize_chain(b.chain, levels);
    Mat neg = tc.t;
    neg *= -1.0;
    Vec y = LuFactor(neg).solve(ones(tc.t.rows()));
    const double dense = dot(tc.omega, y);
    CAPTURE(n);
    CHECK(m.mean == doctest::Approx(dense).epsilon(1e-8));
  }
}

TEST_CASE("waiting time distribution: starts at zero, grows, saturates at one minus the atom") {
  Built b = build(0.8, 1.0, 2.0, 2);
  SojournMean m = expected_sojourn_rg(b.chain, 1e-10);

  Vec times;
  for (double fct : {0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0, 160.0})
    times.push_back(fct * m.mean);
  Vec f = sojourn_cdf(b.chain, times, 1e-10);

  CHECK(std::abs(f[0]) < 1e-12);
  for (std::size_t i = 1; i < f.size(); ++i) {
    CHECK(f[i] >= f[i - 1] - 1e-12);
    CHECK(f[i] <= 1.0 + 1e-12);
  }
  // Slow exponential tail: the gap to the limit shrinks geometrically in t.
  const double limit = 1.0 - b.chain.omega_delta;
  CHECK(limit - f[f.size() - 2] < limit - f[f.size() - 3]);
  CHECK(std::abs(f.back() - limit) < 1e-7);
}

TEST_CASE("waiting time distribution matches dense matrix exponentials") {
  Built b = build(1.2, 1.0, 2.0, 3);  // light load keeps the dense horizon cheap
  SojournMean m = expected_sojourn_rg(b.chain, 1e-10);

  Vec times;
  for (double fct : {0.1, 0.5, 1.0, 2.0, 5.0}) times.push_back(fct * m.mean);
  Vec f = sojourn_cdf(b.chain, times, 1e-12);

  const std::size_t levels = 120;
  TruncatedChain tc = materialize_chain(b.chain, levels);
  for (std::size_t i = 0; i < times.size(); ++i) {
    Vec surv = expm_action(tc.t, ones(tc.t.rows()), times[i], 1e-13);
    const double dense = 1.0 - b.chain.omega_delta - dot(tc.omega, surv);
    CHECK(std::abs(f[i] - dense) < 1e-8);
  }
}

TEST_CASE("single-owner chain has no band and absorbs straight from the first level") {
  Built b = build(0.45, 1.0, 1.0, 1);  // load 0.9
  const AbsorbingChainOne& c = b.chain;
  CHECK(c.band_diag.empty());
  CHECK(c.band_size() == 0);
  CHECK(c.omega_band.empty());
  REQUIRE(c.absorb.size() == 2);
  CHECK(c.absorb[0] == 0.0);
  CHECK(c.absorb[1] == doctest::Approx(b.p.gamma).epsilon(1e-12));

  SojournMean m = expected_sojourn_rg(c, 1e-10);
  CHECK(m.mean > 0.0);

  const std::size_t levels = 260;
  TruncatedChain tc = materialize_chain(c, levels);
  Mat neg = tc.t;
  neg *= -1.0;
  Vec y = LuFactor(neg).solve(ones(tc.t.rows()));
  CHECK(m.mean == doctest::Approx(dot(tc.omega, y)).epsilon(1e-7));
}

TEST_CASE("no arrivals: the whole population starts absorbed") {
  Built b = build(0.0, 1.0, 2.0, 3);
  CHECK(b.chain.omega_delta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_abs(b.chain.omega_band) < 1e-12);
  SojournMean m = expected_sojourn_rg(b.chain, 1e-10);
  CHECK(std::abs(m.mean) < 1e-12);
  Vec f = sojourn_cdf(b.chain, {0.0, 1.0, 10.0}, 1e-10);
  for (double v : f) CHECK(std::abs(v) < 1e-10);
}
