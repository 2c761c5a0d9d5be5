// Acceptance gate: ten checks, one status line each, details in
// acceptance_run.log next to the binary's working directory. The exit code is
// the number of failed criteria, so the test harness reports any red line.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "platform_qbd/errors.hpp"
#include "platform_qbd/measures.hpp"
#include "platform_qbd/model_one.hpp"
#include "platform_qbd/params.hpp"
#include "platform_qbd/qbd_solver.hpp"
#include "platform_qbd/sim.hpp"
#include "platform_qbd/sojourn.hpp"
#include "platform_qbd/truncated.hpp"

using namespace pqbd;
namespace fs = std::filesystem;

namespace {

std::ostringstream g_log;

double now_seconds() {
  static const auto start = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double lambda_for_rho(double rho, double mu, double gamma, int n) {
  return rho * n * mu * gamma / (mu + gamma);
}

// ---- shared reference grids (the figure sweeps used throughout) ----

std::vector<ModelParams> grid_lambda() {  // N = 60, mu = 1, gamma = 100
  std::vector<ModelParams> g;
  for (int i = 0; i <= 9; ++i) g.push_back({10.0 + 4.0 * i, 1.0, 100.0, 60, 50.0, 0.8});
  return g;
}

std::vector<ModelParams> grid_gamma() {  // lambda = 10, mu = 1, N = 60
  std::vector<ModelParams> g;
  for (int i = 0; i <= 10; ++i) g.push_back({10.0, 1.0, 100.0 + 20.0 * i, 60, 50.0, 0.8});
  return g;
}

std::vector<ModelParams> grid_owners() {  // lambda = 10, mu = 0.26, gamma = 100
  std::vector<ModelParams> g;
  for (int n = 43; n <= 53; ++n) g.push_back({10.0, 0.26, 100.0, n, 50.0, 0.8});
  return g;
}

struct Solved {
  StationarySolution sol;
  PerformanceReport rep;
};

const Solved& solve_cached(const ModelParams& p) {
  static std::map<std::string, Solved> cache;
  char key[128];
  std::snprintf(key, sizeof key, "%.17g|%.17g|%.17g|%d|%.17g|%.17g", p.lambda, p.mu,
                p.gamma, p.n_owners, p.price, p.share);
  auto it = cache.find(key);
  if (it == cache.end()) {
    Solved s;
    s.sol = solve_model(Model::one, p);
    s.rep = analytic_report(Model::one, p, s.sol);
    it = cache.emplace(key, std::move(s)).first;
  }
  return it->second;
}

bool run_cli_pair_identical(const std::string& config_json, const std::string& command,
                            const std::string& stem, std::vector<std::string> suffixes) {
  const fs::path dir = fs::temp_directory_path() / "pqbd_acceptance";
  fs::create_directories(dir);
  const fs::path cfg = dir / (stem + ".json");
  {
    std::ofstream out(cfg, std::ios::binary);
    out << config_json;
  }
  auto run = [&](const std::string& prefix) {
    std::string cmd = std::string("\"") + PLATFORM_QBD_CLI_PATH + "\" " + command +
                      " --config " + cfg.string() + " --out " + (dir / prefix).string() +
                      " > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  if (run(stem + "_a") != 0 || run(stem + "_b") != 0) {
    g_log << "  determinism: CLI run failed for " << stem << "\n";
    return false;
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const std::string& suffix : suffixes) {
    const std::string a = slurp(dir / (stem + "_a" + suffix));
    const std::string b = slurp(dir / (stem + "_b" + suffix));
    if (a.empty() || a != b) {
      g_log << "  determinism: " << stem << suffix << " differs between runs\n";
      return false;
    }
    g_log << "  " << stem << suffix << ": " << a.size() << " bytes, identical twice\n";
  }
  return true;
}

// Strict trend along a grid. `noise` forgives steps that are flat at the
// floating-point level (some curves start machine-flat before congestion
// kicks in); the endpoints must still differ materially in the right
// direction.
template <class Get>
bool strictly(const std::vector<ModelParams>& grid, Get get, bool increasing,
              const char* what, double noise = 0.0) {
  bool ok = true;
  const double first = get(solve_cached(grid.front()));
  double prev = first;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = get(solve_cached(grid[i]));
    const bool step_ok = increasing ? cur > prev - noise : cur < prev + noise;
    if (!step_ok) {
      g_log << "  trend violated: " << what << " at grid index " << i << " (" << prev
            << " -> " << cur << ")\n";
      ok = false;
    }
    prev = cur;
  }
  const double swing = increasing ? prev - first : first - prev;
  if (!(swing > 100.0 * noise)) {
    g_log << "  trend violated: " << what << " moves only " << swing
          << " end to end\n";
    ok = false;
  }
  g_log << "  trend " << (ok ? "holds" : "FAILS") << ": " << what;
  if (noise > 0.0) g_log << " (steps inside the " << noise << " noise floor count as flat)";
  g_log << "\n";
  return ok;
}

// ---- criteria ----

bool criterion_stability(std::string& note) {
  bool ok = true;
  double max_sp = 0.0;
  for (const auto& grid : {grid_lambda(), grid_gamma(), grid_owners()}) {
    for (const ModelParams& p : grid) {
      const StabilityReport rep = stability_report(p);
      const Solved& s = solve_cached(p);
      if (!(rep.stable && rep.rho < 1.0 && s.sol.sp_r < 1.0)) ok = false;
      max_sp = std::max(max_sp, s.sol.sp_r);
      if (std::abs(s.sol.sp_r - rep.rho) > 0.02 * rep.rho + 1e-6) {
        // sp(R) tracks the load closely on these grids; a large gap means one
        // of the two computations went wrong.
        g_log << "  sp(R) " << s.sol.sp_r << " far from rho " << rep.rho << "\n";
        ok = false;
      }
    }
  }
  g_log << "  all 32 grid points stable by formula, sp(R) < 1 (max " << max_sp << ")\n";

  // minimal pool size at lambda = 10, mu = 0.26, gamma = 100
  ModelParams edge{10.0, 0.26, 100.0, 39, 1.0, 0.5};
  const StabilityReport r39 = stability_report(edge);
  edge.n_owners = 38;
  const StabilityReport r38 = stability_report(edge);
  if (!(r39.stable && !r38.stable && r39.n_min_exact == 39 &&
        r39.n_min_corollary >= r39.n_min_exact)) {
    ok = false;
    g_log << "  minimal pool size mismatch: stable(39)=" << r39.stable
          << " stable(38)=" << r38.stable << " n_min=" << r39.n_min_exact << "\n";
  } else {
    g_log << "  minimal pool size: N=39 first stable, corollary bound "
          << r39.n_min_corollary << " >= exact\n";
  }
  bool threw = false;
  try {
    solve_model(Model::one, edge);
  } catch (const UnstableModelError&) {
    threw = true;
  }
  if (!threw) {
    ok = false;
    g_log << "  solve accepted an unstable instance\n";
  }

  // past the boundary the iteration saturates at the unit circle
  ModelParams hot{lambda_for_rho(1.01, 1.0, 2.0, 2), 1.0, 2.0, 2, 1.0, 0.5};
  QbdBlocksOne blocks = build_blocks_one(hot);
  SolverOptions opts;
  opts.max_iter = 2000000;
  bool saturated = false;
  try {
    saturated = solve_rate_matrix(blocks.down, blocks.local, blocks.up, opts)
                    .spectral_radius > 0.999;
  } catch (const NonConvergenceError&) {
    saturated = true;
  }
  if (!saturated) ok = false;
  g_log << "  rho = 1.01 iteration saturates at the unit circle: " << saturated << "\n";

  note = "32 grid points, minimal-N edge, unstable saturation";
  return ok;
}

bool criterion_alpha(std::string& note) {
  std::mt19937_64 rng(20240819);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] { return std::exp(std::log(0.01) + u(rng) * std::log(100.0 / 0.01)); };
  double worst = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    const double mu = draw(), gamma = draw();
    for (int n = 1; n <= 12; ++n) {
      ModelParams p{1.0, mu, gamma, n, 1.0, 0.5};
      const Vec alpha = drift_alpha(p);
      QbdBlocksOne b = build_blocks_one(p);
      Mat d = b.down + b.local + b.up;
      worst = std::max(worst, max_abs(vec_mat(alpha, d)));
    }
  }
  g_log << "  50 (mu, gamma) pairs x N = 1..12: max |alpha D| = " << worst << "\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "max |alpha D| = %.3e over 600 draws", worst);
  note = buf;
  return worst < 1e-10;
}

bool criterion_residual(std::string& note) {
  double worst = 0.0;
  long worst_iters = 0;
  for (const auto& grid : {grid_lambda(), grid_gamma(), grid_owners()}) {
    for (const ModelParams& p : grid) {
      const Solved& s = solve_cached(p);
      worst = std::max(worst, s.sol.residual_r);
      worst_iters = std::max(worst_iters, s.sol.iterations);
    }
  }
  g_log << "  32 reference-grid solves at epsilon = 1e-12: max residual " << worst
        << ", max iterations " << worst_iters << "\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "max quadratic residual %.3e over 32 solves", worst);
  note = buf;
  return worst < 1e-10;
}

bool criterion_oracle(std::string& note) {
  const double t0 = now_seconds();
  struct Family {
    double rho, mu, gamma;
  };
  const Family fams[5] = {
      {0.30, 1.0, 2.0}, {0.55, 1.0, 2.0}, {0.85, 1.0, 2.0}, {0.60, 0.26, 100.0},
      {0.70, 2.5, 0.7}};
  double worst = 0.0;
  int cases = 0;
  bool ok = true;
  for (const Family& f : fams) {
    for (Model model : {Model::one, Model::two}) {
      for (int n = 1; n <= 3; ++n) {
        ModelParams p{lambda_for_rho(f.rho, f.mu, f.gamma, n), f.mu, f.gamma, n, 1.0, 0.5};
        StationarySolution s = solve_model(model, p);
        TruncatedStationary o = truncated_stationary_auto(model, p, 16, 1e-12);
        double diff = 0.0;
        for (std::size_t i = 0; i < o.level0_size; ++i)
          diff = std::max(diff, std::abs(s.pi0[i] - o.probs[i]));
        for (std::size_t k = 1; k + 1 < o.levels; ++k) {
          const Vec lv = level_vector(s, k);
          const std::size_t off = o.level0_size + (k - 1) * o.repeat_size;
          for (std::size_t i = 0; i < o.repeat_size; ++i)
            diff = std::max(diff, std::abs(lv[i] - o.probs[off + i]));
        }
        const PerformanceReport rep = analytic_report(model, p, s);
        diff = std::max(diff, std::abs(rep.mean_idle_owners - o.eq1));
        diff = std::max(diff, std::abs(rep.mean_waiting_seekers - o.eq2));
        worst = std::max(worst, diff);
        ++cases;
        if (diff >= 1e-8) {
          ok = false;
          g_log << "  oracle mismatch " << diff << " (model "
                << (model == Model::one ? "one" : "two") << ", rho target " << f.rho
                << ", N " << n << ")\n";
        }
      }
    }
  }
  const double dt = now_seconds() - t0;
  g_log << "  " << cases << " oracle comparisons (tail < 1e-12): max deviation " << worst
        << " in " << dt << " s\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "30 cases, max deviation %.3e, %.1f s", worst, dt);
  note = buf;
  return ok && dt < 60.0;
}

bool criterion_flow_balance(std::string& note) {
  bool ok = true;
  double worst = 0.0;
  for (const auto& grid : {grid_lambda(), grid_gamma(), grid_owners()}) {
    for (const ModelParams& p : grid) {
      const Solved& s = solve_cached(p);
      const double want = p.n_owners - p.lambda / p.mu;
      worst = std::max(worst, std::abs(s.rep.mean_idle_owners - want));
    }
  }
  const Solved& anchor = solve_cached(grid_lambda().front());
  g_log << "  anchor (lambda 10, mu 1, gamma 100, N 60): eq1 = "
        << anchor.rep.mean_idle_owners << " (expect 50 exactly)\n";
  if (std::abs(anchor.rep.mean_idle_owners - 50.0) >= 1e-6) ok = false;

  for (ModelParams p : {ModelParams{0.8, 0.7, 2.0, 3, 1.0, 0.5},
                        ModelParams{1.5, 1.0, 3.0, 4, 1.0, 0.5}}) {
    StationarySolution s = solve_model(Model::two, p);
    auto [eq1, eq2] = measures_two(s, p);
    (void)eq2;
    const double want = p.n_owners - p.lambda / p.mu - p.lambda / p.gamma;
    worst = std::max(worst, std::abs(eq1 - want));
  }
  g_log << "  worst |eq1 - flow balance| over 34 instances: " << worst << "\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst defect %.3e; eq1(anchor) = %.8f", worst,
                anchor.rep.mean_idle_owners);
  note = buf;
  return ok && worst < 1e-6;
}

bool criterion_pollaczek(std::string& note) {
  ModelParams p{0.3, 1.0, 2.0, 1, 1.0, 0.5};
  StationarySolution s = solve_model(Model::two, p);
  PerformanceReport r = analytic_report(Model::two, p, s);
  const double eq2_want = 0.2863636363636364;  // lambda^2 E[S^2] / (2 (1 - lambda E[S]))
  const double ew_want = 2.4545454545454546;   // queueing delay plus both stages
  g_log << "  single-owner two-stage queue: eq2 = " << r.mean_waiting_seekers
        << " (closed form " << eq2_want << "), E[W] = " << r.sojourn_little
        << " (closed form " << ew_want << ")\n";
  char buf[112];
  std::snprintf(buf, sizeof buf, "eq2 off by %.2e, E[W] off by %.2e",
                std::abs(r.mean_waiting_seekers - eq2_want),
                std::abs(r.sojourn_little - ew_want));
  note = buf;
  return std::abs(r.mean_waiting_seekers - eq2_want) < 1e-6 &&
         std::abs(r.sojourn_little - ew_want) < 1e-6;
}

bool criterion_simulation(std::string& note) {
  const double t0 = now_seconds();
  SimConfig cfg;  // 20 replications x 5e5 events, base seed 1
  struct Point {
    Model model;
    ModelParams p;
  };
  const Point points[6] = {
      {Model::one, {1.2, 1.0, 2.0, 3, 1.0, 0.5}},
      {Model::one, {0.65, 1.0, 2.0, 2, 1.0, 0.5}},
      {Model::one, {3.0, 1.0, 2.0, 5, 1.0, 0.5}},
      {Model::two, {0.3, 1.0, 2.0, 1, 1.0, 0.5}},
      {Model::two, {0.8, 0.7, 2.0, 3, 1.0, 0.5}},
      {Model::two, {1.5, 1.0, 3.0, 4, 1.0, 0.5}},
  };
  bool ok = true;
  for (const Point& pt : points) {
    StationarySolution s = solve_model(pt.model, pt.p);
    PerformanceReport r = analytic_report(pt.model, pt.p, s);
    SimResult res = simulate(pt.model, pt.p, cfg);
    struct Row {
      const char* name;
      double analytic;
      const SimEstimate* est;
    };
    const Row rows[4] = {{"eq1", r.mean_idle_owners, &res.idle_owners},
                         {"eq2", r.mean_waiting_seekers, &res.waiting_seekers},
                         {"throughput", pt.p.lambda, &res.throughput},
                         {"sojourn", r.sojourn_little, &res.sojourn_mean}};
    for (const Row& row : rows) {
      const double gap = std::abs(row.est->mean - row.analytic);
      const bool within = gap < row.est->ci_halfwidth;
      if (!within) ok = false;
      g_log << "  " << (pt.model == Model::one ? "one" : "two") << " lambda "
            << pt.p.lambda << " " << row.name << ": analytic " << row.analytic
            << ", sim " << row.est->mean << " +- " << row.est->ci_halfwidth
            << (within ? "" : "  <-- OUTSIDE CI") << "\n";
    }
  }
  const double dt = now_seconds() - t0;
  g_log << "  six points, 20 x 5e5 events each, " << dt << " s total\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "24 interval checks, %.0f s", dt);
  note = buf;
  return ok && dt < 300.0;
}

bool criterion_trends(std::string& note) {
  bool ok = true;
  auto eq1 = [](const Solved& s) { return s.rep.mean_idle_owners; };
  auto eq2 = [](const Solved& s) { return s.rep.mean_waiting_seekers; };
  auto ew = [](const Solved& s) { return s.rep.sojourn_little; };
  auto f1 = [](const Solved& s) { return s.rep.platform_profit; };
  auto f2 = [](const Solved& s) { return s.rep.owner_profit_each; };

  const auto gl = grid_lambda();
  ok &= strictly(gl, eq2, true, "eq2 rises with lambda");
  ok &= strictly(gl, eq1, false, "eq1 falls with lambda");
  // at small loads E[W] sits machine-flat at 1/gamma + 1/mu before rising
  ok &= strictly(gl, ew, true, "E[W] rises with lambda", 1e-11);
  ok &= strictly(gl, f1, true, "platform profit rises with lambda");
  ok &= strictly(gl, f2, true, "owner profit rises with lambda");

  const auto gg = grid_gamma();
  ok &= strictly(gg, eq2, false, "eq2 falls with gamma");
  ok &= strictly(gg, ew, false, "E[W] falls with gamma");
  // eq1 over the gamma sweep is pinned at N - lambda/mu by flow balance; the
  // companion write-up sketches it as decreasing. Record the flat line rather
  // than asserting a trend either way.
  double lo = 1e300, hi = -1e300;
  for (const ModelParams& p : gg) {
    const double v = solve_cached(p).rep.mean_idle_owners;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  g_log << "  DIVERGENCE NOTE: over gamma in [100, 300], eq1 stays in [" << lo << ", "
        << hi << "] (constant 50 by flow balance); the sketched decrease in gamma "
           "cannot occur while lambda and mu are held fixed, so no trend is asserted\n";

  const auto gn = grid_owners();
  ok &= strictly(gn, eq1, true, "eq1 rises with N");
  ok &= strictly(gn, eq2, false, "eq2 falls with N");
  ok &= strictly(gn, ew, false, "E[W] falls with N");

  // price sweep at the lambda-grid anchor
  std::vector<ModelParams> gp;
  for (int i = 0; i <= 10; ++i) gp.push_back({10.0, 1.0, 100.0, 60, 30.0 + 2.0 * i, 0.8});
  ok &= strictly(gp, f1, true, "platform profit rises with price");
  ok &= strictly(gp, f2, true, "owner profit rises with price");

  note = ok ? "12 trends hold; flat eq1(gamma) recorded as divergence note"
            : "see log for the violated trend";
  return ok;
}

bool criterion_sojourn_machinery(std::string& note) {
  bool ok = true;

  // (a) proper distribution start and monotone growth
  ModelParams p{0.8, 1.0, 2.0, 2, 1.0, 0.5};
  StationarySolution s = solve_model(Model::one, p);
  AbsorbingChainOne chain = build_absorbing_chain(p, s);
  SojournMean m = expected_sojourn_rg(chain, 1e-10);
  Vec times;
  for (double f : {0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) times.push_back(f * m.mean);
  Vec fvals = sojourn_cdf(chain, times, 1e-10);
  if (!(std::abs(fvals[0]) <= 1e-12)) {
    ok = false;
    g_log << "  F(0) = " << fvals[0] << " (should be 0)\n";
  }
  for (std::size_t i = 1; i < fvals.size(); ++i)
    if (fvals[i] < fvals[i - 1] - 1e-12) {
      ok = false;
      g_log << "  F not monotone at grid index " << i << "\n";
    }
  g_log << "  F(0) = " << fvals[0] << ", monotone over 8 grid points\n";

  // (b) censored inverse against a 400-level direct solve
  const std::size_t kLevels = 400;
  TruncatedChain tc = materialize_chain(chain, kLevels);
  Mat neg = tc.t;
  neg *= -1.0;
  Vec dense = LuFactor(neg).solve(ones(tc.t.rows()));
  LevelRhs rhs;
  rhs.band = ones(chain.band_size());
  rhs.tail = ones(chain.phase_size());
  CensoredInverseResult ci = censored_inverse_apply(chain, rhs, 1e-12);
  double sup = 0.0;
  for (std::size_t i = 0; i < ci.band.size(); ++i)
    sup = std::max(sup, std::abs(ci.band[i] - dense[i]));
  for (std::size_t mlev = 0; mlev + 4 < ci.levels_used; ++mlev) {
    const std::size_t off = chain.band_size() + mlev * chain.phase_size();
    for (std::size_t i = 0; i < chain.phase_size(); ++i)
      sup = std::max(sup, std::abs(ci.levels[mlev][i] - dense[off + i]));
  }
  g_log << "  censored (-T)^{-1} 1 vs 400-level direct solve: sup diff " << sup
        << ", internal residual " << ci.residual << " over " << ci.levels_used
        << " levels\n";
  if (!(sup < 1e-6 && ci.residual < 1e-6)) ok = false;

  // (c) the tail bound the formula sheet asks for cannot be met: the
  // distribution is defective with limit 1 - omega_delta, and driving
  // omega_delta below 1e-6 forces a heavy-traffic regime whose exponential
  // tail at 10x the mean is still about exp(-10) = 4.5e-5. Measure and say so.
  double measured = 0.0, limit = 0.0;
  {
    ModelParams probe{0.45, 1.0, 1.0, 1, 1.0, 0.5};  // rho = 0.9
    StationarySolution ps = solve_model(Model::one, probe);
    AbsorbingChainOne pc = build_absorbing_chain(probe, ps);
    SojournMean pm = expected_sojourn_rg(pc, 1e-10);
    measured = sojourn_cdf(pc, {10.0 * pm.mean}, 1e-10)[0];
    limit = 1.0 - pc.omega_delta;
    g_log << "  rho 0.90: F(10*mean) = " << measured << ", limit 1 - omega_delta = "
          << limit << ", shortfall vs 1-1e-6 bar: " << 1.0 - 1e-6 - measured << "\n";
  }
  {
    ModelParams probe{0.495, 1.0, 1.0, 1, 1.0, 0.5};  // rho = 0.99
    StationarySolution ps = solve_model(Model::one, probe);
    AbsorbingChainOne pc = build_absorbing_chain(probe, ps);
    SojournMean pm = expected_sojourn_rg(pc, 1e-10);
    const double f10 = sojourn_cdf(pc, {10.0 * pm.mean}, 1e-10)[0];
    g_log << "  rho 0.99: F(10*mean) = " << f10 << ", limit " << 1.0 - pc.omega_delta
          << "; the gap splits into the atom " << pc.omega_delta
          << " plus a genuine exponential tail\n";
  }
  const bool tail_bound_met = measured > 1.0 - 1e-6;
  if (!tail_bound_met) {
    g_log << "  tail bound F(10*mean) > 1 - 1e-6: NOT MET and not attainable for any "
             "parameters (defective limit); left red on purpose\n";
  }

  // (d) three estimates of the mean wait, recorded for comparison
  {
    ModelParams q{1.2, 1.0, 2.0, 3, 1.0, 0.5};
    StationarySolution qs = solve_model(Model::one, q);
    PerformanceReport qr = analytic_report(Model::one, q, qs);
    AbsorbingChainOne qc = build_absorbing_chain(q, qs);
    const double rg = expected_sojourn_rg(qc, 1e-10).mean;
    SimConfig scfg;
    scfg.max_events = 200000;
    scfg.replications = 10;
    SimResult sim = simulate(Model::one, q, scfg);
    g_log << "  mean-wait estimates at (1.2, 1, 2, N=3): first-passage " << rg
          << ", Little " << qr.sojourn_little << ", simulated sojourn "
          << sim.sojourn_mean.mean << " +- " << sim.sojourn_mean.ci_halfwidth
          << "; the first-passage construction answers a different question (time "
             "to an empty waiting room), recorded, not asserted equal\n";
  }

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "F(0)=0, monotone, censored solve ok; F(10*mean)=%.5f < %.5f cap "
                "(defective limit), bar 1-1e-6 unattainable",
                measured, limit);
  note = buf;
  return ok && tail_bound_met;
}

bool criterion_determinism(std::string& note) {
  bool ok = true;
  ok &= run_cli_pair_identical(
      R"({"model":"one","params":{"lambda":10.0,"mu":1.0,"gamma":100.0,"n_owners":60,"price":50.0,"share":0.8},"sweep":{"parameter":"lambda","from":10.0,"to":46.0,"steps":10}})",
      "sweep", "det_sweep", {".csv"});
  ok &= run_cli_pair_identical(
      R"({"model":"two","params":{"lambda":0.8,"mu":0.7,"gamma":2.0,"n_owners":3}})",
      "solve", "det_solve", {".csv", "_detail.json"});
  ok &= run_cli_pair_identical(
      R"({"model":"one","params":{"lambda":1.2,"mu":1.0,"gamma":2.0,"n_owners":3},"sim":{"max_events":20000,"replications":3,"base_seed":7}})",
      "simulate", "det_sim", {".csv"});
  note = ok ? "sweep, solve, simulate outputs byte-identical across reruns"
            : "a rerun produced different bytes; see log";
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<bool(std::string&)> fn;
  };
  const Criterion criteria[10] = {
      {"stability classification and spectral radius", criterion_stability},
      {"phase distribution solves the drift null space", criterion_alpha},
      {"rate-matrix residual below 1e-10 on the reference grids", criterion_residual},
      {"state-by-state agreement with the brute-force oracle", criterion_oracle},
      {"idle-owner flow balance", criterion_flow_balance},
      {"single-owner two-stage closed forms", criterion_pollaczek},
      {"simulation agrees within 99% confidence intervals", criterion_simulation},
      {"figure trends on the reference grids", criterion_trends},
      {"waiting-time distribution machinery", criterion_sojourn_machinery},
      {"byte-identical outputs on repeated runs", criterion_determinism},
  };

  int failures = 0;
  for (int i = 0; i < 10; ++i) {
    g_log << "== criterion " << i + 1 << ": " << criteria[i].label << " ==\n";
    std::string notetext;
    bool pass = false;
    try {
      pass = criteria[i].fn(notetext);
    } catch (const std::exception& e) {
      notetext = std::string("exception: ") + e.what();
      g_log << "  exception: " << e.what() << "\n";
    }
    if (!pass) ++failures;
    std::printf("[%s] %2d. %s (%s)\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].label,
                notetext.c_str());
    std::fflush(stdout);
  }

  std::ofstream log("acceptance_run.log", std::ios::binary);
  log << g_log.str();
  std::printf("\n%d of 10 criteria passed; details in acceptance_run.log\n",
              10 - failures);
  if (failures == 1) {
    std::printf("the red line is the defective-distribution tail bound; it is "
                "unattainable for any parameter choice and documented in the log\n");
  }
  return failures;
}
