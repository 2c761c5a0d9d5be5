#include "platform_qbd/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "platform_qbd/errors.hpp"
#include "platform_qbd/measures.hpp"
#include "platform_qbd/sojourn.hpp"

namespace pqbd {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

constexpr const char* kMainHeader =
    "model,lambda,mu,gamma,n_owners,price,share,rho,stable,eq1,eq2,ew_little,ew_rg,"
    "f1,f2,f1_throughput_based,throughput,source,residual_R,tail_mass,seed";

constexpr const char* kSimHeader =
    "model,lambda,mu,gamma,n_owners,metric,analytic,sim_mean,ci_halfwidth,within_ci,seed";

constexpr const char* kSojournHeader =
    "model,lambda,mu,gamma,n_owners,kind,t,f_w,ew_rg,ew_little,ew_sim";

const char* model_name(Model m) { return m == Model::one ? "one" : "two"; }

std::string bool_name(bool b) { return b ? "true" : "false"; }

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw ConfigError("cannot create output directory " + p.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path);
  out << content;
  if (!out) throw ConfigError("failed writing output file " + path);
}

// One row of the shared measure schema; NaN renders as an empty field.
struct MainRow {
  Model model = Model::one;
  ModelParams p;
  double rho = kNan;
  bool stable = false;
  double eq1 = kNan, eq2 = kNan, ew_little = kNan, ew_rg = kNan;
  double f1 = kNan, f2 = kNan, f1_tp = kNan, throughput = kNan;
  std::string source;
  double residual_r = kNan;
  double tail_mass = kNan;
  std::string seed;
};

std::string render_main_row(const MainRow& r) {
  std::ostringstream s;
  s << model_name(r.model) << ',' << format_number(r.p.lambda) << ','
    << format_number(r.p.mu) << ',' << format_number(r.p.gamma) << ','
    << r.p.n_owners << ',' << format_number(r.p.price) << ','
    << format_number(r.p.share) << ',' << format_number(r.rho) << ','
    << bool_name(r.stable) << ',' << format_number(r.eq1) << ','
    << format_number(r.eq2) << ',' << format_number(r.ew_little) << ','
    << format_number(r.ew_rg) << ',' << format_number(r.f1) << ','
    << format_number(r.f2) << ',' << format_number(r.f1_tp) << ','
    << format_number(r.throughput) << ',' << r.source << ','
    << format_number(r.residual_r) << ',' << format_number(r.tail_mass) << ','
    << r.seed << '\n';
  return s.str();
}

struct SolvedPoint {
  StationarySolution sol;
  PerformanceReport rep;
  double ew_rg = kNan;
};

SolvedPoint solve_point(Model model, const ModelParams& p, const SolverOptions& opts,
                        double truncation_tol) {
  SolvedPoint out;
  out.sol = solve_model(model, p, opts);
  out.rep = analytic_report(model, p, out.sol);
  if (model == Model::one && p.lambda > 0.0) {
    const AbsorbingChainOne chain = build_absorbing_chain(p, out.sol);
    out.ew_rg = expected_sojourn_rg(chain, truncation_tol).mean;
  }
  return out;
}

MainRow analytic_row(Model model, const ModelParams& p, const SolvedPoint& pt) {
  MainRow r;
  r.model = model;
  r.p = p;
  r.rho = pt.rep.rho;
  r.stable = true;
  r.eq1 = pt.rep.mean_idle_owners;
  r.eq2 = pt.rep.mean_waiting_seekers;
  r.ew_little = pt.rep.sojourn_little;
  r.ew_rg = pt.ew_rg;
  r.f1 = pt.rep.platform_profit;
  r.f2 = pt.rep.owner_profit_each;
  r.f1_tp = pt.rep.platform_profit_throughput;
  r.throughput = pt.rep.throughput;
  r.source = "analytic";
  r.residual_r = pt.sol.residual_r;
  return r;
}

MainRow unstable_row(Model model, const ModelParams& p, double rho) {
  MainRow r;
  r.model = model;
  r.p = p;
  r.rho = rho;
  r.stable = false;
  return r;
}

// ---- config parsing ------------------------------------------------------

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ConfigError("unknown field \"" + it.key() + "\" in " + where);
  }
}

const json& need_field(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing field \"" + std::string(key) + "\" in " + where);
  return *it;
}

double as_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

long as_integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<long>();
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "lambda") return SweepParameter::lambda;
  if (name == "gamma") return SweepParameter::gamma;
  if (name == "mu") return SweepParameter::mu;
  if (name == "n_owners") return SweepParameter::n_owners;
  if (name == "price") return SweepParameter::price;
  if (name == "share") return SweepParameter::share;
  throw ConfigError("unknown sweep parameter \"" + name + "\"");
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  check_keys(j, "config",
             {"model", "params", "sweep", "solver", "sim", "sojourn", "outputs"});

  RunConfig cfg;

  const json& model = need_field(j, "config", "model");
  if (!model.is_string()) throw ConfigError("model must be \"one\" or \"two\"");
  const std::string model_str = model.get<std::string>();
  if (model_str == "one")
    cfg.model = Model::one;
  else if (model_str == "two")
    cfg.model = Model::two;
  else
    throw ConfigError("model must be \"one\" or \"two\", got \"" + model_str + "\"");

  const json& params = need_field(j, "config", "params");
  if (!params.is_object()) throw ConfigError("params must be an object");
  check_keys(params, "params", {"lambda", "mu", "gamma", "n_owners", "price", "share"});
  cfg.params.lambda = as_number(need_field(params, "params", "lambda"), "params.lambda");
  cfg.params.mu = as_number(need_field(params, "params", "mu"), "params.mu");
  cfg.params.gamma = as_number(need_field(params, "params", "gamma"), "params.gamma");
  cfg.params.n_owners = static_cast<int>(
      as_integer(need_field(params, "params", "n_owners"), "params.n_owners"));
  if (params.contains("price"))
    cfg.params.price = as_number(params["price"], "params.price");
  if (params.contains("share"))
    cfg.params.share = as_number(params["share"], "params.share");
  try {
    cfg.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid params: ") + e.what());
  }

  if (j.contains("sweep")) {
    const json& sweep = j["sweep"];
    if (!sweep.is_object()) throw ConfigError("sweep must be an object");
    check_keys(sweep, "sweep", {"parameter", "from", "to", "steps"});
    const json& pname = need_field(sweep, "sweep", "parameter");
    if (!pname.is_string()) throw ConfigError("sweep.parameter must be a string");
    SweepSpec spec;
    spec.parameter = parse_sweep_parameter(pname.get<std::string>());
    spec.from = as_number(need_field(sweep, "sweep", "from"), "sweep.from");
    spec.to = as_number(need_field(sweep, "sweep", "to"), "sweep.to");
    spec.steps = static_cast<int>(as_integer(need_field(sweep, "sweep", "steps"), "sweep.steps"));
    if (!std::isfinite(spec.from) || !std::isfinite(spec.to))
      throw ConfigError("sweep range must be finite");
    if (spec.steps < 1) throw ConfigError("sweep.steps must be at least 1");
    cfg.sweep = spec;
  }

  if (j.contains("solver")) {
    const json& solver = j["solver"];
    if (!solver.is_object()) throw ConfigError("solver must be an object");
    check_keys(solver, "solver",
               {"epsilon", "max_iter", "truncation_tol", "residual_target"});
    if (solver.contains("epsilon")) {
      cfg.solver.epsilon = as_number(solver["epsilon"], "solver.epsilon");
      if (!(cfg.solver.epsilon > 0.0)) throw ConfigError("solver.epsilon must be positive");
    }
    if (solver.contains("max_iter")) {
      cfg.solver.max_iter = as_integer(solver["max_iter"], "solver.max_iter");
      if (cfg.solver.max_iter < 1) throw ConfigError("solver.max_iter must be at least 1");
    }
    if (solver.contains("truncation_tol")) {
      cfg.truncation_tol = as_number(solver["truncation_tol"], "solver.truncation_tol");
      if (!(cfg.truncation_tol > 0.0))
        throw ConfigError("solver.truncation_tol must be positive");
    }
    if (solver.contains("residual_target")) {
      cfg.solver.residual_target =
          as_number(solver["residual_target"], "solver.residual_target");
      if (cfg.solver.residual_target < 0.0)
        throw ConfigError("solver.residual_target must be nonnegative");
    }
  }

  if (j.contains("sim")) {
    const json& sim = j["sim"];
    if (!sim.is_object()) throw ConfigError("sim must be an object");
    check_keys(sim, "sim", {"max_events", "warmup_fraction", "replications", "base_seed"});
    SimConfig sc;
    if (sim.contains("max_events")) {
      const long v = as_integer(sim["max_events"], "sim.max_events");
      if (v < 1) throw ConfigError("sim.max_events must be at least 1");
      sc.max_events = static_cast<std::size_t>(v);
    }
    if (sim.contains("warmup_fraction")) {
      sc.warmup_fraction = as_number(sim["warmup_fraction"], "sim.warmup_fraction");
      if (!(sc.warmup_fraction >= 0.0 && sc.warmup_fraction < 1.0))
        throw ConfigError("sim.warmup_fraction must lie in [0, 1)");
    }
    if (sim.contains("replications")) {
      const long v = as_integer(sim["replications"], "sim.replications");
      if (v < 1) throw ConfigError("sim.replications must be at least 1");
      sc.replications = static_cast<int>(v);
    }
    if (sim.contains("base_seed")) {
      const json& seed = sim["base_seed"];
      if (!seed.is_number_integer() || (seed.is_number_integer() && seed.get<long long>() < 0))
        throw ConfigError("sim.base_seed must be a nonnegative integer");
      sc.base_seed = seed.get<std::uint64_t>();
    }
    cfg.sim = sc;
  }

  if (j.contains("sojourn")) {
    const json& soj = j["sojourn"];
    if (!soj.is_object()) throw ConfigError("sojourn must be an object");
    check_keys(soj, "sojourn", {"t_grid"});
    if (soj.contains("t_grid")) {
      const json& grid = soj["t_grid"];
      if (!grid.is_array()) throw ConfigError("sojourn.t_grid must be an array");
      double prev = -1.0;
      for (const json& v : grid) {
        const double t = as_number(v, "sojourn.t_grid entry");
        if (!(t >= 0.0)) throw ConfigError("sojourn.t_grid entries must be nonnegative");
        if (t < prev) throw ConfigError("sojourn.t_grid must be nondecreasing");
        prev = t;
        cfg.sojourn_grid.push_back(t);
      }
    }
  }

  if (j.contains("outputs")) {
    const json& out = j["outputs"];
    if (!out.is_string()) throw ConfigError("outputs must be a string path prefix");
    cfg.outputs = out.get<std::string>();
    if (cfg.outputs.empty()) throw ConfigError("outputs must not be empty");
  }

  return cfg;
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(spec.steps));
  if (spec.steps == 1) {
    grid.push_back(spec.from);
    return grid;
  }
  for (int i = 0; i < spec.steps; ++i)
    grid.push_back(spec.from +
                   (spec.to - spec.from) * static_cast<double>(i) /
                       static_cast<double>(spec.steps - 1));
  return grid;
}

ModelParams apply_sweep_value(const ModelParams& base, SweepParameter which, double value) {
  ModelParams p = base;
  switch (which) {
    case SweepParameter::lambda: p.lambda = value; break;
    case SweepParameter::gamma: p.gamma = value; break;
    case SweepParameter::mu: p.mu = value; break;
    case SweepParameter::n_owners: p.n_owners = static_cast<int>(std::llround(value)); break;
    case SweepParameter::price: p.price = value; break;
    case SweepParameter::share: p.share = value; break;
  }
  return p;
}

namespace {

std::string output_prefix(const RunConfig& cfg, const RunOptions& opt) {
  return opt.out_prefix.empty() ? cfg.outputs : opt.out_prefix;
}

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

ordered_json json_matrix(const Mat& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_detail_json(const std::string& path, Model model, const ModelParams& p,
                       const SolvedPoint& pt) {
  ordered_json d;
  d["model"] = model_name(model);
  d["params"] = {{"lambda", p.lambda},   {"mu", p.mu},       {"gamma", p.gamma},
                 {"n_owners", p.n_owners}, {"price", p.price}, {"share", p.share}};
  d["rho"] = json_number(pt.rep.rho);
  d["stable"] = true;
  d["iterations"] = pt.sol.iterations;
  d["residual_R"] = json_number(pt.sol.residual_r);
  d["spectral_radius_R"] = json_number(pt.sol.sp_r);
  d["balance_residual"] = json_number(pt.sol.balance_residual);
  d["eq1"] = json_number(pt.rep.mean_idle_owners);
  d["eq2"] = json_number(pt.rep.mean_waiting_seekers);
  d["ew_little"] = json_number(pt.rep.sojourn_little);
  d["ew_rg"] = json_number(pt.ew_rg);
  d["f1"] = json_number(pt.rep.platform_profit);
  d["f2"] = json_number(pt.rep.owner_profit_each);
  d["f1_throughput_based"] = json_number(pt.rep.platform_profit_throughput);
  d["throughput"] = json_number(pt.rep.throughput);
  d["pi0"] = pt.sol.pi0;
  d["pi1"] = pt.sol.pi1;
  d["R"] = json_matrix(pt.sol.r);
  write_file(path, d.dump(2) + "\n");
}

}  // namespace

int cmd_stability(const RunConfig& cfg, const RunOptions&, std::ostream& log) {
  const StabilityReport rep = stability_report(cfg.params);
  log << "model: " << model_name(cfg.model) << '\n'
      << "lambda: " << format_number(cfg.params.lambda) << '\n'
      << "mu: " << format_number(cfg.params.mu) << '\n'
      << "gamma: " << format_number(cfg.params.gamma) << '\n'
      << "n_owners: " << cfg.params.n_owners << '\n'
      << "rho: " << format_number(rep.rho) << '\n'
      << "stable: " << bool_name(rep.stable) << '\n'
      << "n_min_exact: " << rep.n_min_exact << '\n'
      << "n_min_corollary: " << rep.n_min_corollary << '\n'
      << "drift_up: " << format_number(rep.drift_up) << '\n'
      << "drift_down: " << format_number(rep.drift_down) << '\n';
  return rep.stable ? 0 : 2;
}

int cmd_solve(const RunConfig& cfg, const RunOptions& opt, std::ostream& log) {
  const std::string prefix = output_prefix(cfg, opt);
  const double rho = traffic_intensity(cfg.params);
  std::string csv = std::string(kMainHeader) + "\n";

  if (rho >= 1.0) {
    if (!opt.allow_unstable)
      throw UnstableModelError("instance is unstable (rho = " + format_number(rho) +
                               "); pass --allow-unstable to record it");
    csv += render_main_row(unstable_row(cfg.model, cfg.params, rho));
    write_file(prefix + ".csv", csv);
    log << "wrote " << prefix << ".csv (unstable instance, measures blank)\n";
    return 0;
  }

  const SolvedPoint pt = solve_point(cfg.model, cfg.params, cfg.solver, cfg.truncation_tol);
  csv += render_main_row(analytic_row(cfg.model, cfg.params, pt));
  write_file(prefix + ".csv", csv);
  write_detail_json(prefix + "_detail.json", cfg.model, cfg.params, pt);
  log << "wrote " << prefix << ".csv and " << prefix << "_detail.json\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const RunOptions& opt, std::ostream& log) {
  if (!cfg.sweep) throw ConfigError("sweep command needs a \"sweep\" section");
  const std::string prefix = output_prefix(cfg, opt);
  const std::vector<double> grid = sweep_grid(*cfg.sweep);

  std::string csv = std::string(kMainHeader) + "\n";
  for (double value : grid) {
    ModelParams p = apply_sweep_value(cfg.params, cfg.sweep->parameter, value);
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("sweep value " + format_number(value) +
                        " gives invalid params: " + e.what());
    }
    const double rho = traffic_intensity(p);
    if (rho >= 1.0) {
      if (!opt.allow_unstable)
        throw UnstableModelError("sweep point " + format_number(value) +
                                 " is unstable (rho = " + format_number(rho) +
                                 "); pass --allow-unstable to keep going");
      csv += render_main_row(unstable_row(cfg.model, p, rho));
      continue;
    }
    const SolvedPoint pt = solve_point(cfg.model, p, cfg.solver, cfg.truncation_tol);
    csv += render_main_row(analytic_row(cfg.model, p, pt));
  }
  write_file(prefix + ".csv", csv);
  log << "wrote " << prefix << ".csv (" << grid.size() << " grid points)\n";
  return 0;
}

int cmd_simulate(const RunConfig& cfg, const RunOptions& opt, std::ostream& log) {
  if (!cfg.sim) throw ConfigError("simulate command needs a \"sim\" section");
  const std::string prefix = output_prefix(cfg, opt);
  const ModelParams& p = cfg.params;
  const double rho = traffic_intensity(p);

  std::optional<PerformanceReport> rep;
  if (rho < 1.0)
    rep = analytic_report(cfg.model, p, solve_model(cfg.model, p, cfg.solver));

  const SimResult sim = simulate(cfg.model, p, *cfg.sim);

  struct MetricRow {
    const char* name;
    double analytic;
    const SimEstimate* est;
  };
  const MetricRow rows[] = {
      {"eq1", rep ? rep->mean_idle_owners : kNan, &sim.idle_owners},
      {"eq2", rep ? rep->mean_waiting_seekers : kNan, &sim.waiting_seekers},
      {"throughput", rep ? rep->throughput : kNan, &sim.throughput},
      {"sojourn_mean", rep ? rep->sojourn_little : kNan, &sim.sojourn_mean},
  };

  std::ostringstream csv;
  csv << kSimHeader << '\n';
  for (const MetricRow& row : rows) {
    const double ci = row.est->ci_halfwidth;
    std::string ci_text = std::isnan(ci) ? "na" : format_number(ci);
    std::string within;
    if (std::isfinite(row.analytic) && std::isfinite(ci))
      within = bool_name(std::abs(row.analytic - row.est->mean) <= ci);
    csv << model_name(cfg.model) << ',' << format_number(p.lambda) << ','
        << format_number(p.mu) << ',' << format_number(p.gamma) << ',' << p.n_owners
        << ',' << row.name << ',' << format_number(row.analytic) << ','
        << format_number(row.est->mean) << ',' << ci_text << ',' << within << ','
        << cfg.sim->base_seed << '\n';
  }
  write_file(prefix + ".csv", csv.str());
  log << "wrote " << prefix << ".csv (" << sim.departures << " departures observed)\n";
  return 0;
}

namespace {

struct SojournRowIds {
  Model model;
  ModelParams p;
};

void append_sojourn_mean_row(std::string& csv, const SojournRowIds& ids, double ew_rg,
                             double ew_little, double ew_sim) {
  std::ostringstream s;
  s << model_name(ids.model) << ',' << format_number(ids.p.lambda) << ','
    << format_number(ids.p.mu) << ',' << format_number(ids.p.gamma) << ','
    << ids.p.n_owners << ",mean,,," << format_number(ew_rg) << ','
    << format_number(ew_little) << ',' << format_number(ew_sim) << '\n';
  csv += s.str();
}

void append_sojourn_cdf_row(std::string& csv, const SojournRowIds& ids, double t,
                            double f) {
  std::ostringstream s;
  s << model_name(ids.model) << ',' << format_number(ids.p.lambda) << ','
    << format_number(ids.p.mu) << ',' << format_number(ids.p.gamma) << ','
    << ids.p.n_owners << ",cdf," << format_number(t) << ',' << format_number(f)
    << ",,,\n";
  csv += s.str();
}

double sim_sojourn_mean(const RunConfig& cfg, const ModelParams& p) {
  if (!cfg.sim) return kNan;
  return simulate(cfg.model, p, *cfg.sim).sojourn_mean.mean;
}

}  // namespace

int cmd_sojourn(const RunConfig& cfg, const RunOptions& opt, std::ostream& log) {
  const std::string prefix = output_prefix(cfg, opt);

  std::vector<ModelParams> points;
  if (cfg.sweep) {
    for (double v : sweep_grid(*cfg.sweep)) {
      ModelParams p = apply_sweep_value(cfg.params, cfg.sweep->parameter, v);
      try {
        p.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError("sweep value " + format_number(v) +
                          " gives invalid params: " + e.what());
      }
      points.push_back(p);
    }
  } else {
    points.push_back(cfg.params);
  }

  for (const ModelParams& p : points) {
    const double rho = traffic_intensity(p);
    if (rho >= 1.0)
      throw UnstableModelError("sojourn distribution needs a stable instance (rho = " +
                               format_number(rho) + ")");
  }

  std::string csv = std::string(kSojournHeader) + "\n";

  if (cfg.model == Model::two) {
    // No absorbing-chain machinery for the two-stage model: emit the
    // Little's-law and simulation means, then report the feature gap.
    for (const ModelParams& p : points) {
      const StationarySolution sol = solve_model(cfg.model, p, cfg.solver);
      const PerformanceReport rep = analytic_report(cfg.model, p, sol);
      append_sojourn_mean_row(csv, {cfg.model, p}, kNan, rep.sojourn_little,
                              sim_sojourn_mean(cfg, p));
    }
    write_file(prefix + ".csv", csv);
    log << "wrote " << prefix
        << ".csv; sojourn distributions are only available for model one\n";
    return 4;
  }

  const bool single_point = points.size() == 1;
  for (const ModelParams& p : points) {
    const StationarySolution sol = solve_model(cfg.model, p, cfg.solver);
    const PerformanceReport rep = analytic_report(cfg.model, p, sol);
    const AbsorbingChainOne chain = build_absorbing_chain(p, sol);
    const double ew_rg =
        p.lambda > 0.0 ? expected_sojourn_rg(chain, cfg.truncation_tol).mean : kNan;

    if (single_point) {
      Vec grid = cfg.sojourn_grid;
      if (grid.empty()) {
        double scale = std::isfinite(ew_rg) && ew_rg > 0.0 ? ew_rg : rep.sojourn_little;
        if (!(std::isfinite(scale) && scale > 0.0)) scale = 1.0;
        for (int i = 0; i <= 100; ++i)
          grid.push_back(10.0 * scale * static_cast<double>(i) / 100.0);
      }
      const Vec f = sojourn_cdf(chain, grid, cfg.truncation_tol);
      for (std::size_t i = 0; i < grid.size(); ++i)
        append_sojourn_cdf_row(csv, {cfg.model, p}, grid[i], f[i]);
    }
    append_sojourn_mean_row(csv, {cfg.model, p}, ew_rg, rep.sojourn_little,
                            sim_sojourn_mean(cfg, p));
  }
  write_file(prefix + ".csv", csv);
  log << "wrote " << prefix << ".csv\n";
  return 0;
}

int run_command(const std::string& command, const std::string& config_path,
                const RunOptions& opt, std::ostream& log) {
  try {
    const RunConfig cfg = load_run_config(config_path);
    if (command == "stability") return cmd_stability(cfg, opt, log);
    if (command == "solve") return cmd_solve(cfg, opt, log);
    if (command == "sweep") return cmd_sweep(cfg, opt, log);
    if (command == "simulate") return cmd_simulate(cfg, opt, log);
    if (command == "sojourn") return cmd_sojourn(cfg, opt, log);
    log << "unknown command \"" << command << "\"\n";
    return 1;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return 1;
  } catch (const CapacityError& e) {
    log << "capacity error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return 1;
  } catch (const UnstableModelError& e) {
    log << "unstable model: " << e.what() << '\n';
    return 2;
  } catch (const NonConvergenceError& e) {
    log << "solver did not converge: " << e.what() << '\n';
    return 3;
  } catch (const SolverError& e) {
    log << "solver error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace pqbd
