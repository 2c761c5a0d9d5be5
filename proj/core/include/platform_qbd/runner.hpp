#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "platform_qbd/params.hpp"
#include "platform_qbd/qbd_solver.hpp"
#include "platform_qbd/sim.hpp"

namespace pqbd {

enum class SweepParameter { lambda, gamma, mu, n_owners, price, share };

struct SweepSpec {
  SweepParameter parameter = SweepParameter::lambda;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;  // grid points, endpoints included
};

struct RunConfig {
  Model model = Model::one;
  ModelParams params;
  std::optional<SweepSpec> sweep;
  SolverOptions solver;
  double truncation_tol = 1e-10;  // level-truncation tolerance of the RG paths
  std::optional<SimConfig> sim;
  std::vector<double> sojourn_grid;  // empty: derived from the solved mean
  std::string outputs = "run";       // output path prefix
};

// Parses a JSON config file. Unknown fields are rejected; lambda, mu, gamma
// and n_owners are required. Throws ConfigError.
RunConfig load_run_config(const std::string& path);

// Grid of parameter values (and the instances they induce).
std::vector<double> sweep_grid(const SweepSpec& spec);
ModelParams apply_sweep_value(const ModelParams& base, SweepParameter which, double value);

struct RunOptions {
  std::string out_prefix;      // overrides the config's prefix when nonempty
  bool allow_unstable = false;
};

// Command bodies behind the CLI, returning its exit code:
// 0 success, 1 config error, 2 unstable, 3 solver failure, 4 unsupported.
// Human-readable progress goes to `log`; data goes to files under the prefix.
int cmd_stability(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);
int cmd_solve(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);
int cmd_sojourn(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);

// Dispatch by command name; unknown names return 1.
int run_command(const std::string& command, const std::string& config_path,
                const RunOptions& opt, std::ostream& log);

// Shared formatting: 12 significant digits, empty string for non-finite.
std::string format_number(double v);

}  // namespace pqbd
