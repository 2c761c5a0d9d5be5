#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "platform_qbd/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"matrix-analytic solver for two-sided service platforms"};
  app.require_subcommand(1);

  std::string config_path;
  pqbd::RunOptions opt;

  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"stability", "print the traffic intensity and minimal stable pool size"},
      {"solve", "solve one instance; writes a CSV row and a JSON detail file"},
      {"sweep", "solve every point of the configured parameter grid"},
      {"simulate", "run the stochastic simulator against the analytic measures"},
      {"sojourn", "tabulate the waiting-time distribution and its mean estimates"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "path to the JSON run configuration")
        ->required();
    sub->add_option("--out", opt.out_prefix,
                    "output path prefix, overriding the config's \"outputs\"");
    sub->add_flag("--allow-unstable", opt.allow_unstable,
                  "record unstable grid points as rows with blank measures");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems are config errors
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return pqbd::run_command(command, config_path, opt, std::cout);
}
