// Command-line front end: `aremor run <config>` and `aremor sweep <config>`.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "aremor/errors.hpp"
#include "aremor/harness.hpp"

namespace {

struct Overrides {
  std::string methods;
  double tol = 0.0;
  std::string out;
  std::uint64_t seed = 0;
};

aremor::ExperimentConfig resolve(const std::string& path, const CLI::App& app,
                                 const Overrides& o) {
  aremor::ExperimentConfig cfg = aremor::load_config(path);
  if (app.count("--methods")) cfg.methods = aremor::parse_method_list(o.methods);
  if (app.count("--tol")) cfg.tol = o.tol;
  if (app.count("--out")) cfg.output_dir = o.out;
  if (app.count("--seed")) cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--methods", o.methods, "comma list from pod,bt,gark,pgark");
  cmd->add_option("--tol", o.tol, "residual tolerance");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "seed for randomized utilities");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riccati-based LQR model reduction experiments"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  std::string dx_text;

  CLI::App* run = app.add_subcommand("run", "run one experiment");
  run->add_option("config", config_path, "INI config file")->required();
  add_overrides(run, overrides);

  CLI::App* sweep = app.add_subcommand("sweep", "timing sweep over grid spacings");
  sweep->add_option("config", config_path, "INI config file")->required();
  sweep->add_option("--dx", dx_text, "comma list of grid spacings")->required();
  add_overrides(sweep, overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : aremor::kExitConfigError;
  }

  try {
    if (*run) {
      const aremor::ExperimentConfig cfg = resolve(config_path, *run, overrides);
      const aremor::ExperimentResult result = aremor::run_experiment(cfg);
      std::printf("n = %lld, reference %s\n", static_cast<long long>(result.n),
                  result.has_reference ? "computed" : "skipped");
      for (const auto& o : result.outcomes) {
        std::printf("%-6s %-14s", o.method.c_str(), o.status.c_str());
        if (!o.history.empty()) {
          std::printf(" r = %-4lld R_P = %.3e",
                      static_cast<long long>(o.history.back().r),
                      o.history.back().residual);
        }
        if (!o.message.empty()) std::printf("  (%s)", o.message.c_str());
        std::printf("\n");
      }
      return result.exit_code;
    }
    const aremor::ExperimentConfig cfg = resolve(config_path, *sweep, overrides);
    const auto rows = aremor::scaling_sweep(cfg, aremor::parse_double_list(dx_text));
    int code = aremor::kExitOk;
    for (const auto& row : rows) {
      std::printf("%-6s dx = %-8g n = %-7lld r = %-4lld R_P = %.3e  %.3f s  %s\n",
                  row.method.c_str(), row.dx, static_cast<long long>(row.n),
                  static_cast<long long>(row.r), row.residual, row.elapsed_s,
                  row.status.c_str());
      if (row.status != "converged") code = aremor::kExitSolverFailure;
    }
    return code;
  } catch (const aremor::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return aremor::kExitConfigError;
  } catch (const aremor::Error& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return aremor::kExitSolverFailure;
  }
}
