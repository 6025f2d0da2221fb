#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "toric/report.hpp"

namespace {

int run(const std::string& command, const std::string& config_path,
        const std::string& out_override, int threads) {
  Eigen::setNbThreads(threads);
  toric::RunConfig cfg;
  try {
    cfg = toric::load_config(config_path, command);
  } catch (const toric::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  if (!out_override.empty()) cfg.out_dir = out_override;
  try {
    auto t0 = std::chrono::steady_clock::now();
    toric::RunReport report = toric::run_command(cfg);
    double wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    toric::emit_outputs(report, cfg.out_dir, wall_ms);
    std::cout << report.payload["results"].dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral laboratory for torus-symmetric Hessian metrics on "
               "Delzant polytopes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  const char* env_out = std::getenv("TORIC_SPECTRA_OUT");
  if (env_out) out_dir = env_out;
  int threads = 1;

  const std::vector<std::string> commands = {"spectrum", "derivative",
                                             "critical", "hull",
                                             "flow",     "check"};
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker thread count");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }
  return run(app.get_subcommands().front()->get_name(), config_path, out_dir,
             threads);
}
