// iunorm: experiment runner for integral-uniform norms.
//
//   iunorm <command> [--n --m --dist --trials --seed --net-factor --c0 --beta
//                     --out --format --threads ...]
//
// Exit codes: 0 all rows pass, 1 some contract row failed, 2 usage error.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "iunorm/experiments.hpp"

int main(int argc, char** argv) {
  using namespace iunorm;
  RunConfig config;
  std::string format = "csv";
  unsigned threads = 0;

  CLI::App app{"Integral-uniform norm experiments"};
  app.require_subcommand(0, 0);
  std::string commands;
  for (const auto& name : command_names()) commands += (commands.empty() ? "" : ", ") + name;
  app.add_option("command", config.command, "One of: " + commands)->required();
  app.add_option("--n", config.n_list, "Polynomial order / dimension list (comma separated)")->delimiter(',');
  app.add_option("--m", config.m_list, "m values (comma separated)")->delimiter(',');
  app.add_option("--dist", config.dist, "Coefficient distribution: rademacher | gaussian");
  app.add_option("--kind", config.kind, "Kernel or polynomial kind: fejer | dirichlet | both | random");
  app.add_option("--trials,--attempts", config.trials, "Monte Carlo trials, random polynomials or sign attempts");
  app.add_option("--seed", config.seed, "Master seed (required for stochastic commands)");
  app.add_option("--net-factor", config.net_factor, "Net points per unit of order");
  app.add_option("--net-size", config.net_size, "Explicit net size (sample)");
  app.add_option("--mc", config.mc_trials, "norm: use Monte Carlo with this many trials");
  app.add_option("--c0", config.c0, "Target constant for sign search")->capture_default_str();
  app.add_option("--beta", config.beta, "Lemma exponent beta in [0, 1/2)")->capture_default_str();
  app.add_option("--delta", config.delta, "Sign search L1 branch exponent")->capture_default_str();
  app.add_option("--moment-bound", config.moment_bound, "Moment constant M")->capture_default_str();
  app.add_flag("--refine", config.refine, "sign-search: greedy single-flip refinement");
  app.add_option("--input,--config", config.input_path, "Input CSV (norm) or JSON grid (sandwich)");
  app.add_option("--poly", config.poly_path, "Trigonometric polynomial CSV (j,re,im)");
  app.add_option("--out", config.output_path, "Output file (written atomically); stdout if absent");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "Worker threads (default: IUNORM_THREADS or hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  config.threads = threads > 0 ? threads : default_threads();

  try {
    const Report report = run_command(config);
    const std::string text = render(report, config.format);
    if (config.output_path.empty())
      std::cout << text << std::flush;
    else
      write_atomically(config.output_path, text);
    return report.all_pass ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "iunorm: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "iunorm: " << e.what() << '\n';
    return 2;
  }
}
