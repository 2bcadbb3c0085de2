#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qpww/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quasiperiodic water wave simulator and estimate lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(QPWW_CLI_VERSION));

  std::string spec_path;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "Integrate the configured system and write series.csv and snapshots"},
      {"lemma-suite", "Run the randomized estimate suite and write report.csv"},
      {"iterate", "Run the frozen-coefficient iteration experiment"},
      {"refine", "Run the resolution refinement experiment"},
      {"dispersion", "Measure linear frequencies of single modes"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--spec", spec_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--output", output, "Output directory (overrides QPWW_OUTPUT_DIR and the spec)");
    sub->add_option("--seed", seed, "Replace every seed in the spec");
    sub->add_option("--threads", threads, "Worker threads for suites and sweeps")->check(CLI::Range(1u, 1024u));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qpww::exit_usage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  qpww::RunOptions options;
  options.output_dir = output;
  options.seed = seed;
  options.threads = threads;
  options.argv.assign(argv, argv + argc);
  options.log = &std::cerr;
  return qpww::run_file(*qpww::parse_command(chosen->get_name()), spec_path, options);
}
