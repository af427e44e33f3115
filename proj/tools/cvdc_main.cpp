#include "cvdc/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  namespace cli = cvdc::cli;

  CLI::App app{"Dense-coding capacity analysis for continuous-variable networks"};
  app.set_config("--config", "", "Read options from a key=value file; command-line flags take precedence");

  std::string command;
  std::string format = "json";
  std::optional<double> nbar;
  cli::RunConfig cfg;

  app.add_option("command", command, "capacity | scan | threshold | breakeven | ratio | verify")
      ->required()
      ->check(CLI::IsMember({"capacity", "scan", "threshold", "breakeven", "ratio", "verify"}));
  app.add_option("--modes,-n", cfg.n_modes, "Number of modes (senders + receiver)")->capture_default_str();
  app.add_option("--tau", cfg.taus, "Beam-splitter transmissivities, comma separated")->delimiter(',');
  app.add_option("--nbar", nbar, "Total mean photon number of the sender modes");
  app.add_option("--grid", cfg.grid, "Grid points per axis for scan and threshold minimization")
      ->capture_default_str();
  app.add_option("--samples", cfg.samples, "Monte Carlo samples for capacity (0 disables)")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();
  app.add_option("--r", cfg.r, "Squeezing for the ratio command")->capture_default_str();
  app.add_option("--out,-o", cfg.out, "Output file (default: stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_flag("--bits", cfg.bits, "Report information in bits instead of nats");
  app.add_option("--workers", cfg.workers, "Worker threads for scan (0 = hardware concurrency)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitInvalidConfig;
  }

  cfg.command = cli::parse_command(command);
  cfg.format = cli::parse_format(format);
  cfg.nbar = nbar;
  return cli::run(cfg, std::cout, std::cerr);
}
