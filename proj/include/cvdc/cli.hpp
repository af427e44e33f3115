#pragma once

// Command-line front end. `run` executes one analysis described by a
// RunConfig and writes a machine-readable result (CSV or JSON).
//
// Exit status: 0 success, 1 invalid configuration or I/O failure, 2 no-root or
// empty-region outcome (a diagnostic record is still written), 3 `verify`
// found a checkpoint outside its tolerance.

#include "cvdc/advantage.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cvdc::cli {

enum class Command { Capacity, Scan, Threshold, Breakeven, Ratio, Verify };
enum class Format { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 1;
inline constexpr int kExitNoResult = 2;
inline constexpr int kExitCheckFailed = 3;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Command command = Command::Capacity;
  int n_modes = 3;
  std::vector<double> taus;
  std::optional<double> nbar;
  int grid = 64;
  /// Monte Carlo sample count for `capacity`; 0 disables the estimate.
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  double r = 20.0;
  std::string out;
  Format format = Format::Json;
  bool bits = false;
  unsigned workers = 0;

  /// Throws ConfigError when a field required by `command` is missing or
  /// out of range.
  void validate() const;
};

Command parse_command(std::string_view name);
std::string_view command_name(Command command);
Format parse_format(std::string_view name);

/// Writes to `config.out` when set, otherwise to `out`. Diagnostics go to
/// `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// CSV: header tau1[,tau2[,tau3...]],delta_<unit>,advantage; one row per grid
/// point in record order. JSON: {"meta": {...}, "records": [...]}. Numbers
/// carry 12 significant digits.
std::string serialize_region(const RegionScan& scan, Format format, bool bits = false);

/// Inverse of serialize_region for nat-valued output. CSV carries no
/// metadata, so n_modes and grid are inferred and nbar is left at 0.
RegionScan parse_region(std::string_view text, Format format);

/// Rounds to 12 significant digits, the precision used in all output.
double round_sig12(double x);

struct Checkpoint {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool relative = false;
  bool passed = false;
};

/// Reference values for the three- and four-mode networks: threshold
/// energies, their minima over the transmissivities, break-even squeezing and
/// the large-squeezing capacity ratios.
std::vector<Checkpoint> run_checkpoints();

}  // namespace cvdc::cli
