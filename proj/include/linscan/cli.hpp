#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "linscan/evaluation.hpp"
#include "linscan/types.hpp"

namespace linscan::cli {

enum class Command { dbscan, optics, linscan, generate, benchmark, search };
std::string to_string(Command c);
Command command_from_string(const std::string& s);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Command command = Command::linscan;
  std::filesystem::path input;  // point file; unused by generate/benchmark/search
  std::filesystem::path out = ".";
  LinscanParams params;
  bool prune = true;
  bool svg = false;

  // generate / benchmark / search
  std::string dataset = "suite";  // "suite" or "crossing"
  SyntheticSpec suite;
  double crossing_angle_deg = 90.0;
  std::string algorithm = "linscan";  // linscan | optics | both (both: search only)
  std::size_t trials = 100;
  std::size_t validation_sets = 5;
  std::size_t test_sets = 10;

  // Throws ConfigError on the first invalid field for this command.
  void validate() const;
};

struct ParseOutcome {
  RunConfig config;
  bool help_requested = false;
  std::string help_text;
};

/// Parses arguments (without the program name). The first positional is
/// the subcommand; "replay <manifest>" rebuilds the config recorded in a
/// manifest, and an --out given alongside overrides the recorded output
/// directory. Throws ConfigError on unknown flags or bad values.
ParseOutcome parse_args(const std::vector<std::string>& args);

// Manifest round trip. The manifest records the full config and the seed;
// run() adds the input digest and output digests.
std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& json_text);

/// Runs one subcommand and writes its artifacts to config.out. Every output
/// is computed before any file is written. Throws on invalid configs and on
/// module errors.
void run(const RunConfig& config);

// Entry point for the executable: parse, validate, run. Errors go to `err`
// and produce a nonzero status.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linscan::cli
