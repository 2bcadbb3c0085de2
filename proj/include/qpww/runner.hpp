#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpww/sim_spec.hpp"
#include "qpww/timestepper.hpp"

namespace qpww {

/// Process exit codes. Stable across releases.
enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_usage = 64,
  exit_parse = 65,
  exit_validation = 66,
  exit_surface_degenerate = 67,
  exit_non_finite = 68,
  exit_snapshot = 69,
  exit_io = 74,
};

enum class Command { simulate, lemma_suite, iterate, refine, dispersion };

std::optional<Command> parse_command(std::string_view name);
std::string command_name(Command command);

struct RunOptions {
  std::optional<std::string> output_dir;  ///< wins over QPWW_OUTPUT_DIR and the spec
  std::optional<std::uint64_t> seed;      ///< replaces every seed in the spec
  unsigned threads = 1;
  std::vector<std::string> argv;  ///< recorded in the manifest
  std::ostream* log = nullptr;    ///< warnings and notes
};

/// Output directory after applying --output, then QPWW_OUTPUT_DIR, then the spec.
std::filesystem::path resolve_output_dir(const SimulationSpec& spec, const RunOptions& options);

/// Initial states described by a spec section. Modes outside the admissible
/// class are projected away; snapshots are embedded into the spec lattice.
DiffState build_diff_state(const FieldInit& init, const LatticePtr& lattice, double sobolev, std::ostream* log = nullptr);
SurfaceState build_surface_state(const FieldInit& init, const LatticePtr& lattice, double sobolev,
                                 std::ostream* log = nullptr);
LinState build_lin_state(const FieldInit& init, const LatticePtr& lattice, std::ostream* log = nullptr);

/// Runs a command and writes its artifacts plus manifest.json. Errors are
/// reported on the log and mapped to an ExitCode; artifacts written before an
/// abort are kept.
int run(Command command, const SimulationSpec& spec, const RunOptions& options);

/// Reads and parses the spec file, then calls run.
int run_file(Command command, const std::filesystem::path& spec_path, const RunOptions& options);

/// ExitCode for the exception currently being handled.
int exit_code_for_current_exception(std::ostream* log);

}  // namespace qpww
