#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace vortex {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct CliOptions {
  std::string config_path;  ///< empty: built-in defaults (dispersion only)
  std::string out_dir;      ///< overrides output.directory
  bool force_grid = false;
  double grid_h = 0.0;      ///< overrides grid.h when > 0
  bool quiet = false;
  std::optional<int> n_min, n_max;  ///< dispersion range overrides
};

/// Runs one subcommand (dispersion, simulate, eigen, spectrum, validate) and
/// returns its exit code. Errors are reported on `err`, summaries on `out`
/// unless quiet.
int run_command(const std::string& name, const CliOptions& opt, std::ostream& out, std::ostream& err);

/// "%.15g", with NaN printed as "nan".
std::string format_number(double v);

}  // namespace vortex
