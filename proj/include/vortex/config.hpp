#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vortex/constants.hpp"
#include "vortex/domain.hpp"
#include "vortex/errors.hpp"
#include "vortex/filament.hpp"

namespace vortex {

/// Every problem found in a config, reported together.
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct SimulationConfig {
  std::string mode = "nonlinear";  ///< nonlinear | linearized
  double tau = 1.0;
  double dt = 0.0;        ///< 0: half the stability bound
  int N = 128;
  int output_every = 0;   ///< 0: about 200 rows
  int reparam_every = 0;  ///< nonlinear only; 0 disables
  std::vector<int> mode_columns;
};

struct SweepConfig {
  int n_max = 16;
  int k_max = -1;
  int M = 0;  ///< 0: analytic solves cover the selection rule, grid solves use 32
  double bin_width = 0.01;
  bool include_n0 = false;
};

struct GridConfig {
  double h = 0.0;  ///< 0: derived from `cells`
  int cells = 64;
  bool force = false;
};

struct DispersionConfig {
  int n_min = 1;
  int n_max = 5;
};

struct RunConfig {
  PhysicalConstants constants;
  std::optional<DomainSpec> domain;
  std::optional<FilamentState> filament;
  std::optional<SimulationConfig> simulation;
  SweepConfig sweep;
  GridConfig grid;
  DispersionConfig dispersion;
  std::string output_directory = "out";
  bool gnuplot = true;

  std::string canonical;  ///< normalised JSON, the input of the config hash
};

/// Strict JSON config: unknown keys and bad values anywhere are collected
/// and thrown as one ConfigError. Relative mask paths resolve against
/// `base_dir`.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// FNV-1a, 64 bit, as 16 hex digits.
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace vortex
