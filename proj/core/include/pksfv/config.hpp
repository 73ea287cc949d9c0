#ifndef PKSFV_CONFIG_HPP
#define PKSFV_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "pksfv/field.hpp"
#include "pksfv/grid.hpp"
#include "pksfv/params.hpp"
#include "pksfv/stepper.hpp"

namespace pksfv {

/// Environment variable consulted for the default output root when a config
/// leaves output_dir empty.
inline constexpr const char* kOutputRootEnv = "PKSFV_OUTPUT_ROOT";

/// Initial-condition families buildable from a config.
enum class IcKind { constant, gaussian_bump, table };

/// Full description of one experiment, loadable from a flat key = value file
/// (grammar in README.md: '#' comments, unknown keys are hard errors).
struct RunConfig {
  // model
  int dim = 3;
  double radius = 1.0;
  std::size_t cells = 200;
  double delta = 0.0;
  double mass = 1.0;

  // stepping
  double cfl_safety = 0.4;
  double dt_init = 1e-6;
  double dt_min = 1e-14;
  double dt_max = 1e-2;

  // initial condition (normalized to mean = mass after shaping)
  IcKind ic_kind = IcKind::constant;
  double ic_amplitude = 1.0;       ///< bump contrast on the unit background, >= 0
  double ic_width = 0.1;
  double ic_center_radius = 0.0;
  std::string ic_table_file;       ///< CSV r,u profile for IcKind::table

  // schedule and outputs
  double t_end = 1.0;
  double sample_dt = 0.0;          ///< 0: t_end/100
  double snapshot_dt = 0.0;        ///< 0: snapshot only at termination
  std::string output_dir;         ///< empty: $PKSFV_OUTPUT_ROOT or ./pksfv_out
  std::uint64_t seed = 0;

  // threshold classification
  double cs = 0.0;                 ///< 0: estimate on the run grid
  std::uint64_t sobolev_trials = 8;
  std::uint64_t sobolev_iterations = 200;

  // blow-up sentinel
  std::uint64_t blowup_dt_repeats = 10;
  double blowup_growth_factor = 1e3;
  std::uint64_t blowup_window = 10;

  /// Throws std::invalid_argument with the offending key on any violation.
  void validate() const;

  ModelParams model_params() const;
  StepperConfig stepper_config() const;
  double effective_sample_dt() const;
  std::filesystem::path effective_output_dir() const;
};

/// Parses a config file.  Unknown keys, malformed lines, duplicate keys and
/// out-of-range values are hard errors (std::invalid_argument).
RunConfig load_config(const std::filesystem::path& file);
RunConfig load_config(std::istream& in, const std::string& origin);

/// Writes every key (defaults included) in sorted order; load_config on the
/// result reproduces the config exactly.
void save_config(const RunConfig& cfg, std::ostream& out);

/// Builds the initial state on the grid: shape per ic_kind, then scaled so the
/// volume mean equals cfg.mass exactly as computed by mean_value.
CellField build_initial_condition(const RunConfig& cfg, const RadialGrid& g);

}  // namespace pksfv

#endif
