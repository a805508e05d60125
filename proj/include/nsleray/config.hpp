#pragma once

#include "nsleray/field.hpp"
#include "nsleray/kernels.hpp"
#include "nsleray/scheme_burgers.hpp"
#include "nsleray/scheme_ns.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace nsleray {

/// Flat `key = value` run configuration; `#` starts a comment.
struct Config {
  int n_points = 32;
  double box_length = 2.0 * kPi;
  double nu = 0.1;
  double rho_c = 0.05;
  /// harmonic | controlled | fixed
  std::string rho_mode = "harmonic";
  double rho_scale = 1.0;
  int steps = 1;
  /// 0 selects the grid default.
  double cutoff_epsilon = 0.0;
  CutoffStyle cutoff_style = CutoffStyle::smooth_bump;
  double picard_tol = 1e-10;
  int picard_kmax = 30;
  int substeps = kDefaultSubsteps;
  int padding = 2;
  /// spectral | kernel
  std::string leray = "spectral";
  /// beltrami | colehopf | nsf1-file | random-solenoidal
  std::string initial_kind = "beltrami";
  double initial_amplitude = 1.0;
  std::string initial_file;
  std::uint64_t seed = 1;
  int trials = 100;
  double oracle_time = 0.0;
  bool dump_fields = false;
  bool timing = false;

  Grid grid() const { return Grid(n_points, box_length); }
  CutoffSpec cutoff() const;
};

/// Throws ConfigError on unknown keys or malformed values.
Config parse_config(std::istream& in);
/// Throws ConfigError("config: not found: <path>") if the file is missing.
Config load_config(const std::filesystem::path& path);

/// The initial velocity named by initial.kind. colehopf gives the gradient of
/// cole_hopf_potential(grid, initial.amplitude).
VectorField make_initial(const Config& c);

BurgersParams burgers_params(const Config& c);
NsParams ns_params(const Config& c);

}  // namespace nsleray
