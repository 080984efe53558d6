#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "shockfront/exact_solution.hpp"
#include "shockfront/process.hpp"
#include "shockfront/thermo.hpp"

namespace shockfront::config {

/// thermo block: {"model": "ideal", "n": 3, "R": 0.6}
///               {"model": "vdw", "a": .., "b": .., "n": .., "R": ..}
///               {"model": "custom", "name": "<registry entry>", ...params}
struct ThermoConfig {
  std::string model = "ideal";
  std::string name;  // registry entry for "custom"
  double n = 3.0;
  double R = 0.6;
  double a = 0.0;
  double b = 0.0;
};

/// process block: {"process": "adiabatic", "s0": 0, "rho_min": .., "rho_max": ..}
///                {"process": "table", "file": "p_of_rho.csv"}
///                {"process": "cubic", "c0": .., "c1": .., "rho_min": .., "rho_max": ..}
struct ProcessConfig {
  std::string kind = "adiabatic";
  double s0 = 0.0;
  Interval rho_domain = process::kDefaultRhoDomain;
  std::string file;  // resolved against the config file directory
  double c0 = 1.0;
  double c1 = 0.0;
};

/// solution block: {"alpha": [a0, a1, a2, a3], "rho_window": [lo, hi]}
struct SolutionConfig {
  exact::Alphas alpha{0.0, 0.0, 1.0, 1.0};
  Interval rho_window{0.0, 0.0};  // empty: process domain
};

/// fvm block: {"x_min", "x_max", "cells", "cfl"}
struct FvmConfig {
  double x_min = -60.0;
  double x_max = 25.0;
  int cells = 1600;
  double cfl = 0.45;
};

/// verify block: {"seed", "samples"}
struct VerifyConfig {
  std::uint64_t seed = 1;
  int samples = 100;
};

struct RunConfig {
  ThermoConfig thermo;
  ProcessConfig process;
  SolutionConfig solution;
  FvmConfig fvm;
  VerifyConfig verify;
  std::string output_dir = ".";

  /// Every field with its effective value, as JSON text (sorted keys).
  std::string resolved_json() const;
  /// FNV-1a 64 of resolved_json(), hex.
  std::string hash() const;
};

/// Schema-checked parse; unknown keys and wrong types raise ConfigError.
/// Relative table paths resolve against `base_dir`.
RunConfig parse_config(const std::string& json_text,
                       const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

thermo::PotentialModel build_model(const RunConfig& cfg);
process::ProcessCurve build_curve(const RunConfig& cfg);
exact::SolutionFamily build_family(const RunConfig& cfg);
/// solution.rho_window, or the curve domain when it is empty.
Interval working_window(const RunConfig& cfg, const process::ProcessCurve& curve);

}  // namespace shockfront::config
