#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "shockfront/exact_solution.hpp"
#include "shockfront/process.hpp"

namespace shockfront::fvm {

enum class Boundary { outflow, periodic };

struct GridSpec {
  double x_min = -60.0;
  double x_max = 25.0;
  int n_cells = 1600;
  Boundary boundary = Boundary::outflow;
};

/// Cell averages of the conserved variables (rho, rho u) for
/// rho_t + (rho u)_x = 0, (rho u)_t + (rho u^2 + p(rho))_x = 0.
struct GridState {
  GridSpec spec;
  std::vector<double> rho;
  std::vector<double> mom;
  double time = 0.0;
  long steps = 0;
  /// Net mass and momentum that entered through the two ends so far.
  double boundary_mass_in = 0.0;
  double boundary_mom_in = 0.0;

  double dx() const { return (spec.x_max - spec.x_min) / spec.n_cells; }
  double x_center(int i) const { return spec.x_min + (i + 0.5) * dx(); }
  double total_mass() const;
  double total_momentum() const;
};

/// Midpoint sampling of the analytic profile at t0. Every cell centre must
/// carry exactly one branch; otherwise DomainError naming the cusp time.
GridState init_from_analytic(const exact::SolutionFamily& family, double t0, const GridSpec& spec);

GridState init_constant(const GridSpec& spec, double rho, double u);

using ProfileFn = std::function<std::pair<double, double>(double x)>;  // x -> (rho, u)
GridState init_profile(const GridSpec& spec, const ProfileFn& profile);

struct StepOptions {
  double cfl = 0.45;
  /// Cap on dt (lets the last step land on a target time).
  double max_dt = 0.0;
};

/// One Rusanov step, dt = cfl dx / max(|u| + sqrt(p')). OpenMP over
/// interfaces and cells; bit-identical to step_serial.
double step(GridState& state, const process::ProcessCurve& curve, const StepOptions& options = {});
double step_serial(GridState& state, const process::ProcessCurve& curve,
                   const StepOptions& options = {});

/// Steps until state.time == t_end (the last step is shortened).
void advance_to(GridState& state, const process::ProcessCurve& curve, double t_end,
                const StepOptions& options = {}, bool parallel = true);

/// |M(t) - M(0) - boundary inflow| / |M(0)|.
double mass_drift(const GridState& state, double initial_mass);

struct ShockLocation {
  bool found = false;
  double x = 0.0;
  double strength = 0.0;  // max relative jump |rho_{i+1} - rho_i| / mean
  int interface_index = -1;
  bool multiple = false;  // another separated jump above threshold
  double second_x = 0.0;
};

struct ShockOptions {
  double threshold = 0.1;   // minimum relative jump
  int separation_cells = 6; // distinct shocks must be further apart than this
};

/// Interface with the largest relative density jump, refined to the centroid
/// of the jumps over the neighbouring interfaces.
ShockLocation locate_shock(const GridState& state, const ShockOptions& options = {});

/// Mean |rho_num - rho_exact| dx over cells with centres in `window`,
/// normalised by the window length; the exact density comes from branches.
double l1_density_error(const GridState& state, const exact::SolutionFamily& family,
                        Interval window);

}  // namespace shockfront::fvm
