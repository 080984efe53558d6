#pragma once

#include <span>
#include <string>
#include <vector>

#include "shockfront/exact_solution.hpp"

namespace shockfront::singularity {

enum class Sign { plus = 1, minus = -1 };

inline double to_double(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
const char* to_string(Sign s);

struct CausticSample {
  double rho = 0.0;
  double t = 0.0;
  double x = 0.0;
};

struct CausticCurve {
  Sign branch = Sign::plus;
  std::vector<CausticSample> samples;
  /// Set when alpha3 = 0: the fold set is then {rho_c} x (all t) and the
  /// samples run over `fallback_t_range` at the fold densities.
  bool numeric_fallback = false;
};

/// Caustic time t(rho) = (+-A (rho + a3)^2 - a1 a3 + a0) / (a3 a2).
double caustic_time(const exact::SolutionFamily& family, Sign branch, double rho);
/// dt/drho along the caustic.
double caustic_time_slope(const exact::SolutionFamily& family, Sign branch, double rho);
/// Caustic abscissa x(rho) from the closed form (equals g(rho, t(rho))).
double caustic_x(const exact::SolutionFamily& family, Sign branch, double rho);

CausticCurve caustic(const exact::SolutionFamily& family, Sign branch,
                     std::span<const double> rho_grid, Interval fallback_t_range = {-10.0, 10.0});

/// Densities where the caustic branch passes through time t, ascending.
std::vector<double> caustic_crossings(const exact::SolutionFamily& family, Sign branch, double t,
                                      Interval rho_window, int scan_points = 1024);

enum class TimeDirection { forward, backward };

struct Cusp {
  bool found = false;
  double rho = 0.0;
  double t = 0.0;
  double x = 0.0;
  std::string note;
};

/// Earliest (forward) or latest (backward) time on the caustic branch:
/// grid scan, golden-section search, then bisection on dt/drho.
Cusp cusp(const exact::SolutionFamily& family, Sign branch, Interval rho_window,
          TimeDirection direction = TimeDirection::forward);

/// Potential of the mass-flux form restricted to the solution surface:
/// H_rho = rho g_rho, H_t = rho (g_t - U).
double potential_H(const exact::SolutionFamily& family, double rho, double t);

struct FrontSample {
  double t = 0.0;
  double x = 0.0;
  double rho_left = 0.0;
  double rho_right = 0.0;
};

struct FrontOptions {
  Sign branch = Sign::plus;
  double relative_tol = 1e-10;  // on |H1 - H2| and |g1 - g2|, relative to |H*|, |x*|
  double seed_fraction = 1e-3;  // delta = seed_fraction * rho*
  int max_newton = 80;
  int max_bisections = 40;
  Interval rho_window{0.0, 0.0};  // empty: curve domain
};

struct FrontCurve {
  Cusp birth;
  std::vector<FrontSample> samples;
  std::vector<double> collapsed_times;  // requested times at the cusp (rho1 = rho2)
  double tol_H = 0.0;
  double tol_g = 0.0;
  double max_residual_H = 0.0;
  double max_residual_g = 0.0;
  /// rho_left strictly decreasing and rho_right strictly increasing in t.
  bool monotone_strengthening = true;
};

/// Solves H(rho1, t) = H(rho2, t), g(rho1, t) = g(rho2, t) with rho1 < rho* < rho2
/// for `steps` times spread over t_range, by damped Newton with continuation
/// from the cusp. Newton runs in (midpoint, half-width^2) with scaled
/// residuals so the trivial solution rho1 = rho2 is not an attractor.
FrontCurve shock_front(const exact::SolutionFamily& family, Interval t_range, int steps,
                       const FrontOptions& options = {});

/// Oriented integral of Theta restricted to the solution over the loop made
/// of the profile between rho1 and rho2 at time t and the straight cut back.
/// Computed by quadrature of rho g_rho, independently of H.
double cut_loop_integral(const exact::SolutionFamily& family, double rho1, double rho2, double t);

}  // namespace shockfront::singularity
