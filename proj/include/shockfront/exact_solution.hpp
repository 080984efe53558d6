#pragma once

#include <span>
#include <vector>

#include "shockfront/process.hpp"

namespace shockfront::exact {

/// Constants of the ansatz f = a0 + a1 rho + a2 rho t - u (rho + a3).
struct Alphas {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 1.0;
  double a3 = 1.0;
};

enum class AntiderivativeMode {
  automatic,    // closed form when A is a power law, quadrature otherwise
  closed_form,  // power law required
  quadrature,   // always integrate numerically
};

/// Closed-form solution family over a process curve.
///
/// Holds the two antiderivatives that enter the solution:
///   I(rho) = int A^2 (rho + a3) drho        (density relation)
///   J(rho) = int rho (rho + a3) A^2 drho    (conservation-law potential)
/// Power-law curves use the closed forms with no integration constant. The
/// quadrature path anchors at rho_ref, the geometric mean of the curve
/// domain, with the closed-form value there when one exists and 0 otherwise.
class SolutionFamily {
 public:
  SolutionFamily(Alphas alphas, process::ProcessCurve curve,
                 AntiderivativeMode mode = AntiderivativeMode::automatic);

  const Alphas& alphas() const { return alphas_; }
  const process::ProcessCurve& curve() const { return curve_; }
  bool uses_closed_form() const { return closed_form_; }
  double rho_ref() const { return rho_ref_; }

  double I(double rho) const;
  double J(double rho) const;

  /// Closed forms only; DomainError on a non power-law curve.
  double I_closed(double rho) const;
  double J_closed(double rho) const;
  /// Quadrature only, from the anchor rho_ref.
  double I_quadrature(double rho) const;
  double J_quadrature(double rho) const;

 private:
  Alphas alphas_;
  process::ProcessCurve curve_;
  bool closed_form_ = false;
  double rho_ref_ = 1.0;
  double I_ref_ = 0.0;
  double J_ref_ = 0.0;
};

/// x = g(rho, t): the density relation solved for x.
double g(const SolutionFamily& family, double rho, double t);
double g_rho(const SolutionFamily& family, double rho, double t);
double g_t(const SolutionFamily& family, double rho, double t);

/// u = (a2 rho t + a1 rho + a0) / (rho + a3). Valid for a2 = 0 as well.
double velocity_U(const SolutionFamily& family, double rho, double t);
double velocity_U_rho(const SolutionFamily& family, double rho, double t);
double velocity_U_t(const SolutionFamily& family, double rho, double t);

/// Ansatz function f(u, rho, t); zero on the solution.
double ansatz_f(const Alphas& a, double u, double rho, double t);

/// Residuals of rho_t + (rho u)_x = 0 and u_t + u u_x + p'(rho)/rho rho_x = 0
/// on the branch through (rho, t), with rho_x = 1/g_rho, rho_t = -g_t/g_rho
/// and u = U(rho, t). Meaningless on the caustic, where g_rho = 0.
struct EulerResidual {
  double mass = 0.0;
  double momentum = 0.0;
};
EulerResidual euler_residual(const SolutionFamily& family, double rho, double t);

struct BranchSet {
  double t = 0.0;
  double x = 0.0;
  std::vector<double> roots;        // ascending
  std::vector<bool> near_caustic;   // |g_rho| small relative to the local scale
  bool edge_warning = false;        // a root sits at a window end
};

struct BranchOptions {
  int grid_points = 2048;
  double merge_tol = 1e-9;
  double caustic_threshold = 1e-6;
};

/// All rho in the window with g(rho, t) = x. Sign changes on a log (or linear)
/// scan are bracketed, refined once near folds, bisected and polished with
/// Newton steps.
BranchSet branches(const SolutionFamily& family, double t, double x, Interval rho_window,
                   const BranchOptions& options = {});

struct BranchQuery {
  double t = 0.0;
  double x = 0.0;
};

/// Many queries at once (OpenMP over queries).
std::vector<BranchSet> branches_batch(const SolutionFamily& family,
                                      std::span<const BranchQuery> queries, Interval rho_window,
                                      const BranchOptions& options = {});

/// Serial reference for branches_batch.
std::vector<BranchSet> branches_batch_serial(const SolutionFamily& family,
                                             std::span<const BranchQuery> queries,
                                             Interval rho_window, const BranchOptions& options = {});

struct ProfilePoint {
  double x = 0.0;
  double rho = 0.0;
  double u = 0.0;
};

/// Parametric section (g(rho, t), rho, U(rho, t)) along rho; shows the
/// multivalued graph without root solving.
std::vector<ProfilePoint> profile_section(const SolutionFamily& family, double t,
                                          std::span<const double> rho_grid);

/// n points, log-spaced when the window spans more than a decade.
std::vector<double> make_rho_grid(Interval window, int n);

}  // namespace shockfront::exact
