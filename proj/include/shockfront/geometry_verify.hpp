#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shockfront/exact_solution.hpp"
#include "shockfront/process.hpp"
#include "shockfront/singularity.hpp"

namespace shockfront::geometry {

// Coordinates on the zero-jet space are ordered (t, x, u, rho) everywhere:
// 2-form coefficients, vector components and the matrix W.
enum Coord : int { kT = 0, kX = 1, kU = 2, kRho = 3 };

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

struct JetPoint {
  double t = 0.0;
  double x = 0.0;
  double u = 0.0;
  double rho = 0.0;
};

/// Constant-coefficient 2-form at a point, stored as the antisymmetric
/// matrix M with omega(a, b) = a^T M b.
class TwoForm {
 public:
  TwoForm() : m_(Mat4::Zero()) {}

  /// Adds c * dx_i ^ dx_j.
  void add(int i, int j, double c) {
    m_(i, j) += c;
    m_(j, i) -= c;
  }

  double coeff(int i, int j) const { return m_(i, j); }
  const Mat4& matrix() const { return m_; }
  double operator()(const Vec4& a, const Vec4& b) const { return a.dot(m_ * b); }

 private:
  Mat4 m_;
};

/// alpha ^ beta = P(alpha, beta) dt ^ dx ^ du ^ drho.
double pairing(const TwoForm& alpha, const TwoForm& beta);

struct FormPair {
  TwoForm omega1;
  TwoForm omega2;
};

/// omega1 = rho dt^du + u dt^drho - dx^drho,
/// omega2 = u dt^du + p'/rho dt^drho - dx^du.
FormPair build_system_forms(const process::ProcessCurve& curve, const JetPoint& point);

/// Normalized pair: omega1 scaled by A(rho), omega2 with p'/rho = rho A^2.
/// DomainError at non-hyperbolic points.
FormPair build_normalized_forms(const process::ProcessCurve& curve, const JetPoint& point);

/// || P(omega_i, omega_j) ||.
std::array<std::array<double, 2>, 2> pairing_matrix(const FormPair& forms);

/// Closed-form matrix of A_omega (X -> W X), prefactor 1/(rho A).
Mat4 operator_W(const process::ProcessCurve& curve, const JetPoint& point);

/// A_omega from its definition X _| omega2 = A_omega(X) _| omega1, i.e.
/// M1^T W = M2^T column by column.
Mat4 operator_W_from_contraction(const FormPair& normalized);

struct CharFields {
  Vec4 X_plus, X_minus, Y_plus, Y_minus;
};

/// X+- = +-A d_u + d_rho, Y+- = (u -+ rho A)^{-1} d_t + d_x.
CharFields char_fields(const process::ProcessCurve& curve, const JetPoint& point);

/// Distance of v from span{a, b}, relative to max(|a|, |b|).
double distance_from_span(const Vec4& a, const Vec4& b, const Vec4& v);

/// Numerical rank of the vectors (columns), singular values relative to the largest.
int numerical_rank(const Eigen::MatrixXd& columns, double tol);

struct IntegrabilityVerdict {
  bool plus_integrable = true;
  bool minus_integrable = true;
  double max_plus_distance = 0.0;   // largest distance of [X+, Y+] from C+
  double max_minus_distance = 0.0;
  int points_used = 0;
};

/// [X+-, Y+-] from the analytic coefficient Jacobians, tested for membership
/// in span{X+-, Y+-} at every point.
IntegrabilityVerdict lie_bracket_integrability(const process::ProcessCurve& curve,
                                               std::span<const JetPoint> points, double tol = 1e-8);

struct AnsatzPartials {
  double f_u = 0, f_t = 0, f_rho = 0;
  double f_ut = 0, f_tt = 0, f_rhorho = 0, f_uu = 0, f_rhot = 0;
};

/// Partials of f = a0 + a1 rho + a2 rho t - u (rho + a3).
AnsatzPartials ansatz_partials(const exact::Alphas& a, double t, double u, double rho);

/// Left-hand side of the integrability PDE for x-independent F = f(t, u, rho).
double ansatz_pde_residual(double A, double rho, const AnsatzPartials& d);

struct AnsatzPoint {
  double t = 0.0;
  double u = 0.0;
  double rho = 0.0;
};

using AnsatzPartialsFn = std::function<AnsatzPartials(double t, double u, double rho)>;

/// Max |PDE residual| of the family's ansatz over the points.
double check_ansatz_pde(const exact::SolutionFamily& family, std::span<const AnsatzPoint> points);
/// Same, with caller-supplied partials (negative controls).
double check_ansatz_pde(const exact::SolutionFamily& family, std::span<const AnsatzPoint> points,
                        const AnsatzPartialsFn& partials);

/// A 2-surface parametrized by (rho, t) as (t, g, U, rho), with analytic tangents.
struct SurfaceJet {
  double g = 0, g_rho = 0, g_t = 0;
  double U = 0, U_rho = 0, U_t = 0;
};
using SurfaceMap = std::function<SurfaceJet(double rho, double t)>;

SurfaceMap solution_surface(const exact::SolutionFamily& family);

struct SurfacePoint {
  double rho = 0.0;
  double t = 0.0;
};

/// max |omega_i(T_rho, T_t)| for both normalized forms; points with
/// |g_rho| < caustic_skip are skipped.
double check_solution_annihilates_forms(const exact::SolutionFamily& family,
                                        std::span<const SurfacePoint> points,
                                        double caustic_skip = 1e-6);
double check_surface_annihilates_forms(const process::ProcessCurve& curve, const SurfaceMap& surface,
                                       std::span<const SurfacePoint> points,
                                       double caustic_skip = 1e-6);

/// max(|omega1(a, b)|, |omega2(a, b)|).
double pullback_residual(const FormPair& forms, const Vec4& a, const Vec4& b);

/// Field of C+- tangent to {F = 0}, given grad F = (F_t, F_x, F_u, F_rho).
/// The u-component carries the factor A: -A (F_t + u F_x -+ rho A F_x).
Vec4 V_field(singularity::Sign sign, double A, const JetPoint& point, const Vec4& grad_F);

/// Restriction of V+- to N1 = {f = 0} in coordinates (t, x, rho).
Eigen::Vector3d Z_field(const exact::SolutionFamily& family, singularity::Sign sign, double rho,
                        double t);

/// Uniform samples t, x in [-5, 5], u in [-3, 3], rho in [0.2, 5] (clipped to
/// the curve domain) from a seeded mt19937_64.
std::vector<JetPoint> sample_jet_points(std::uint64_t seed, int count, Interval rho_range = {0.2, 5.0});

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int samples = 100;
};

/// The full identity table: forms, pairing, W, eigen-distributions,
/// integrability, ansatz PDE, pullbacks, V/Z fields, Euler residual and the
/// potential gradient identities.
std::vector<CheckResult> run_verification(const exact::SolutionFamily& family,
                                          const VerifyOptions& options = {});

}  // namespace shockfront::geometry
