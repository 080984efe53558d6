#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "shockfront/thermo.hpp"

namespace shockfront {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  bool empty() const { return !(hi > lo); }
  double width() const { return hi - lo; }
};

}  // namespace shockfront

namespace shockfront::process {

/// A(rho) = A0 * rho^m. Enables closed-form antiderivatives downstream.
struct PowerLaw {
  double A0 = 1.0;
  double m = 0.0;
};

/// One-parameter thermodynamic process rho -> (T, p, e, s), closing the
/// Euler system to the barotropic form p = p(rho).
///
/// Pressure and its first two derivatives are always available. T, e and s
/// exist only when the curve was generated from a potential model.
class ProcessCurve {
 public:
  using ScalarFn = std::function<double(double)>;

  struct Functions {
    ScalarFn p;
    ScalarFn dp;
    ScalarFn d2p;
    ScalarFn T;  // optional
    ScalarFn e;  // optional
    ScalarFn s;  // optional
  };

  ProcessCurve(std::string name, Interval rho_domain, Functions fns,
               std::optional<PowerLaw> power_law = std::nullopt);

  const std::string& name() const { return name_; }
  Interval domain() const { return domain_; }
  const std::optional<PowerLaw>& power_law() const { return power_law_; }
  bool has_thermo() const { return static_cast<bool>(fns_.T); }

  double p(double rho) const;
  double dp(double rho) const;
  double d2p(double rho) const;
  double T(double rho) const;
  double e(double rho) const;
  double s(double rho) const;

  /// rho^-1 sqrt(p'(rho)); DomainError where p' <= 0.
  double A(double rho) const;
  double A_prime(double rho) const;
  /// A(rho)^2 = p'(rho) / rho^2, defined wherever p' >= 0.
  double A_squared(double rho) const;

  /// Same curve on another window.
  ProcessCurve with_domain(Interval rho_domain) const;

 private:
  void check(double rho) const;

  std::string name_;
  Interval domain_;
  Functions fns_;
  std::optional<PowerLaw> power_law_;
};

inline constexpr Interval kDefaultRhoDomain{1e-3, 1e3};

/// Adiabatic process s(1/rho, T) = s0.
///
/// The ideal gas takes the closed form T = exp(2 s0/(R n)) rho^{2/n}. Every
/// other model solves for T by bracketed root finding; p' then comes from the
/// chain rule through the potential partials (or 5-point differences with
/// h = 1e-5 rho when phi_vT is not supplied).
ProcessCurve adiabatic_process(const thermo::PotentialModel& model, double s0,
                               Interval rho_domain = kDefaultRhoDomain);

/// Barotropic process from user closures for p, p' and p''.
ProcessCurve closure_process(std::string name, Interval rho_domain, ProcessCurve::ScalarFn p,
                             ProcessCurve::ScalarFn dp, ProcessCurve::ScalarFn d2p,
                             std::optional<PowerLaw> power_law = std::nullopt);

/// p = c0 rho^3 + c1, for which A is the constant sqrt(3 c0).
ProcessCurve cubic_pressure_process(double c0, double c1, Interval rho_domain = kDefaultRhoDomain);

/// Natural cubic spline through tabulated (rho, p) pairs; rho strictly increasing.
ProcessCurve table_process(std::vector<double> rho, std::vector<double> p);

/// Reads a CSV with a header naming columns `rho` and `p`.
ProcessCurve table_process_from_csv(const std::string& path);

enum class Classification { hyperbolic, elliptic, parabolic };

const char* to_string(Classification c);

struct HyperbolicityReport {
  std::array<std::array<double, 2>, 2> P_matrix{};
  double det = 0.0;
  Classification classification = Classification::parabolic;
};

/// Pairing matrix diag(2 rho, -2 p'(rho)/rho) of the two defining 2-forms.
HyperbolicityReport classify_at(const ProcessCurve& curve, double rho);

struct IntegrabilityFit {
  bool integrable = false;
  double c0 = 0.0;
  double c1 = 0.0;
  double max_relative_residual = 0.0;
};

/// Tests p(rho) == c0 rho^3 + c1 on the domain: c0, c1 are fitted at two
/// points and the residual is checked on a 64-point log grid.
IntegrabilityFit is_characteristically_integrable(const ProcessCurve& curve, double tol = 1e-8);

}  // namespace shockfront::process
