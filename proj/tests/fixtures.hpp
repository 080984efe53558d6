#pragma once

#include <cmath>

#include "shockfront/exact_solution.hpp"
#include "shockfront/process.hpp"
#include "shockfront/thermo.hpp"

namespace fixture {

// n = 3, R = 0.6, s0 = 0 gives A0 = 1 and A(rho) = rho^(-2/3).
inline shockfront::process::ProcessCurve reference_curve() {
  return shockfront::process::adiabatic_process(shockfront::thermo::ideal_gas_model(3.0, 0.6),
                                                0.0);
}

inline shockfront::exact::SolutionFamily reference_family(
    shockfront::exact::AntiderivativeMode mode = shockfront::exact::AntiderivativeMode::automatic) {
  return shockfront::exact::SolutionFamily({0.0, 0.0, 1.0, 1.0}, reference_curve(), mode);
}

inline double t_star() { return std::pow(2.0, 2.0 / 3.0) * 2.25; }

/// Isothermal van der Waals closure below the critical temperature:
/// p = R T rho / (1 - b rho) - a rho^2 with a = 3, b = 1/3, R = 1, T = 2.
struct VdwIsotherm {
  double a = 3.0, b = 1.0 / 3.0, R = 1.0, T = 2.0;
  double p(double r) const { return R * T * r / (1 - b * r) - a * r * r; }
  double dp(double r) const { return R * T / ((1 - b * r) * (1 - b * r)) - 2 * a * r; }
  double d2p(double r) const { return 2 * R * T * b / std::pow(1 - b * r, 3) - 2 * a; }
};

inline shockfront::process::ProcessCurve vdw_isotherm_curve(const VdwIsotherm& v = {}) {
  return shockfront::process::closure_process(
      "vdw-isotherm", {0.05, 2.9}, [v](double r) { return v.p(r); },
      [v](double r) { return v.dp(r); }, [v](double r) { return v.d2p(r); });
}

}  // namespace fixture
