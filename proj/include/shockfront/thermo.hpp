#pragma once

#include <functional>
#include <optional>
#include <string>

namespace shockfront::thermo {

/// Massieu-Planck potential phi(v, T) and its partials at one point.
/// `phi_vT` is NaN when the model does not supply the mixed partial.
struct PotentialPartials {
  double phi = 0.0;
  double phi_v = 0.0;
  double phi_T = 0.0;
  double phi_vv = 0.0;
  double phi_TT = 0.0;
  double phi_vT = 0.0;
};

struct IdealGasParams {
  double n = 3.0;
  double R = 1.0;
};

/// A thermodynamic state given by a Massieu-Planck potential.
///
/// The model is immutable after construction. All partials are closed-form;
/// finite differences only appear in `partials_fd_discrepancy`, which is a
/// consistency check.
class PotentialModel {
 public:
  using Evaluator = std::function<PotentialPartials(double v, double T)>;

  /// `v_min` is the lower end of the specific-volume domain (exclusive),
  /// e.g. the co-volume b of a van der Waals gas.
  PotentialModel(std::string name, double R, Evaluator evaluator, bool has_mixed_partial,
                 double v_min = 0.0);

  const std::string& name() const { return name_; }
  double R() const { return R_; }
  double v_min() const { return v_min_; }
  bool has_mixed_partial() const { return has_mixed_; }

  /// Closed-form shortcut parameters, present only for the built-in ideal gas.
  const std::optional<IdealGasParams>& ideal() const { return ideal_; }

  /// The same potential with every closed-form shortcut removed, so that
  /// downstream code takes the generic numeric path.
  PotentialModel as_custom() const;

  /// Throws DomainError outside v > v_min, T > 0.
  PotentialPartials partials(double v, double T) const;

  bool in_domain(double v, double T) const;

 private:
  friend PotentialModel ideal_gas_model(double n, double R);

  std::string name_;
  double R_;
  Evaluator evaluator_;
  bool has_mixed_;
  double v_min_;
  std::optional<IdealGasParams> ideal_;
};

struct StatePoint {
  double v = 0.0;
  double T = 0.0;
  double p = 0.0;
  double e = 0.0;
  double s = 0.0;
};

/// Restriction of the quadratic form kappa to the state manifold, as
/// coeff_TT dT.dT + coeff_vv dv.dv.
struct KappaSignature {
  double coeff_TT = 0.0;
  double coeff_vv = 0.0;
  bool applicable = false;
};

/// p = R T phi_v, e = R T^2 phi_T, s = R (phi + T phi_T).
StatePoint eval_state(const PotentialModel& model, double v, double T);

KappaSignature kappa_at(const PotentialModel& model, double v, double T);

/// Ideal gas with n degrees of freedom: p = RT/v, e = nRT/2, s = R ln(T^{n/2} v).
/// The stored potential is ln(v T^{n/2}) - n/2 so that the entropy formula
/// reproduces s without an additive constant.
PotentialModel ideal_gas_model(double n, double R);

/// van der Waals gas p = RT/(v-b) - a/v^2, e = nRT/2 - a/v.
/// phi = ln(v-b) + a/(R T v) + (n/2) ln T, defined for v > b.
PotentialModel van_der_waals_model(double a, double b, double n, double R);

/// Potential built from a closure; the mixed partial is optional.
PotentialModel custom_model(std::string name, double R, PotentialModel::Evaluator evaluator,
                            bool has_mixed_partial, double v_min = 0.0);

/// Largest relative mismatch between the analytic partials and central
/// finite differences of phi at (v, T).
double partials_fd_discrepancy(const PotentialModel& model, double v, double T);

}  // namespace shockfront::thermo
