#include "shockfront/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "shockfront/error.hpp"

namespace shockfront::thermo {

PotentialModel::PotentialModel(std::string name, double R, Evaluator evaluator,
                               bool has_mixed_partial, double v_min)
    : name_(std::move(name)),
      R_(R),
      evaluator_(std::move(evaluator)),
      has_mixed_(has_mixed_partial),
      v_min_(v_min) {
  if (!(R > 0.0)) throw DomainError("gas constant R must be positive");
  if (!evaluator_) throw DomainError("potential model needs an evaluator");
  if (!(v_min >= 0.0)) throw DomainError("v_min must be non-negative");
}

PotentialModel PotentialModel::as_custom() const {
  PotentialModel copy = *this;
  copy.ideal_.reset();
  copy.name_ = name_ + "(custom)";
  return copy;
}

bool PotentialModel::in_domain(double v, double T) const {
  return v > v_min_ && T > 0.0 && std::isfinite(v) && std::isfinite(T);
}

PotentialPartials PotentialModel::partials(double v, double T) const {
  if (!in_domain(v, T)) {
    std::ostringstream msg;
    msg << "state (v=" << v << ", T=" << T << ") outside the domain of model '" << name_
        << "' (v > " << v_min_ << ", T > 0)";
    throw DomainError(msg.str());
  }
  PotentialPartials d = evaluator_(v, T);
  if (!has_mixed_) d.phi_vT = std::numeric_limits<double>::quiet_NaN();
  return d;
}

StatePoint eval_state(const PotentialModel& model, double v, double T) {
  const PotentialPartials d = model.partials(v, T);
  const double R = model.R();
  return StatePoint{v, T, R * T * d.phi_v, R * T * T * d.phi_T, R * (d.phi + T * d.phi_T)};
}

KappaSignature kappa_at(const PotentialModel& model, double v, double T) {
  const PotentialPartials d = model.partials(v, T);
  const double R = model.R();
  KappaSignature k;
  k.coeff_TT = -R * (d.phi_TT + 2.0 * d.phi_T / T);
  k.coeff_vv = R * d.phi_vv;
  k.applicable = k.coeff_TT < 0.0 && k.coeff_vv < 0.0;
  return k;
}

PotentialModel ideal_gas_model(double n, double R) {
  if (!(n >= 3.0)) throw DomainError("ideal gas needs n >= 3 degrees of freedom");
  const double half_n = 0.5 * n;
  PotentialModel model(
      "ideal", R,
      [half_n](double v, double T) {
        PotentialPartials d;
        d.phi = std::log(v) + half_n * std::log(T) - half_n;
        d.phi_v = 1.0 / v;
        d.phi_T = half_n / T;
        d.phi_vv = -1.0 / (v * v);
        d.phi_TT = -half_n / (T * T);
        d.phi_vT = 0.0;
        return d;
      },
      true);
  model.ideal_ = IdealGasParams{n, R};
  return model;
}

PotentialModel van_der_waals_model(double a, double b, double n, double R) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("van der Waals a, b must be non-negative");
  if (!(n > 0.0)) throw DomainError("van der Waals n must be positive");
  const double half_n = 0.5 * n;
  return PotentialModel(
      "vdw", R,
      [a, b, half_n, R](double v, double T) {
        const double w = v - b;
        const double c = a / R;
        PotentialPartials d;
        d.phi = std::log(w) + c / (T * v) + half_n * std::log(T);
        d.phi_v = 1.0 / w - c / (T * v * v);
        d.phi_T = -c / (T * T * v) + half_n / T;
        d.phi_vv = -1.0 / (w * w) + 2.0 * c / (T * v * v * v);
        d.phi_TT = 2.0 * c / (T * T * T * v) - half_n / (T * T);
        d.phi_vT = c / (T * T * v * v);
        return d;
      },
      true, b);
}

PotentialModel custom_model(std::string name, double R, PotentialModel::Evaluator evaluator,
                            bool has_mixed_partial, double v_min) {
  return PotentialModel(std::move(name), R, std::move(evaluator), has_mixed_partial, v_min);
}

namespace {

// Fourth-order central differences.
double d1(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double d2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

double scaled_mismatch(double analytic, double numeric, double scale) {
  const double a = analytic * scale;
  const double b = numeric * scale;
  return std::abs(a - b) / std::max(std::abs(a), 1.0);
}

}  // namespace

double partials_fd_discrepancy(const PotentialModel& model, double v, double T) {
  const PotentialPartials d = model.partials(v, T);
  const double hv = 1e-3 * (v - model.v_min());
  const double hT = 1e-3 * T;
  auto phi_of_v = [&](double vv) { return model.partials(vv, T).phi; };
  auto phi_of_T = [&](double TT) { return model.partials(v, TT).phi; };

  const double sv = v - model.v_min();
  double worst = 0.0;
  worst = std::max(worst, scaled_mismatch(d.phi_v, d1(phi_of_v, v, hv), sv));
  worst = std::max(worst, scaled_mismatch(d.phi_T, d1(phi_of_T, T, hT), T));
  worst = std::max(worst, scaled_mismatch(d.phi_vv, d2(phi_of_v, v, hv), sv * sv));
  worst = std::max(worst, scaled_mismatch(d.phi_TT, d2(phi_of_T, T, hT), T * T));
  if (model.has_mixed_partial()) {
    // d/dT of the finite-difference phi_v.
    auto phi_v_of_T = [&](double TT) {
      return d1([&](double vv) { return model.partials(vv, TT).phi; }, v, hv);
    };
    worst = std::max(worst, scaled_mismatch(d.phi_vT, d1(phi_v_of_T, T, hT), sv * T));
  }
  return worst;
}

}  // namespace shockfront::thermo
