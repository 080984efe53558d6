#include <gtest/gtest.h>

#include <cmath>

#include "shockfront/error.hpp"
#include "shockfront/thermo.hpp"

using namespace shockfront;
using namespace shockfront::thermo;

TEST(Thermo, IdealGasStateAtUnitPoint) {
  const auto model = ideal_gas_model(3.0, 8.31);
  const auto s = eval_state(model, 1.0, 1.0);
  EXPECT_NEAR(s.p, 8.31, 1e-14);
  EXPECT_NEAR(s.e, 12.465, 1e-13);
  EXPECT_NEAR(s.s, 0.0, 1e-14);
}

TEST(Thermo, IdealGasFiveDegrees) {
  const auto model = ideal_gas_model(5.0, 1.0);
  const auto s = eval_state(model, 2.0, 3.0);
  EXPECT_NEAR(s.p, 1.5, 1e-14);
  EXPECT_NEAR(s.e, 7.5, 1e-14);
  EXPECT_NEAR(s.s, std::log(std::pow(3.0, 2.5) * 2.0), 1e-14);
}

TEST(Thermo, EntropyAtEulerSquared) {
  const auto model = ideal_gas_model(3.0, 1.0);
  EXPECT_NEAR(eval_state(model, 1.0, std::exp(2.0)).s, 3.0, 1e-14);
}

TEST(Thermo, ZeroPotentialGivesZeroState) {
  const auto model = custom_model(
      "zero", 1.0, [](double, double) { return PotentialPartials{}; }, true);
  const auto s = eval_state(model, 0.7, 1.3);
  EXPECT_EQ(s.p, 0.0);
  EXPECT_EQ(s.e, 0.0);
  EXPECT_EQ(s.s, 0.0);
}

TEST(Thermo, IdealGasKappaIsNegative) {
  for (double n : {3.0, 5.0}) {
    const auto model = ideal_gas_model(n, 1.3);
    for (double v : {0.01, 0.5, 20.0}) {
      for (double T : {0.02, 1.0, 80.0}) {
        const auto k = kappa_at(model, v, T);
        EXPECT_NEAR(k.coeff_TT, -1.3 * n / (2 * T * T), 1e-12 * std::abs(k.coeff_TT));
        EXPECT_NEAR(k.coeff_vv, -1.3 / (v * v), 1e-12 * std::abs(k.coeff_vv));
        EXPECT_TRUE(k.applicable);
      }
    }
  }
}

TEST(Thermo, TemperatureFreePotentialIsDegenerate) {
  const auto model = custom_model(
      "lnv", 1.0,
      [](double v, double) {
        PotentialPartials d;
        d.phi = std::log(v);
        d.phi_v = 1 / v;
        d.phi_vv = -1 / (v * v);
        return d;
      },
      true);
  const auto k = kappa_at(model, 2.0, 3.0);
  EXPECT_EQ(k.coeff_TT, 0.0);
  EXPECT_FALSE(k.applicable);
}

TEST(Thermo, DomainAndParameterErrors) {
  const auto model = ideal_gas_model(3.0, 1.0);
  EXPECT_THROW(eval_state(model, 0.0, 1.0), DomainError);
  EXPECT_THROW(eval_state(model, 1.0, -1.0), DomainError);
  EXPECT_THROW(kappa_at(model, -1.0, 1.0), DomainError);
  EXPECT_THROW(ideal_gas_model(2.0, 1.0), DomainError);
  EXPECT_THROW(ideal_gas_model(3.0, 0.0), DomainError);
  EXPECT_THROW(eval_state(van_der_waals_model(1.0, 0.5, 3.0, 1.0), 0.4, 1.0), DomainError);
}

TEST(Thermo, PartialsMatchFiniteDifferencesOnGrid) {
  const auto ideal3 = ideal_gas_model(3.0, 1.0);
  const auto ideal5 = ideal_gas_model(5.0, 2.0);
  const auto vdw = van_der_waals_model(0.5, 0.005, 3.0, 1.0);
  for (const auto* model : {&ideal3, &ideal5, &vdw}) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double v = 1e-2 * std::pow(1e4, i / 19.0);
      for (int j = 0; j < 20; ++j) {
        const double T = 1e-2 * std::pow(1e4, j / 19.0);
        worst = std::max(worst, partials_fd_discrepancy(*model, v, T));
      }
    }
    EXPECT_LT(worst, 1e-6) << model->name();
  }
}

// Applicability against independent finite differences of eval_state:
// p_rho at fixed T and e_T at fixed v.
TEST(Thermo, ApplicabilityMatchesFiniteDifferenceSigns) {
  const auto vdw = van_der_waals_model(3.0, 1.0 / 3.0, 3.0, 1.0);
  int checked = 0, non_applicable = 0;
  for (int i = 0; i < 40; ++i) {
    const double v = 0.4 + 0.1 * i;
    for (double T : {1.5, 2.0, 2.5, 3.0, 4.0}) {
      const double rho = 1 / v;
      const double hr = 1e-5 * rho;
      const double p_rho = (eval_state(vdw, 1 / (rho + hr), T).p -
                            eval_state(vdw, 1 / (rho - hr), T).p) /
                           (2 * hr);
      const double hT = 1e-5 * T;
      const double e_T = (eval_state(vdw, v, T + hT).e - eval_state(vdw, v, T - hT).e) / (2 * hT);
      if (std::abs(p_rho) < 1e-6 || std::abs(e_T) < 1e-6) continue;
      const auto k = kappa_at(vdw, v, T);
      EXPECT_EQ(k.applicable, p_rho > 0 && e_T > 0) << "v=" << v << " T=" << T;
      ++checked;
      if (!k.applicable) ++non_applicable;
    }
  }
  EXPECT_GT(checked, 150);
  EXPECT_GT(non_applicable, 0);
}

TEST(Thermo, CustomCopyDropsIdealShortcut) {
  const auto model = ideal_gas_model(3.0, 1.0);
  ASSERT_TRUE(model.ideal().has_value());
  const auto custom = model.as_custom();
  EXPECT_FALSE(custom.ideal().has_value());
  EXPECT_EQ(eval_state(custom, 1.5, 2.5).p, eval_state(model, 1.5, 2.5).p);
}
