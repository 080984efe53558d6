#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "shockfront/error.hpp"
#include "shockfront/process.hpp"
#include "shockfront/thermo.hpp"

using namespace shockfront;
using namespace shockfront::process;

TEST(Process, IdealAdiabatClosedForm) {
  const auto curve = adiabatic_process(thermo::ideal_gas_model(3.0, 1.0), 0.0);
  for (double rho : {0.01, 0.5, 1.0, 2.0, 300.0}) {
    EXPECT_NEAR(curve.T(rho), std::pow(rho, 2.0 / 3.0), 1e-13 * curve.T(rho));
    EXPECT_NEAR(curve.p(rho), std::pow(rho, 5.0 / 3.0), 1e-13 * curve.p(rho));
    EXPECT_NEAR(curve.A(rho), std::sqrt(5.0 / 3.0) * std::pow(rho, -2.0 / 3.0),
                1e-13 * curve.A(rho));
  }
  ASSERT_TRUE(curve.power_law().has_value());
  EXPECT_DOUBLE_EQ(curve.power_law()->m, -2.0 / 3.0);
}

TEST(Process, PowerLawParametersAtTenPoints) {
  const double n = 5.0, R = 1.7, s0 = 0.3;
  const auto curve = adiabatic_process(thermo::ideal_gas_model(n, R), s0);
  const double A0 = std::sqrt(R * (1 + 2 / n) * std::exp(2 * s0 / (R * n)));
  const double m = 1 / n - 1;
  for (int i = 0; i < 10; ++i) {
    const double rho = 0.01 * std::pow(1e4, i / 9.0);
    EXPECT_NEAR(curve.A(rho), A0 * std::pow(rho, m), 1e-12 * curve.A(rho));
    EXPECT_NEAR(curve.A_squared(rho) * rho * rho, curve.dp(rho), 1e-10 * curve.dp(rho));
  }
}

TEST(Process, ReferenceCurveHasUnitA0) {
  const auto curve = fixture::reference_curve();
  EXPECT_NEAR(curve.power_law()->A0, 1.0, 1e-15);
  EXPECT_NEAR(curve.A(8.0), 0.25, 1e-15);
}

TEST(Process, NumericPathMatchesClosedForm) {
  const auto model = thermo::ideal_gas_model(3.0, 1.0);
  const auto closed = adiabatic_process(model, 0.2);
  const auto numeric = adiabatic_process(model.as_custom(), 0.2);
  EXPECT_FALSE(numeric.power_law().has_value());
  for (double rho : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(numeric.T(rho), closed.T(rho), 1e-10 * closed.T(rho));
    EXPECT_NEAR(numeric.p(rho), closed.p(rho), 1e-10 * closed.p(rho));
    EXPECT_NEAR(numeric.dp(rho), closed.dp(rho), 1e-9 * closed.dp(rho));
    EXPECT_NEAR(numeric.A_prime(rho), closed.A_prime(rho), 1e-6 * std::abs(closed.A_prime(rho)));
  }
}

TEST(Process, CurveMatchesStateEvaluation) {
  const auto model = thermo::van_der_waals_model(0.2, 0.05, 3.0, 1.0);
  const auto curve = adiabatic_process(model, 0.5, {0.1, 10.0});
  for (double rho : {0.1, 0.7, 3.0, 10.0}) {
    const auto st = thermo::eval_state(model, 1 / rho, curve.T(rho));
    EXPECT_NEAR(curve.p(rho), st.p, 1e-12 * std::abs(st.p));
    EXPECT_NEAR(curve.s(rho), 0.5, 1e-10);
  }
}

TEST(Process, ClassifyAtExamples) {
  const auto curve = closure_process(
      "linear", {0.1, 10.0}, [](double r) { return 1.5 * r; }, [](double) { return 3.0; },
      [](double) { return 0.0; });
  const auto rep = classify_at(curve, 2.0);
  EXPECT_DOUBLE_EQ(rep.P_matrix[0][0], 4.0);
  EXPECT_DOUBLE_EQ(rep.P_matrix[1][1], -3.0);
  EXPECT_DOUBLE_EQ(rep.P_matrix[0][1], 0.0);
  EXPECT_DOUBLE_EQ(rep.det, -12.0);
  EXPECT_EQ(rep.classification, Classification::hyperbolic);

  const auto flat = closure_process(
      "flat", {0.1, 10.0}, [](double) { return 1.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; });
  EXPECT_EQ(classify_at(flat, 1.0).classification, Classification::parabolic);
  EXPECT_EQ(classify_at(flat, 1.0).det, 0.0);
  EXPECT_THROW(classify_at(flat, 20.0), DomainError);
}

TEST(Process, IdealAdiabatIsHyperbolicEverywhere) {
  const auto curve = fixture::reference_curve();
  for (int i = 0; i <= 60; ++i) {
    const double rho = 1e-3 * std::pow(1e6, i / 60.0);
    EXPECT_EQ(classify_at(curve, rho).classification, Classification::hyperbolic);
  }
}

TEST(Process, ClassificationAgreesWithKappa) {
  // Isotherm of the van der Waals model: the process derivative p' equals
  // the isothermal p_rho that the applicability test sees.
  const fixture::VdwIsotherm v;
  const auto model = thermo::van_der_waals_model(v.a, v.b, 3.0, v.R);
  const auto curve = fixture::vdw_isotherm_curve(v);
  int elliptic = 0;
  for (int i = 0; i <= 200; ++i) {
    const double rho = 0.05 + (2.9 - 0.05) * i / 200.0;
    const auto rep = classify_at(curve, rho);
    const auto k = thermo::kappa_at(model, 1 / rho, v.T);
    EXPECT_EQ(rep.classification == Classification::hyperbolic, k.applicable) << rho;
    if (rep.classification == Classification::elliptic) ++elliptic;
  }
  EXPECT_GT(elliptic, 0);
}

TEST(Process, CubicPressureIsIntegrable) {
  const auto fit = is_characteristically_integrable(cubic_pressure_process(2.0, 5.0));
  EXPECT_TRUE(fit.integrable);
  EXPECT_NEAR(fit.c0, 2.0, 1e-10);
  EXPECT_NEAR(fit.c1, 5.0, 1e-8);

  const auto pure = is_characteristically_integrable(cubic_pressure_process(1.0, 0.0), 1e-10);
  EXPECT_TRUE(pure.integrable);
  EXPECT_NEAR(pure.c0, 1.0, 1e-12);
  EXPECT_NEAR(pure.c1, 0.0, 1e-9);
}

TEST(Process, IdealAdiabatIsNotIntegrable) {
  EXPECT_FALSE(is_characteristically_integrable(fixture::reference_curve()).integrable);
  EXPECT_FALSE(
      is_characteristically_integrable(adiabatic_process(thermo::ideal_gas_model(5.0, 1.0), 0.0))
          .integrable);
}

TEST(Process, IntegrabilityRejectsNonHyperbolicCurve) {
  EXPECT_THROW(is_characteristically_integrable(fixture::vdw_isotherm_curve()), DomainError);
}

TEST(Process, TableFromCsvReproducesSmoothPressure) {
  const auto path = std::filesystem::temp_directory_path() / "shockfront_table_test.csv";
  {
    std::ofstream f(path);
    f << "# p = rho^2\nrho,p\n";
    for (int i = 0; i <= 400; ++i) {
      const double rho = 0.5 + 2.0 * i / 400.0;
      char line[96];
      std::snprintf(line, sizeof line, "%.17g,%.17g\n", rho, rho * rho);
      f << line;
    }
  }
  const auto curve = table_process_from_csv(path.string());
  std::filesystem::remove(path);
  EXPECT_NEAR(curve.p(1.3), 1.69, 1e-7);
  EXPECT_NEAR(curve.dp(1.3), 2.6, 1e-5);
  EXPECT_EQ(classify_at(curve, 1.3).classification, Classification::hyperbolic);
}

TEST(Process, TableRejectsBadInput) {
  EXPECT_THROW(table_process({1.0, 0.5, 2.0, 3.0}, {1.0, 2.0, 3.0, 4.0}), DomainError);
  EXPECT_THROW(table_process_from_csv("/nonexistent/p.csv"), Error);
}
