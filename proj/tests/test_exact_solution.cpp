#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "shockfront/error.hpp"
#include "shockfront/exact_solution.hpp"

using namespace shockfront;
using namespace shockfront::exact;

TEST(ExactSolution, GAtReferencePoint) {
  const auto fam = fixture::reference_family();
  EXPECT_NEAR(g(fam, 1.0, 0.0), 1.5, 1e-13);
  EXPECT_NEAR(oracle::g(oracle::reference(), 1.0, 0.0), 1.5, 1e-13);
}

TEST(ExactSolution, GSatisfiesPrintedDensityRelation) {
  const auto fam = fixture::reference_family();
  const auto ref = oracle::reference();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rr(0.05, 20.0), tt(-6.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    const double rho = rr(rng), t = tt(rng);
    const double x = g(fam, rho, t);
    EXPECT_LT(std::abs(oracle::density_relation(ref, x, rho, t)), 1e-10 * std::max(1.0, std::abs(x)));
  }
}

TEST(ExactSolution, GeneralAlphasAgainstPrintedForm) {
  const exact::Alphas a{0.3, -0.7, 1.9, 0.8};
  const SolutionFamily fam(a, fixture::reference_curve());
  oracle::PowerFamily ref;
  ref.a0 = a.a0;
  ref.a1 = a.a1;
  ref.a2 = a.a2;
  ref.a3 = a.a3;
  for (double rho : {0.1, 0.9, 4.0}) {
    for (double t : {-2.0, 0.0, 3.5}) {
      EXPECT_NEAR(g(fam, rho, t), oracle::g(ref, rho, t), 1e-11 * std::max(1.0, std::abs(oracle::g(ref, rho, t))));
      EXPECT_NEAR(velocity_U(fam, rho, t), oracle::U(ref, rho, t), 1e-14);
    }
  }
}

TEST(ExactSolution, ClosedFormAndQuadratureAgree) {
  const auto closed = fixture::reference_family(AntiderivativeMode::closed_form);
  const auto quad = fixture::reference_family(AntiderivativeMode::quadrature);
  EXPECT_NEAR(g(closed, 1.0, 1.0), g(quad, 1.0, 1.0), 1e-10);
  for (double rho : {0.01, 0.3, 1.0, 7.0, 200.0}) {
    EXPECT_NEAR(closed.I(rho), quad.I(rho), 1e-10 * std::max(1.0, std::abs(closed.I(rho))));
    EXPECT_NEAR(closed.J(rho), quad.J(rho), 1e-10 * std::max(1.0, std::abs(closed.J(rho))));
  }
}

TEST(ExactSolution, AntiderivativeDerivativesMatchIntegrands) {
  const auto curve = fixture::vdw_isotherm_curve().with_domain({0.05, 0.4});
  const SolutionFamily fam({0, 0, 1, 1}, curve);
  EXPECT_FALSE(fam.uses_closed_form());
  for (double rho : {0.1, 0.2, 0.35}) {
    const double h = 1e-4 * rho;
    const double dI = oracle::d1([&](double r) { return fam.I(r); }, rho, h);
    const double dJ = oracle::d1([&](double r) { return fam.J(r); }, rho, h);
    const double A2 = curve.A_squared(rho);
    EXPECT_NEAR(dI, A2 * (rho + 1), 1e-8 * A2 * (rho + 1));
    EXPECT_NEAR(dJ, rho * A2 * (rho + 1), 1e-8 * rho * A2 * (rho + 1));
  }
}

TEST(ExactSolution, LogarithmicExponents) {
  // m = -1/2 makes 2m + 1 = 0; m = -1 makes 2m + 2 = 0.
  for (double m : {-0.5, -1.0}) {
    const auto curve = process::closure_process(
        "power", {0.1, 10.0},
        // p' = rho^2 A^2 = rho^(2m+2)
        [m](double r) { return m == -1.0 ? r : std::pow(r, 2 * m + 3) / (2 * m + 3); },
        [m](double r) { return std::pow(r, 2 * m + 2); },
        [m](double r) { return (2 * m + 2) * std::pow(r, 2 * m + 1); }, process::PowerLaw{1.0, m});
    const SolutionFamily closed({0, 0, 1, 1}, curve, AntiderivativeMode::closed_form);
    const SolutionFamily quad({0, 0, 1, 1}, curve, AntiderivativeMode::quadrature);
    for (double rho : {0.2, 1.0, 5.0}) {
      EXPECT_NEAR(closed.I(rho), quad.I(rho), 1e-10) << m;
      EXPECT_NEAR(closed.J(rho), quad.J(rho), 1e-10) << m;
    }
  }
}

TEST(ExactSolution, TimeReversalSymmetry) {
  const SolutionFamily fam({0, 0, 1, 1}, fixture::reference_curve());
  const SolutionFamily flipped({0, 0, -1, 1}, fixture::reference_curve());
  for (double rho : {0.2, 1.0, 3.0}) {
    for (double t : {0.0, 0.7, 2.0}) {
      EXPECT_NEAR(g(flipped, rho, -t), -g(fam, rho, t), 1e-12 * std::max(1.0, std::abs(g(fam, rho, t))));
    }
  }
}

TEST(ExactSolution, VelocityExamples) {
  const auto fam = fixture::reference_family();
  EXPECT_DOUBLE_EQ(velocity_U(fam, 1.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(velocity_U(fam, 3.7, 0.0), 0.0);
  const SolutionFamily stationary({0.8, 0.0, 0.0, 2.0}, fixture::reference_curve());
  EXPECT_DOUBLE_EQ(velocity_U(stationary, 2.0, 5.0), 0.2);
  EXPECT_DOUBLE_EQ(velocity_U(stationary, 2.0, -9.0), 0.2);
  EXPECT_THROW(g(stationary, 1.0, 0.0), SingularityError);
}

TEST(ExactSolution, SingularDensity) {
  const SolutionFamily fam({0, 0, 1, -1}, fixture::reference_curve());
  EXPECT_THROW(g(fam, 1.0, 0.0), SingularityError);
  EXPECT_THROW(velocity_U(fam, 1.0, 0.0), SingularityError);
}

TEST(ExactSolution, AnsatzVanishesOnSolution) {
  const auto fam = fixture::reference_family();
  for (double rho : {0.3, 1.0, 2.5}) {
    for (double t : {-1.0, 0.5, 4.0}) {
      EXPECT_NEAR(ansatz_f(fam.alphas(), velocity_U(fam, rho, t), rho, t), 0.0, 1e-14);
    }
  }
}

TEST(ExactSolution, DerivativesMatchFiniteDifferences) {
  const auto fam = fixture::reference_family();
  for (double rho : {0.3, 1.0, 2.5}) {
    for (double t : {-1.0, 0.5, 4.0}) {
      const double h = 1e-4 * rho;
      EXPECT_NEAR(g_rho(fam, rho, t), oracle::d1([&](double r) { return g(fam, r, t); }, rho, h),
                  1e-8 * std::max(1.0, std::abs(g_rho(fam, rho, t))));
      EXPECT_NEAR(g_t(fam, rho, t), oracle::d1([&](double s) { return g(fam, rho, s); }, t, 1e-4),
                  1e-8);
      EXPECT_NEAR(velocity_U_rho(fam, rho, t),
                  oracle::d1([&](double r) { return velocity_U(fam, r, t); }, rho, h), 1e-9);
      EXPECT_NEAR(velocity_U_t(fam, rho, t),
                  oracle::d1([&](double s) { return velocity_U(fam, rho, s); }, t, 1e-4), 1e-9);
    }
  }
}

TEST(ExactSolution, EulerResidualOnBranches) {
  const auto fam = fixture::reference_family();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rr(0.2, 5.0), tt(-5.0, 5.0);
  int used = 0;
  while (used < 100) {
    const double rho = rr(rng), t = tt(rng);
    if (std::abs(g_rho(fam, rho, t)) <= 1e-3) continue;
    const auto r = euler_residual(fam, rho, t);
    EXPECT_LT(std::abs(r.mass), 1e-7);
    EXPECT_LT(std::abs(r.momentum), 1e-7);
    ++used;
  }
}

TEST(ExactSolution, SingleRootBeforeCausticTime) {
  const auto fam = fixture::reference_family();
  const Interval win = fam.curve().domain();
  const double t = 0.5 * fixture::t_star();
  // Oracle: g_rho < 0 on a dense grid means g is monotone in rho.
  for (int i = 0; i <= 2000; ++i) {
    const double rho = win.lo * std::pow(win.hi / win.lo, i / 2000.0);
    ASSERT_LT(g_rho(fam, rho, t), 0.0);
  }
  for (int i = 0; i <= 100; ++i) {
    const double x = -100 + 125.0 * i / 100.0;
    EXPECT_EQ(branches(fam, t, x, win).roots.size(), 1u) << x;
  }
}

TEST(ExactSolution, ThreeRootsBetweenCausticArcs) {
  const auto fam = fixture::reference_family();
  const double t = 4.0;
  // Caustic arcs at t = 4: rho^(-2/3) (rho + 1)^2 = 4, i.e. rho = 1 and the
  // smaller root; x between the two arc abscissas.
  const double x_hi = g(fam, 1.0, t);
  const auto probe = branches(fam, t, x_hi - 1e-3, fam.curve().domain());
  EXPECT_EQ(probe.roots.size(), 3u);
  for (double r : probe.roots) EXPECT_NEAR(g(fam, r, t), x_hi - 1e-3, 1e-9 * std::abs(x_hi));
  EXPECT_TRUE(std::is_sorted(probe.roots.begin(), probe.roots.end()));
}

TEST(ExactSolution, NoRootsOutsideRange) {
  const auto fam = fixture::reference_family();
  EXPECT_TRUE(branches(fam, 0.0, 1e6, fam.curve().domain()).roots.empty());
  EXPECT_TRUE(branches(fam, 0.0, 1.0, {2.0, 1.0}).roots.empty());
}

TEST(ExactSolution, RoundTrip) {
  const auto fam = fixture::reference_family();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lr(std::log(0.01), std::log(100.0)), tt(-5.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    const double rho = std::exp(lr(rng)), t = tt(rng);
    const auto set = branches(fam, t, g(fam, rho, t), fam.curve().domain());
    double best = 1e300;
    for (double r : set.roots) best = std::min(best, std::abs(r - rho));
    EXPECT_LT(best, 1e-9 * std::max(1.0, rho)) << rho << " " << t;
  }
}

TEST(ExactSolution, ProfileSections) {
  const auto fam = fixture::reference_family();
  const auto grid = make_rho_grid({0.01, 100.0}, 800);
  EXPECT_TRUE(profile_section(fam, 0.0, std::span<const double>()).empty());

  auto count_slope_changes = [&](double t) {
    const auto prof = profile_section(fam, t, grid);
    int changes = 0;
    for (std::size_t i = 2; i < prof.size(); ++i) {
      const double a = prof[i - 1].x - prof[i - 2].x;
      const double b = prof[i].x - prof[i - 1].x;
      if ((a < 0) != (b < 0)) ++changes;
    }
    return changes;
  };
  EXPECT_EQ(count_slope_changes(0.0), 0);
  EXPECT_EQ(count_slope_changes(1.05 * fixture::t_star()), 2);
}

TEST(ExactSolution, BatchMatchesSerial) {
  const auto fam = fixture::reference_family();
  std::vector<BranchQuery> q;
  for (int i = 0; i < 64; ++i) q.push_back({4.2, 2.0 + 0.1 * i});
  const auto a = branches_batch(fam, q, fam.curve().domain());
  const auto b = branches_batch_serial(fam, q, fam.curve().domain());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].roots, b[i].roots);
    EXPECT_EQ(a[i].near_caustic, b[i].near_caustic);
  }
}
