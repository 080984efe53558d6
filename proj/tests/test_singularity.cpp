#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "shockfront/error.hpp"
#include "shockfront/singularity.hpp"

using namespace shockfront;
using namespace shockfront::singularity;

TEST(Caustic, ReferenceTimesAtUnitDensity) {
  const auto fam = fixture::reference_family();
  EXPECT_NEAR(caustic_time(fam, Sign::plus, 1.0), 4.0, 1e-14);
  EXPECT_NEAR(caustic_time(fam, Sign::minus, 1.0), -4.0, 1e-14);
  EXPECT_NEAR(exact::g_rho(fam, 1.0, 4.0), 0.0, 1e-12);
}

TEST(Caustic, SamplesLieOnFoldLocus) {
  const auto fam = fixture::reference_family();
  const auto grid = exact::make_rho_grid({0.01, 100.0}, 300);
  const auto ref = oracle::reference();
  for (Sign s : {Sign::plus, Sign::minus}) {
    const auto curve = caustic(fam, s, grid);
    ASSERT_EQ(curve.samples.size(), grid.size());
    EXPECT_FALSE(curve.numeric_fallback);
    for (const auto& smp : curve.samples) {
      EXPECT_LT(std::abs(exact::g_rho(fam, smp.rho, smp.t)), 1e-8 * std::max(1.0, smp.rho));
      // Finite-difference oracle on the printed g.
      const double fd = oracle::d1([&](double r) { return oracle::g(ref, r, smp.t); }, smp.rho,
                                   1e-4 * smp.rho);
      EXPECT_LT(std::abs(fd), 1e-6 * std::max(1.0, std::abs(smp.t * smp.t)));
      EXPECT_NEAR(smp.x, exact::g(fam, smp.rho, smp.t), 1e-9 * std::max(1.0, std::abs(smp.x)));
      EXPECT_NEAR(smp.t, oracle::caustic_t(ref, smp.rho, to_double(s)), 1e-12 * std::abs(smp.t));
    }
  }
}

TEST(Caustic, MirrorSymmetry) {
  const auto fam = fixture::reference_family();
  for (double rho : {0.1, 0.5, 2.0, 9.0}) {
    EXPECT_DOUBLE_EQ(caustic_time(fam, Sign::plus, rho), -caustic_time(fam, Sign::minus, rho));
  }
}

TEST(Caustic, GeneralAlphas) {
  const exact::SolutionFamily fam({0.4, 0.3, 1.5, 0.7}, fixture::reference_curve());
  const auto grid = exact::make_rho_grid({0.05, 20.0}, 50);
  for (Sign s : {Sign::plus, Sign::minus}) {
    for (const auto& smp : caustic(fam, s, grid).samples) {
      EXPECT_LT(std::abs(exact::g_rho(fam, smp.rho, smp.t)), 1e-8 * std::max(1.0, smp.rho));
      EXPECT_NEAR(smp.x, exact::g(fam, smp.rho, smp.t), 1e-9 * std::max(1.0, std::abs(smp.x)));
    }
  }
}

TEST(Caustic, ZeroAlpha3Fallback) {
  // a3 = 0, a0 = -1: the fold sits where A rho^2 = 1, i.e. rho = 1 for A = rho^(-2/3)... with
  // A rho^2 = rho^(4/3) = |a0|.
  const exact::SolutionFamily fam({-1.0, 0.0, 1.0, 0.0}, fixture::reference_curve());
  const auto grid = exact::make_rho_grid({0.1, 10.0}, 20);
  const auto curve = caustic(fam, Sign::plus, grid, {-2.0, 2.0});
  EXPECT_TRUE(curve.numeric_fallback);
  ASSERT_FALSE(curve.samples.empty());
  for (const auto& smp : curve.samples) {
    EXPECT_NEAR(smp.rho, 1.0, 1e-10);
    EXPECT_LT(std::abs(exact::g_rho(fam, smp.rho, smp.t)), 1e-8);
  }
}

TEST(Cusp, ReferenceFamilyMatchesBrentOracle) {
  const auto fam = fixture::reference_family();
  const auto c = cusp(fam, Sign::plus, fam.curve().domain());
  ASSERT_TRUE(c.found);
  const auto [rho_o, t_o] = oracle::cusp(oracle::reference(), 0.01, 10.0);
  EXPECT_NEAR(c.rho, 0.5, 1e-6);
  EXPECT_NEAR(c.t, fixture::t_star(), 1e-6);
  EXPECT_NEAR(c.rho, rho_o, 1e-6);
  EXPECT_NEAR(c.t, t_o, 1e-9);
  // Stationarity of t(rho) = rho^(-2/3) (rho + 1)^2 by hand: (4 rho - 2) = 0.
  EXPECT_NEAR(caustic_time_slope(fam, Sign::plus, c.rho), 0.0, 1e-8);
  EXPECT_NEAR(c.x, exact::g(fam, 0.5, fixture::t_star()), 1e-9);
}

TEST(Cusp, WindowWithoutMinimum) {
  const auto fam = fixture::reference_family();
  const auto c = cusp(fam, Sign::plus, {1.0, 10.0});
  EXPECT_FALSE(c.found);
  EXPECT_FALSE(c.note.empty());
}

TEST(Cusp, BranchCountAroundCusp) {
  const auto fam = fixture::reference_family();
  const double ts = fixture::t_star();
  const auto win = fam.curve().domain();
  for (int i = 0; i <= 200; ++i) {
    const double x = 4.0 + 6.0 * i / 200.0;
    EXPECT_EQ(exact::branches(fam, 0.95 * ts, x, win).roots.size(), 1u);
  }
  int triple = 0;
  for (int i = 0; i <= 200; ++i) {
    const double x = 4.0 + 6.0 * i / 200.0;
    if (exact::branches(fam, 1.05 * ts, x, win).roots.size() == 3) ++triple;
  }
  EXPECT_GT(triple, 0);
}

TEST(Potential, ReferenceValue) {
  const auto fam = fixture::reference_family();
  EXPECT_NEAR(potential_H(fam, 1.0, 0.0), -2.1, 1e-13);
  EXPECT_NEAR(oracle::H(oracle::reference(), 1.0, 0.0), -2.1, 1e-13);
  EXPECT_NEAR(potential_H(fam, 2.0, 0.0), -fam.J(2.0), 1e-13);
  const auto quad = fixture::reference_family(exact::AntiderivativeMode::quadrature);
  EXPECT_NEAR(potential_H(quad, 1.0, 0.0), -2.1, 1e-10);
}

TEST(Potential, GradientIdentities) {
  const auto fam = fixture::reference_family();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rr(0.2, 5.0), tt(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double rho = rr(rng), t = tt(rng);
    const double Hr = oracle::d1([&](double r) { return potential_H(fam, r, t); }, rho, 1e-3 * rho);
    const double Ht = oracle::d1([&](double s) { return potential_H(fam, rho, s); }, t, 1e-3);
    const double er = rho * exact::g_rho(fam, rho, t);
    const double et = rho * (exact::g_t(fam, rho, t) - exact::velocity_U(fam, rho, t));
    EXPECT_NEAR(Hr, er, 1e-8 * std::max(1.0, std::abs(er)));
    EXPECT_NEAR(Ht, et, 1e-8 * std::max(1.0, std::abs(et)));
  }
}

TEST(Potential, MixedPartialsAgree) {
  const auto fam = fixture::reference_family();
  for (double rho : {0.3, 1.0, 3.0}) {
    for (double t : {-2.0, 1.0, 4.5}) {
      const double h = 1e-3;
      // d/dt (rho g_rho) and d/drho (rho (g_t - U)).
      const double a = oracle::d1([&](double s) { return rho * exact::g_rho(fam, rho, s); }, t, h);
      const double b = oracle::d1(
          [&](double r) { return r * (exact::g_t(fam, r, t) - exact::velocity_U(fam, r, t)); }, rho,
          h * rho);
      EXPECT_NEAR(a, b, 1e-6 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST(Front, MatchesIndependentEqualPotentialOracle) {
  const auto fam = fixture::reference_family();
  const double ts = fixture::t_star();
  const auto front = shock_front(fam, {1.05 * ts, 1.5 * ts}, 4);
  ASSERT_EQ(front.samples.size(), 4u);
  for (const auto& s : front.samples) {
    const auto o = oracle::front(oracle::reference(), s.t, 1e-3, 1e3);
    EXPECT_NEAR(s.rho_left, o.rho1, 1e-7 * o.rho1) << s.t;
    EXPECT_NEAR(s.rho_right, o.rho2, 1e-7 * o.rho2) << s.t;
    EXPECT_NEAR(s.x, o.x, 1e-8 * std::abs(o.x)) << s.t;
  }
}

TEST(Front, ResidualsAndOrdering) {
  const auto fam = fixture::reference_family();
  const double ts = fixture::t_star();
  const auto front = shock_front(fam, {ts, 2 * ts}, 30);
  EXPECT_EQ(front.collapsed_times.size(), 1u);
  EXPECT_EQ(front.samples.size(), 29u);
  EXPECT_LT(front.max_residual_H, front.tol_H);
  EXPECT_LT(front.max_residual_g, front.tol_g);
  EXPECT_TRUE(front.monotone_strengthening);
  for (const auto& s : front.samples) {
    EXPECT_LT(s.rho_left, 0.5);
    EXPECT_GT(s.rho_right, 0.5);
    EXPECT_NEAR(s.x, exact::g(fam, s.rho_left, s.t), 1e-12 * std::abs(s.x));
  }
}

TEST(Front, RankineHugoniotSlope) {
  const auto fam = fixture::reference_family();
  const double ts = fixture::t_star();
  for (double f : {1.05, 1.2, 1.6}) {
    const double t = f * ts, h = 1e-4;
    const auto fr = shock_front(fam, {t - h, t + h}, 3);
    ASSERT_EQ(fr.samples.size(), 3u);
    const double slope = (fr.samples[2].x - fr.samples[0].x) / (2 * h);
    const auto& mid = fr.samples[1];
    const double r1 = mid.rho_left, r2 = mid.rho_right;
    const double u1 = exact::velocity_U(fam, r1, t), u2 = exact::velocity_U(fam, r2, t);
    const double rh = (r2 * u2 - r1 * u1) / (r2 - r1);
    EXPECT_NEAR(slope, rh, 1e-3 * std::abs(rh)) << f;
  }
}

TEST(Front, EqualAreaLoopVanishes) {
  const auto fam = fixture::reference_family();
  const double ts = fixture::t_star();
  const auto front = shock_front(fam, {1.1 * ts, 1.8 * ts}, 3);
  for (const auto& s : front.samples) {
    const double scale = std::max(1.0, std::abs(potential_H(fam, s.rho_left, s.t)));
    EXPECT_LT(std::abs(cut_loop_integral(fam, s.rho_left, s.rho_right, s.t)), 1e-8 * scale);
  }
  // Away from the equal-potential cut the loop does not close.
  const auto& s = front.samples.front();
  EXPECT_GT(std::abs(cut_loop_integral(fam, s.rho_left * 0.9, s.rho_right, s.t)), 1e-4);
}

TEST(Front, RejectsTimesBeforeCusp) {
  const auto fam = fixture::reference_family();
  EXPECT_THROW(shock_front(fam, {3.0, 4.0}, 4), DomainError);
}
