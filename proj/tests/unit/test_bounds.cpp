#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "expect_errc.hpp"
#include "kirchhoff/bounds.hpp"
#include "oracles.hpp"

using namespace kirchhoff;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

State state(std::vector<double> u, std::vector<double> v) {
  return {0.0, ModeVector(std::move(u)), ModeVector(std::move(v))};
}

GammaSet regular_set(double g1, double g2) {
  GammaSet gs;
  gs.gamma1 = g1;
  gs.gamma2 = g2;
  return gs;
}

}  // namespace

TEST(BuildConstants, SingleAffineMode) {
  const Spectrum spec({1.0});
  const Nonlinearity nl = Nonlinearity::affine(1.0);
  const Trajectory tr = evolve_kirchhoff(spec, nl, state({1.0}, {0.0}), 1.0, 1e-10);
  const ConstantsBundle cb = build_constants(spec, nl, tr);
  EXPECT_DOUBLE_EQ(cb.H0, 1.5);
  EXPECT_DOUBLE_EQ(cb.R0, std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(cb.C0, 4.0);
  EXPECT_DOUBLE_EQ(cb.L0, 1.0);
  EXPECT_GE(cb.C0, cb.nu0);
}

TEST(BuildConstants, OscillatorR1) {
  const Spectrum spec({1.0});
  const Nonlinearity nl = Nonlinearity::constant(1.0);
  const Trajectory tr =
      evolve_kirchhoff(spec, nl, state({1.0}, {0.0}), 20.0, 1e-10, uniform_grid(0, 20, 2000));
  const ConstantsBundle cb = build_constants(spec, nl, tr);
  // max over t of max{|sin t|, |cos t|} is 1, attained at t = 0
  EXPECT_NEAR(cb.R1, 1.01, 1e-12);
  const GammaSet gs = gammas(cb, GammaCase::Regular);
  EXPECT_EQ(*gs.gamma2, 0.0);
  EXPECT_EQ(*gs.gamma4, 0.0);
}

TEST(BuildConstants, Errors) {
  const Spectrum spec({1.0});
  const Nonlinearity nl = Nonlinearity::affine(1.0);
  Trajectory tr = evolve_kirchhoff(spec, nl, state({0.1}, {0.0}), 1.0, 1e-8);
  Trajectory empty{spec, {}, {}};
  EXPECT_EQ(code_of([&] { (void)build_constants(spec, nl, empty); }), Errc::EmptyTrajectory);
  tr.info.hamiltonian_drift = 1.0;
  EXPECT_EQ(code_of([&] { (void)build_constants(spec, nl, tr); }), Errc::DriftExceeded);
}

TEST(BuildConstants, CutoffBoundsAndPairs) {
  const Spectrum spec = Spectrum::linear(6);
  const Nonlinearity nl = Nonlinearity::affine(1.0);
  const State s0 = state({0.1, 0.05, 0.02, 0.01, 0.01, 0.005}, {0, 0, 0, 0, 0, 0});
  const Trajectory u = evolve_kirchhoff(spec, nl, s0, 5.0, 1e-9);
  const ConstantsBundle low = build_constants(spec, nl, u, 2.0);
  const ConstantsBundle all = build_constants(spec, nl, u, 10.0);
  EXPECT_LT(*low.R2_lambda, *low.R2);
  EXPECT_NEAR(*all.R2_lambda, *all.R2, 1e-15);
  // Gamma3 and Gamma4 do not see the cutoff
  EXPECT_EQ(gammas(low).gamma3, gammas(all).gamma3);
  EXPECT_EQ(gammas(low).gamma4, gammas(all).gamma4);

  const State s1{0.0, s0.u + ModeVector({0.05, 0, 0, 0, 0, 0}), s0.v};
  const Trajectory v = evolve_kirchhoff(spec, nl, s1, 5.0, 1e-9);
  const ConstantsBundle pair = build_pair_constants(spec, nl, u, v);
  for (const Trajectory* tr : {&u, &v}) {
    for (const auto& s : tr->samples) {
      EXPECT_LE(power_norm_sq(spec, s.u, 0.5), pair.R0 * pair.R0);
    }
  }
  for (const auto& s : v.samples) {
    const double q = std::max(power_norm_sq(spec, s.v, 0.25), power_norm_sq(spec, s.u, 0.75));
    EXPECT_LE(std::sqrt(q), 2.0 * pair.R1);
  }
}

TEST(Gammas, Examples) {
  ConstantsBundle cb;
  cb.nu0 = 1.0;
  cb.C0 = 1.0;
  cb.L0 = 0.0;
  cb.R0 = cb.R1 = 1.0;
  cb.R2 = 1.0;
  GammaSet gs = gammas(cb, GammaCase::Regular);
  EXPECT_EQ(*gs.gamma1, 1.0);
  EXPECT_EQ(*gs.gamma2, 0.0);
  EXPECT_EQ(*gs.gamma4, 0.0);

  cb.C0 = 2.0;
  cb.lambda = 0.5;
  cb.R2_lambda = 1.0;
  EXPECT_DOUBLE_EQ(*gammas(cb).gamma1_lambda, 8.0);
  EXPECT_DOUBLE_EQ(*gammas(cb).gamma3, 4.0);

  cb.C0 = 1.0;
  cb.L0 = 1.0;
  EXPECT_DOUBLE_EQ(*gammas(cb).gamma2, 16.0);
  // 8 + 2 (2 + 3)(2 + 1)
  EXPECT_DOUBLE_EQ(*gammas(cb).gamma2_lambda, 38.0);

  ConstantsBundle partial;
  partial.C0 = 1.0;
  partial.R1 = 1.0;
  EXPECT_EQ(code_of([&] { (void)gammas(partial, GammaCase::Regular); }), Errc::MissingField);
  EXPECT_EQ(code_of([&] { (void)gammas(partial, GammaCase::Minimal); }), Errc::MissingField);
  EXPECT_FALSE(gammas(partial).gamma2.has_value());
}

TEST(Gammas, Gamma1AtLeastOneProperty) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(0.01, 5.0);
  for (int i = 0; i < 1000; ++i) {
    ConstantsBundle cb;
    cb.nu0 = d(rng);
    cb.C0 = cb.nu0 + d(rng);
    cb.L0 = d(rng);
    cb.R0 = d(rng);
    cb.R1 = d(rng);
    cb.R2 = d(rng);
    cb.lambda = d(rng);
    cb.R2_lambda = d(rng);
    const GammaSet gs = gammas(cb);
    EXPECT_GE(*gs.gamma1, 1.0);
    EXPECT_GE(*gs.gamma2, 0.0);
    EXPECT_GE(*gs.gamma1_lambda, *gs.gamma1);
    EXPECT_EQ(*gs.gamma3, 2.0 * *gs.gamma1);
  }
}

TEST(GuaranteedTime, RegularExamples) {
  const double E0 = std::exp(-3.0) / 2.0;
  const double T = guaranteed_time(regular_set(2.0, 1.0), E0, 1.0, GammaCase::Regular);
  EXPECT_NEAR(T, 3.0, 1e-14);
  EXPECT_NEAR(E0 * 2.0 * std::exp(1.0 * T), 1.0, 1e-14);
  EXPECT_EQ(guaranteed_time(regular_set(1.0, 0.0), 0.5, 1.0, GammaCase::Regular), kInf);

  double prev = kInf;
  for (double gap : {1e-1, 1e-3, 1e-6, 1e-9}) {
    const double t = guaranteed_time(regular_set(2.0, 1.0), 0.5 * (1.0 - gap), 1.0,
                                     GammaCase::Regular);
    EXPECT_GT(t, 0.0);
    EXPECT_LT(t, prev);
    prev = t;
  }
  EXPECT_LT(prev, 1e-8);
  EXPECT_EQ(code_of([] { (void)guaranteed_time(regular_set(2.0, 1.0), 0.5, 1.0, GammaCase::Regular); }),
            Errc::GapTooLarge);
  EXPECT_EQ(code_of([] { (void)guaranteed_time(regular_set(2.0, 1.0), 0.0, 1.0, GammaCase::Regular); }),
            Errc::InvalidArgument);
}

TEST(GuaranteedTime, TightnessProperty) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> g1(1.0, 10.0), g2(0.01, 5.0), logr(-8.0, -0.1);
  for (int i = 0; i < 200; ++i) {
    const GammaSet gs = regular_set(g1(rng), g2(rng));
    const double R1 = 0.5 + g2(rng);
    const double E0 = R1 * R1 / *gs.gamma1 * std::exp(logr(rng));
    const double T = guaranteed_time(gs, E0, R1, GammaCase::Regular);
    EXPECT_LT(smallness_lhs(gs, E0, 0.999 * T, GammaCase::Regular), R1 * R1);
    EXPECT_GE(smallness_lhs(gs, E0, 1.001 * T, GammaCase::Regular), R1 * R1);
  }
}

TEST(GuaranteedTime, MinimalCase) {
  GammaSet gs;
  gs.gamma1_lambda = 2.0;
  gs.gamma2_lambda = 1.5;
  gs.gamma3 = 2.0;
  gs.gamma4 = 0.5;
  const double R1 = 1.0;
  const double E0 = 1e-4;
  const double eu = 1e-3;
  const double T = guaranteed_time(gs, E0, R1, GammaCase::Minimal, eu);
  ASSERT_TRUE(std::isfinite(T));
  const auto both = [&](double t) {
    return smallness_lhs(gs, E0, t, GammaCase::Minimal) < 0.5 && high_frequency_lhs(gs, eu, t) < 1.0 / 6.0;
  };
  EXPECT_TRUE(both(0.999 * T));
  EXPECT_FALSE(both(1.001 * T));

  // the high-frequency root binds when the tail is large
  const double eu_big = 0.04;
  const double T2 = guaranteed_time(gs, E0, R1, GammaCase::Minimal, eu_big);
  EXPECT_NEAR(T2, std::log(1.0 / (6.0 * 2.0 * eu_big)) / 0.5, 1e-12);

  EXPECT_EQ(code_of([&] { (void)guaranteed_time(gs, E0, R1, GammaCase::Minimal, 0.1); }),
            Errc::LambdaConditionFails);
  EXPECT_EQ(code_of([&] { (void)guaranteed_time(gs, 0.2, R1, GammaCase::Minimal, eu); }),
            Errc::GapTooLarge);
  EXPECT_EQ(code_of([&] { (void)guaranteed_time(gs, E0, R1, GammaCase::Minimal); }),
            Errc::MissingField);

  GammaSet flat = gs;
  flat.gamma2_lambda = 0.0;
  flat.gamma4 = 0.0;
  EXPECT_EQ(guaranteed_time(flat, E0, R1, GammaCase::Minimal, eu), kInf);
}

TEST(Lifespan, Examples) {
  EXPECT_DOUBLE_EQ(lifespan_lower_bound(LifespanCase::NullSolution, 0.1, 1.0).lower_bound, 100.0);
  EXPECT_NEAR(lifespan_lower_bound(LifespanCase::FiniteDimensional, std::exp(-4.0), 2.0).lower_bound,
              2.0, 1e-15);
  EXPECT_NEAR(lifespan_lower_bound(LifespanCase::Analytic, std::exp(-std::exp(2.0)), 0.5).lower_bound,
              4.0, 1e-12);
  EXPECT_EQ(code_of([] { (void)lifespan_lower_bound(LifespanCase::Analytic, 0.5, 1.0); }),
            Errc::EpsilonTooLarge);
  EXPECT_EQ(code_of([] { (void)lifespan_lower_bound(LifespanCase::QuasiAnalytic, 0.07, 1.0); }),
            Errc::EpsilonTooLarge);
  EXPECT_EQ(code_of([] { (void)lifespan_lower_bound(LifespanCase::FiniteDimensional, 1e-3, 1.0, 1e-4); }),
            Errc::EpsilonTooLarge);
  EXPECT_EQ(code_of([] { (void)lifespan_lower_bound(LifespanCase::NullSolution, 0.0, 1.0); }),
            Errc::EpsilonTooLarge);
}

TEST(Lifespan, MonotoneInEpsilon) {
  for (auto c : {LifespanCase::FiniteDimensional, LifespanCase::Analytic, LifespanCase::QuasiAnalytic,
                 LifespanCase::NullSolution}) {
    double prev = -kInf;
    for (double e = 0.9 * natural_epsilon_limit(c); e > 1e-300; e *= 1e-3) {
      const double t = lifespan_lower_bound(c, e, 1.3).lower_bound;
      EXPECT_GE(t, prev) << to_string(c) << " eps " << e;
      prev = t;
    }
  }
}

TEST(Lifespan, NullSolutionScaling) {
  const Nonlinearity nl = Nonlinearity::affine(1.0);
  const double a0 = 3.0;
  const double Ed = 1.0;
  double lowest = kInf;
  for (double eps = 1e-1; eps >= 1e-4 * (1 - 1e-12); eps /= std::sqrt(10.0)) {
    const GammaSet gs = gammas(null_solution_constants(nl, a0 * eps), GammaCase::Regular);
    // Gamma2 = 16 L0 a0^2 eps^2 with L0 = 1
    EXPECT_NEAR(*gs.gamma2 / (eps * eps), 16.0 * a0 * a0, 1e-12 * a0 * a0);
    const double T = guaranteed_time(gs, eps * eps * Ed, a0 * eps, GammaCase::Regular);
    lowest = std::min(lowest, T * eps * eps);
  }
  EXPECT_GT(lowest, 0.0);
}

TEST(InterpolationConstant, LinearWeightClosedForm) {
  EXPECT_NEAR(interpolation_constant(Weight::linear(2.0), 1.0), std::exp(-1.0), 1e-14);
  const auto oracle_kb = [](double r0, double b) {
    return oracle::grid_max([&](double s) { return std::pow(s, b) * std::exp(-0.5 * r0 * s); }, 0.0,
                            50.0 + 40.0 * b / r0, 2'000'000);
  };
  EXPECT_NEAR(interpolation_constant(Weight::linear(2.0), 1.0), oracle_kb(2.0, 1.0), 1e-10);
  for (double r0 : {0.3, 1.0, 4.0}) {
    for (double b : {0.5, 1.0, 2.0, 3.0}) {
      const double exact = std::pow(2.0 * b / (r0 * std::exp(1.0)), b);
      EXPECT_NEAR(interpolation_constant(Weight::linear(r0), b), exact, 1e-12 * exact);
    }
  }
}

TEST(InterpolationConstant, QuasiAnalyticGridOracle) {
  const Weight w = Weight::quasi_analytic();
  for (double b : {0.5, 1.0, 2.0, 3.0}) {
    const auto g = [&](double s) { return std::pow(s, b) * std::exp(-0.5 * s / std::log(2.0 + s)); };
    // coarse grid to locate the peak, then a fine grid on the neighbouring cells
    double peak = 0.0, best = 0.0;
    for (int i = 1; i <= 400000; ++i) {
      const double s = 0.01 * i;
      if (g(s) > best) best = g(s), peak = s;
    }
    const double grid = oracle::grid_max(g, std::max(0.0, peak - 0.01), peak + 0.01, 1'000'000);
    const double kb = interpolation_constant(w, b);
    EXPECT_GE(kb, grid * (1 - 1e-14));
    EXPECT_NEAR(kb, grid, 1e-12 * grid);
  }
  EXPECT_EQ(code_of([] { (void)interpolation_constant(Weight::zero(), 1.0); }), Errc::InfiniteKb);
  const Weight slow = Weight::custom([](double s) { return std::log1p(s); });
  EXPECT_EQ(code_of([&] { (void)interpolation_constant(slow, 1.0); }), Errc::InfiniteKb);
}

TEST(Interpolate, Examples) {
  const Weight lin = Weight::linear(1.0);
  const double a1[] = {1.0};
  const double l1[] = {0.0};
  const InterpolationResult kernel = interpolate(a1, l1, 2.0, lin);
  EXPECT_EQ(kernel.lhs, 0.0);
  EXPECT_TRUE(kernel.holds());

  const double a2[] = {1.0, 1.0};
  const double l2[] = {0.0, 2.0};
  const InterpolationResult r = interpolate(a2, l2, 1.0, lin);
  const double F = 1.0 + 2.0 * std::exp(2.0);
  EXPECT_DOUBLE_EQ(r.lhs, 2.0);
  EXPECT_DOUBLE_EQ(r.E, 2.0);
  EXPECT_NEAR(r.F, F, 1e-13);
  EXPECT_NEAR(r.K_b, 2.0 / std::exp(1.0), 1e-14);
  EXPECT_NEAR(r.bound, (2.0 / std::exp(1.0) + 2.0 * std::log(F / 2.0)) * 2.0, 1e-12);
  EXPECT_TRUE(r.holds());
  EXPECT_FALSE(r.clamped);

  const double zeros[] = {0.0, 0.0};
  EXPECT_EQ(code_of([&] { (void)interpolate(zeros, l2, 1.0, lin); }), Errc::ZeroE);
  EXPECT_EQ(code_of([&] { (void)interpolate(a2, l2, 1.0, Weight::zero()); }), Errc::InfiniteKb);
  EXPECT_EQ(code_of([&] { (void)interpolate(a1, l2, 1.0, lin); }), Errc::LengthMismatch);
}

TEST(Interpolate, RandomizedInequality) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> len(1, 64);
  const double bs[] = {0.5, 1.0, 2.0, 3.0};
  const Weight weights[] = {Weight::linear(0.5), Weight::linear(2.0), Weight::quasi_analytic()};
  int violations = 0;
  for (int i = 0; i < 2000; ++i) {
    const std::size_t n = static_cast<std::size_t>(len(rng));
    const auto a = oracle::random_vector(rng, n, 0.0, 1.0);
    const auto l = oracle::random_vector(rng, n, 0.0, 20.0);
    const double b = bs[i % 4];
    const Weight& w = weights[i % 3];
    const InterpolationResult r = interpolate(a, l, b, w);
    double lhs = 0.0, E = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      lhs += a[k] * std::pow(l[k], b);
      E += a[k];
    }
    EXPECT_NEAR(r.lhs, lhs, 1e-12 * lhs);
    EXPECT_NEAR(r.E, E, 1e-12 * E);
    if (!r.holds()) ++violations;
  }
  EXPECT_EQ(violations, 0);
}
