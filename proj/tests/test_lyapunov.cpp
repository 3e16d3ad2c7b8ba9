#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lyap/certificate.hpp"
#include "lyap/lyapunov.hpp"
#include "lyap/methods.hpp"
#include "lyap/problems.hpp"
#include "lyap/trace.hpp"
#include "oracles.hpp"

using namespace lyap;
using Eigen::VectorXd;

TEST(ScalarV, Examples) {
  EXPECT_EQ(scalar_V(0, 0, 0), 0.0);
  EXPECT_EQ(scalar_V(1, 0, 1), -1.0);
}

TEST(ScalarV, HandIteratedHeavyBall) {
  const auto xs = oracle::scalar_recurrence(2.0 / 9, -1.0 / 9, 1.0, 1.0 / 9, 4);
  // xs = x_0..x_3 with x_{-1} = x_0 = 1.
  EXPECT_NEAR(xs[2], -7.0 / 81, 1e-16);
  EXPECT_NEAR(xs[3], -23.0 / 729, 1e-16);
  EXPECT_NEAR(scalar_V(xs[2], xs[1], xs[0]), 8.0 / 81, 1e-16);
  EXPECT_NEAR(scalar_V(xs[3], xs[2], xs[1]), 8.0 / 729, 1e-16);
}

TEST(ScalarV, ContractionIdentityForArbitraryCoefficients) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = u(rng), b = u(rng);
    const auto xs = oracle::scalar_recurrence(a, b, u(rng), u(rng), 30);
    for (std::size_t k = 2; k + 1 < xs.size(); ++k) {
      const double v = scalar_V(xs[k], xs[k - 1], xs[k - 2]);
      const double vn = scalar_V(xs[k + 1], xs[k], xs[k - 1]);
      const double scale = xs[k] * xs[k] + std::abs(xs[k + 1] * xs[k - 1]) +
                           std::abs(b) * (xs[k - 1] * xs[k - 1] + std::abs(xs[k] * xs[k - 2]));
      ASSERT_LE(std::abs(vn + b * v), 1e-12 * scale) << "a=" << a << " b=" << b;
    }
  }
}

TEST(ScalarV, NonNegativeUnderEligibility) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ub(-0.99, -0.01), ux(-5.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double b = ub(rng);
    std::uniform_real_distribution<double> ua(-2.0 * std::sqrt(-b), 2.0 * std::sqrt(-b));
    const double a = ua(rng);
    const auto xs = oracle::scalar_recurrence(a, b, ux(rng), ux(rng), 40);
    for (std::size_t k = 2; k < xs.size(); ++k) {
      const double scale = xs[k - 1] * xs[k - 1] + std::abs(xs[k] * xs[k - 2]);
      ASSERT_GE(scalar_V(xs[k], xs[k - 1], xs[k - 2]), -1e-12 * std::max(1.0, scale));
    }
  }
}

TEST(VectorV, Examples) {
  const VectorXd s = VectorXd{{1.0, -2.0}};
  EXPECT_EQ(vector_V(s, s, s, s), 0.0);
  const VectorXd z = VectorXd::Zero(1);
  EXPECT_DOUBLE_EQ(vector_V(VectorXd::Constant(1, 0.3), VectorXd::Constant(1, -0.7),
                            VectorXd::Constant(1, 1.1), z),
                   scalar_V(0.3, -0.7, 1.1));
  EXPECT_THROW(vector_V(s, s, VectorXd::Zero(3), s), DimensionMismatch);
}

TEST(PerCoordinateV, Examples) {
  EXPECT_EQ(per_coordinate_V(VectorXd::Zero(3), VectorXd::Zero(3), VectorXd::Zero(3)).norm(),
            0.0);
  const VectorXd e{{1.0, 0.0}};
  const VectorXd v = per_coordinate_V(e, e, e);
  EXPECT_EQ(v(0), 0.0);
  EXPECT_EQ(v(1), 0.0);
}

TEST(PerCoordinateV, SumsToVectorVUnderRotation) {
  std::mt19937_64 pick(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = generate_quadratic(10 + trial, 1.0, 50.0, 100 + trial);
    Rng rng(200 + trial);
    VectorXd x[3];
    for (auto& xi : x) xi = p.minimizer + standard_normal_vector(rng, p.dim);
    const double full = vector_V(x[0], x[1], x[2], p.minimizer);
    const auto to_eig = [&](const VectorXd& v) -> VectorXd {
      return p.eigvecs.transpose() * (v - p.minimizer);
    };
    const double summed = per_coordinate_V(to_eig(x[0]), to_eig(x[1]), to_eig(x[2])).sum();
    EXPECT_NEAR(full, summed, 1e-10 * std::max(1.0, std::abs(full)));
  }
}

TEST(ContractionFactor, Examples) {
  EXPECT_DOUBLE_EQ(contraction_factor({2.0 / 9, -1.0 / 9}), 1.0 / 9);
  EXPECT_EQ(contraction_factor({0.0, -1.0}), 1.0);
  for (double lam : {1.0, 2.0, 3.5}) {
    const auto c = scalar_coefficients(MethodSpec(MethodKind::HB, 4.0 / 9, 1.0 / 9), lam);
    EXPECT_DOUBLE_EQ(contraction_factor(c), 1.0 / 9);
  }
  EXPECT_THROW(contraction_factor({-0.5, 0.0}), Ineligible);
}

TEST(CheckMonotone, GeometricSeriesIsMonotone) {
  LyapunovSeries s;
  for (int k = 0; k < 50; ++k) s.values.push_back(std::pow(1.0 / 9, k));
  const auto r = check_monotone(s);
  EXPECT_TRUE(r.monotone);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_NEAR(r.max_ratio, 1.0 / 9, 1e-12);
}

TEST(CheckMonotone, SingleIncrease) {
  LyapunovSeries s;
  s.values = {1.0, 2.0};
  const auto r = check_monotone(s);
  EXPECT_FALSE(r.monotone);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_NEAR(r.violations[0].excess, 1.0, 1e-15);
  EXPECT_EQ(r.violations[0].index, 3);
}

TEST(CheckMonotone, ToleranceHasFloorOne) {
  LyapunovSeries s;
  s.values = {1e-12, 5e-10};  // increase below 1e-9 absolute
  EXPECT_TRUE(check_monotone(s).monotone);
  s.values = {1e3, 1e3 + 5e-7};  // below 1e-9 relative
  EXPECT_TRUE(check_monotone(s).monotone);
  s.values = {1e3, 1e3 + 5e-6};
  EXPECT_FALSE(check_monotone(s).monotone);
  s.values = {1.0, std::nan("")};
  EXPECT_FALSE(check_monotone(s).monotone);
  s.values = {};
  EXPECT_THROW(check_monotone(s), std::invalid_argument);
}

TEST(CheckMonotone, NoPositiveValuesLeavesRatioUndefined) {
  LyapunovSeries s;
  s.values = {0.0, 0.0, -1.0};
  EXPECT_TRUE(std::isnan(check_monotone(s).max_ratio));
}

TEST(HeavyBallOptimal, EachCoordinateContractsByBeta) {
  const auto p = generate_quadratic(10, 1.0, 30.0, 4);
  const auto hb = optimal_hyperparams(MethodKind::HB, p.mu, p.lipschitz);
  const auto coeffs = coefficients_for(hb, p.eigvals);
  Rng rng(5);
  std::vector<VectorXd> hist{standard_normal_vector(rng, 10), standard_normal_vector(rng, 10)};
  IterationState z{hist[1], hist[0], std::nullopt};
  for (int k = 0; k < 20; ++k) {
    z = step_quadratic_eigenbasis(coeffs, z);
    hist.push_back(z.current);
  }
  for (std::size_t k = 2; k + 1 < hist.size(); ++k) {
    const VectorXd v = per_coordinate_V(hist[k], hist[k - 1], hist[k - 2]);
    const VectorXd vn = per_coordinate_V(hist[k + 1], hist[k], hist[k - 1]);
    for (int i = 0; i < 10; ++i) {
      const double scale = hist[k](i) * hist[k](i) + std::abs(hist[k + 1](i) * hist[k - 1](i)) +
                           hb.beta() * (hist[k - 1](i) * hist[k - 1](i) +
                                        std::abs(hist[k](i) * hist[k - 2](i)));
      EXPECT_LE(std::abs(vn(i) - hb.beta() * v(i)), 1e-12 * scale);
    }
  }
}

TEST(EligibleImpliesMonotone, RandomProblemsAndMethods) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = generate_quadratic(30, 0.5 + seed, 100.0, seed);
    for (auto k : {MethodKind::HB, MethodKind::NAG, MethodKind::TMM, MethodKind::NAGGS}) {
      const auto spec = optimal_hyperparams(k, p.mu, p.lipschitz);
      if (!analyze(spec, p.eigvals).eligible) continue;
      TraceOptions opt;
      opt.iters = 500;
      opt.previous = sample_start(p.minimizer, 10.0, seed + 77);
      const auto t = run_trace(p, spec, sample_start(p.minimizer, 10.0, seed), opt);
      EXPECT_TRUE(check_monotone(t.lyapunov).monotone) << to_string(k) << " seed " << seed;
    }
  }
}

TEST(AsymptoticRate, RatioApproachesSquaredRadius) {
  const auto p = generate_quadratic(20, 1.0, 100.0, 6);
  for (auto k : {MethodKind::HB, MethodKind::NAG, MethodKind::NAGGS}) {
    const auto spec = optimal_hyperparams(k, p.mu, p.lipschitz);
    double worst = 0.0;
    for (const auto& c : coefficients_for(spec, p.eigvals)) worst = std::max(worst, -c.b);
    TraceOptions opt;
    opt.iters = 400;
    const auto t = run_trace(p, spec, sample_start(p.minimizer, 10.0, 8), opt);
    const auto& v = t.lyapunov.values;
    ASSERT_GT(v.size(), 10u);
    std::size_t j = v.size() - 2;
    while (j > 0 && !(v[j] > 1e-280)) --j;
    EXPECT_NEAR(v[j + 1] / v[j], worst, 1e-3) << to_string(k);
  }
}
