#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lyap/problems.hpp"
#include "oracles.hpp"

using namespace lyap;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

void expect_invariants(const QuadraticProblem& p) {
  const MatrixXd rebuilt = p.eigvecs * p.eigvals.asDiagonal() * p.eigvecs.transpose();
  EXPECT_LE((rebuilt - p.W).norm() / p.W.norm(), 1e-10);
  const MatrixXd gram = p.eigvecs.transpose() * p.eigvecs;
  EXPECT_LE((gram - MatrixXd::Identity(p.dim, p.dim)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(p.mu, p.eigvals(0));
  EXPECT_EQ(p.lipschitz, p.eigvals(p.dim - 1));
  EXPECT_LE(p.mu, p.lipschitz);
  if (p.mu > 0.0) {
    EXPECT_LE((p.W * p.minimizer - p.linear).norm(), 1e-8 * p.linear.norm());
  }
}

VectorXd uniform_point(Rng& rng, int n, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = u(rng);
  return x;
}

void expect_gradient_matches_fd(const Objective& obj, double half_width,
                                std::uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < 100; ++i) {
    const VectorXd x = uniform_point(rng, obj.dim, half_width);
    const VectorXd fd = oracle::central_difference_gradient(obj.value, x);
    EXPECT_LE(oracle::relative_error(obj.gradient(x), fd), 1e-6)
        << obj.name << " at point " << i;
  }
}

}  // namespace

TEST(GenerateQuadratic, OneDimensionalSpectrumIsL) {
  const auto p = generate_quadratic(1, 1.0, 1.0, 0);
  EXPECT_DOUBLE_EQ(p.W(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(p.eigvals(0), 1.0);
}

TEST(GenerateQuadratic, EqualSpacingSmall) {
  const auto p = generate_quadratic(3, 1.0, 4.0, 7);
  EXPECT_DOUBLE_EQ(p.eigvals(0), 1.0);
  EXPECT_DOUBLE_EQ(p.eigvals(1), 2.5);
  EXPECT_DOUBLE_EQ(p.eigvals(2), 4.0);
  expect_invariants(p);
}

TEST(GenerateQuadratic, LargeProblemResidualRecomputed) {
  const auto p = generate_quadratic(100, 1.0, 1000.0, 1);
  EXPECT_DOUBLE_EQ(p.mu, 1.0);
  EXPECT_DOUBLE_EQ(p.lipschitz, 1000.0);
  // Residual from the stored W and linear term alone.
  const VectorXd x = p.W.ldlt().solve(p.linear);
  EXPECT_LE((p.W * x - p.linear).norm() / p.linear.norm(), 1e-8);
  EXPECT_LE((x - p.minimizer).norm() / p.minimizer.norm(), 1e-8);
  expect_invariants(p);
}

TEST(GenerateQuadratic, InvariantsAcrossSeedsAndSizes) {
  for (int dim : {2, 5, 17, 60}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto p = generate_quadratic(dim, 0.5, 50.0, seed);
      expect_invariants(p);
      for (int i = 0; i + 2 < dim; ++i) {
        const double d1 = p.eigvals(i + 1) - p.eigvals(i);
        const double d2 = p.eigvals(i + 2) - p.eigvals(i + 1);
        EXPECT_NEAR(d1, d2, 1e-12);
      }
    }
  }
}

TEST(GenerateQuadratic, SameSeedSameProblem) {
  const auto a = generate_quadratic(20, 1.0, 10.0, 42);
  const auto b = generate_quadratic(20, 1.0, 10.0, 42);
  const auto c = generate_quadratic(20, 1.0, 10.0, 43);
  EXPECT_EQ(a.W, b.W);
  EXPECT_EQ(a.minimizer, b.minimizer);
  EXPECT_NE(a.W, c.W);
}

TEST(GenerateQuadratic, ConvexCaseFlagsNonUniqueMinimizer) {
  const auto p = generate_quadratic(8, 0.0, 10.0, 3);
  EXPECT_EQ(p.mu, 0.0);
  EXPECT_FALSE(p.unique_minimizer);
  // The generating point still solves W x = linear.
  EXPECT_LE((p.W * p.minimizer - p.linear).norm(), 1e-10 * std::max(1.0, p.linear.norm()));
}

TEST(GenerateQuadratic, RejectsBadInputs) {
  EXPECT_THROW(generate_quadratic(0, 1.0, 2.0, 0), std::invalid_argument);
  EXPECT_THROW(generate_quadratic(3, -1.0, 2.0, 0), std::invalid_argument);
  EXPECT_THROW(generate_quadratic(3, 2.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(generate_quadratic(3, 1.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(generate_quadratic(3, 1.0, std::nan(""), 0), std::invalid_argument);
}

TEST(HaarOrthogonal, IsOrthogonal) {
  Rng rng(5);
  const MatrixXd q = haar_orthogonal(rng, 30);
  EXPECT_LE((q.transpose() * q - MatrixXd::Identity(30, 30)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Evaluate, ScalarQuadratic) {
  const auto p = quadratic_from_matrix(MatrixXd::Constant(1, 1, 2.0), VectorXd::Zero(1));
  EXPECT_DOUBLE_EQ(evaluate(p, VectorXd::Constant(1, 3.0)), 9.0);
  EXPECT_DOUBLE_EQ(gradient(p, VectorXd::Constant(1, 3.0))(0), 6.0);
}

TEST(Evaluate, DiagonalByHand) {
  MatrixXd w = MatrixXd::Zero(2, 2);
  w(0, 0) = 1.0;
  w(1, 1) = 4.0;
  const auto p = quadratic_from_matrix(w, VectorXd{{1.0, 4.0}});
  EXPECT_DOUBLE_EQ(evaluate(p, VectorXd{{1.0, 1.0}}), -2.5);
  EXPECT_LE(gradient(p, p.minimizer).norm(), 1e-8);
  EXPECT_NEAR(p.minimizer(0), 1.0, 1e-12);
  EXPECT_NEAR(p.minimizer(1), 1.0, 1e-12);
}

TEST(Evaluate, MinimizerIsGlobalMinimum) {
  const auto p = generate_quadratic(12, 0.3, 20.0, 9);
  EXPECT_LE(gradient(p, p.minimizer).norm(), 1e-8);
  const double f_star = evaluate(p, p.minimizer);
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const VectorXd delta = standard_normal_vector(rng, p.dim);
    EXPECT_LE(f_star, evaluate(p, p.minimizer + delta));
  }
}

TEST(Evaluate, RejectsWrongDimension) {
  const auto p = generate_quadratic(4, 1.0, 2.0, 0);
  EXPECT_THROW(evaluate(p, VectorXd::Zero(3)), DimensionMismatch);
  EXPECT_THROW(gradient(p, VectorXd::Zero(5)), DimensionMismatch);
}

TEST(QuadraticFromMatrix, MinimumNormMinimizerWhenSingular) {
  MatrixXd w = MatrixXd::Zero(2, 2);
  w(0, 0) = 2.0;
  const auto p = quadratic_from_matrix(w, VectorXd{{4.0, 0.0}});
  EXPECT_FALSE(p.unique_minimizer);
  EXPECT_NEAR(p.minimizer(0), 2.0, 1e-12);
  EXPECT_NEAR(p.minimizer(1), 0.0, 1e-12);
  EXPECT_THROW(quadratic_from_matrix(-MatrixXd::Identity(2, 2), VectorXd::Zero(2)),
               std::invalid_argument);
}

TEST(GradientOracles, QuadraticMatchesFiniteDifferences) {
  expect_gradient_matches_fd(as_objective(generate_quadratic(6, 1.0, 30.0, 2)), 3.0, 100);
}

TEST(GradientOracles, CosineMatchesFiniteDifferences) {
  expect_gradient_matches_fd(cosine_counterexample(), 2.0, 101);
}

TEST(GradientOracles, ExpNormMatchesFiniteDifferences) {
  expect_gradient_matches_fd(exp_norm_objective(3), 0.8, 102);
}

TEST(GradientOracles, RosenbrockMatchesFiniteDifferences) {
  expect_gradient_matches_fd(rosenbrock_objective(), 2.0, 103);
}

TEST(Cosine, ValuesAndCurvatureBounds) {
  const auto o = cosine_counterexample();
  const VectorXd zero = VectorXd::Zero(1);
  EXPECT_DOUBLE_EQ(o.value(zero), 0.004975);
  EXPECT_EQ(o.gradient(zero)(0), 0.0);
  // f'' = 2 - 1.99 cos(20 x) from second differences of the gradient.
  auto second = [&](double x) {
    const double h = 1e-6;
    return (o.gradient(VectorXd::Constant(1, x + h))(0) -
            o.gradient(VectorXd::Constant(1, x - h))(0)) / (2 * h);
  };
  EXPECT_NEAR(second(0.0), 0.01, 1e-6);
  EXPECT_NEAR(second(M_PI / 20.0), 3.99, 1e-6);
  EXPECT_DOUBLE_EQ(*o.mu, 0.01);
  EXPECT_DOUBLE_EQ(*o.lipschitz, 3.99);
}

TEST(ExpNorm, ValuesByHand) {
  const auto o1 = exp_norm_objective(1);
  EXPECT_DOUBLE_EQ(o1.value(VectorXd::Constant(1, 1.0)), std::exp(1.0));
  EXPECT_DOUBLE_EQ(o1.gradient(VectorXd::Constant(1, 1.0))(0), 2.0 * std::exp(1.0));
  const auto o3 = exp_norm_objective(3);
  EXPECT_DOUBLE_EQ(o3.value(VectorXd::Zero(3)), 1.0);
  EXPECT_EQ(o3.gradient(VectorXd::Zero(3)).norm(), 0.0);
  EXPECT_THROW(exp_norm_objective(0), std::invalid_argument);
}

TEST(Rosenbrock, ValuesByHand) {
  const auto o = rosenbrock_objective();
  EXPECT_EQ(o.value(VectorXd{{1.0, 1.0}}), 0.0);
  EXPECT_EQ(o.gradient(VectorXd{{1.0, 1.0}}).norm(), 0.0);
  EXPECT_EQ(o.value(VectorXd{{0.0, 0.0}}), 1.0);
  EXPECT_THROW(o.value(VectorXd::Zero(3)), DimensionMismatch);
}
