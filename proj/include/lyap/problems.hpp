#pragma once

// Test objectives: random quadratics with a prescribed spectrum plus the
// non-quadratic counterexample and stress functions.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "lyap/error.hpp"
#include "lyap/symmetric_eigen.hpp"

namespace lyap {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// All randomness in the library comes from this engine, seeded explicitly.
/// Streams are reproducible within one standard library implementation.
using Rng = std::mt19937_64;

/// f(x) = 1/2 x^T W x - linear^T x + constant with W = Q diag(eigvals) Q^T.
struct QuadraticProblem {
  int dim = 0;
  MatrixXd W;
  VectorXd linear;
  double constant = 0.0;
  VectorXd eigvals;   // nondecreasing
  MatrixXd eigvecs;   // orthogonal, columns match eigvals
  VectorXd minimizer;
  double mu = 0.0;
  double lipschitz = 0.0;
  // False when mu == 0: then `minimizer` is one of many minimizers (the one
  // used to build `linear`).
  bool unique_minimizer = true;
};

/// Oracle-based objective for the general (non-quadratic) iteration engine.
struct Objective {
  std::string name;
  int dim = 0;
  std::function<double(const VectorXd&)> value;
  std::function<VectorXd(const VectorXd&)> gradient;
  std::optional<VectorXd> minimizer;
  std::optional<double> mu;
  std::optional<double> lipschitz;
};

inline VectorXd standard_normal_vector(Rng& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q.
inline MatrixXd haar_orthogonal(Rng& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(n, n);
  const MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

/// Random quadratic whose spectrum is `dim` equally spaced values from mu
/// to L; the minimizer is standard normal and linear = W * minimizer.
inline QuadraticProblem generate_quadratic(int dim, double mu, double L,
                                           std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (!(mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
  if (!(L > 0.0)) throw std::invalid_argument("L must be > 0");
  if (dim == 1 ? !(L >= mu) : !(L > mu)) {
    throw std::invalid_argument("L must exceed mu");
  }

  QuadraticProblem p;
  p.dim = dim;
  p.eigvals.resize(dim);
  if (dim == 1) {
    p.eigvals(0) = L;
  } else {
    const double step = (L - mu) / (dim - 1);
    for (int i = 0; i < dim; ++i) p.eigvals(i) = mu + i * step;
    p.eigvals(dim - 1) = L;
  }

  Rng rng(seed);
  p.eigvecs = haar_orthogonal(rng, dim);
  p.minimizer = standard_normal_vector(rng, dim);
  p.W = p.eigvecs * p.eigvals.asDiagonal() * p.eigvecs.transpose();
  p.W = 0.5 * (p.W + p.W.transpose());
  p.linear = p.W * p.minimizer;
  p.constant = 0.0;
  p.mu = p.eigvals(0);
  p.lipschitz = p.eigvals(dim - 1);
  p.unique_minimizer = p.mu > 0.0;
  return p;
}

/// Quadratic from a user-supplied symmetric positive semidefinite W.
/// The minimizer is the minimum-norm solution of W x = linear.
inline QuadraticProblem quadratic_from_matrix(const MatrixXd& w,
                                              const VectorXd& linear,
                                              double constant = 0.0) {
  require_same_size(w.rows(), linear.size(), "quadratic_from_matrix");
  SymmetricEigen eig = symmetric_eigendecomposition(w);
  const int n = static_cast<int>(w.rows());
  if (n == 0) throw std::invalid_argument("empty matrix");
  const double tiny = 1e-12 * std::max(1.0, std::abs(eig.eigvals(n - 1)));
  if (eig.eigvals(0) < -tiny) {
    throw std::invalid_argument("matrix is not positive semidefinite");
  }

  QuadraticProblem p;
  p.dim = n;
  p.W = w;
  p.linear = linear;
  p.constant = constant;
  p.eigvals = eig.eigvals.cwiseMax(0.0);
  p.eigvecs = eig.eigvecs;
  VectorXd coords = p.eigvecs.transpose() * linear;
  for (int i = 0; i < n; ++i) {
    coords(i) = p.eigvals(i) > tiny ? coords(i) / p.eigvals(i) : 0.0;
  }
  p.minimizer = p.eigvecs * coords;
  p.mu = p.eigvals(0);
  p.lipschitz = p.eigvals(n - 1);
  p.unique_minimizer = p.mu > tiny;
  return p;
}

inline double evaluate(const QuadraticProblem& p, const VectorXd& x) {
  require_same_size(x.size(), p.dim, "evaluate");
  return 0.5 * x.dot(p.W * x) - p.linear.dot(x) + p.constant;
}

inline VectorXd gradient(const QuadraticProblem& p, const VectorXd& x) {
  require_same_size(x.size(), p.dim, "gradient");
  return p.W * x - p.linear;
}

/// View of a quadratic through the oracle interface.
inline Objective as_objective(const QuadraticProblem& p) {
  Objective o;
  o.name = "quadratic";
  o.dim = p.dim;
  o.value = [p](const VectorXd& x) { return evaluate(p, x); };
  o.gradient = [p](const VectorXd& x) { return gradient(p, x); };
  o.minimizer = p.minimizer;
  o.mu = p.mu;
  o.lipschitz = p.lipschitz;
  return o;
}

/// f(x) = x^2 + (1.99/400) cos(20x). Strongly convex with f'' in
/// [0.01, 3.99], yet heavy ball with the optimal quadratic tuning does not
/// converge on it.
inline Objective cosine_counterexample() {
  constexpr double kAmp = 1.99 / 400.0;
  constexpr double kFreq = 20.0;
  Objective o;
  o.name = "cosine";
  o.dim = 1;
  o.value = [](const VectorXd& x) {
    require_same_size(x.size(), 1, "cosine value");
    return x(0) * x(0) + kAmp * std::cos(kFreq * x(0));
  };
  o.gradient = [](const VectorXd& x) {
    require_same_size(x.size(), 1, "cosine gradient");
    VectorXd g(1);
    g(0) = 2.0 * x(0) - kAmp * kFreq * std::sin(kFreq * x(0));
    return g;
  };
  o.minimizer = VectorXd::Zero(1);
  o.mu = 0.01;
  o.lipschitz = 3.99;
  return o;
}

/// f(x) = exp(||x||^2).
inline Objective exp_norm_objective(int dim) {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  Objective o;
  o.name = "exp-norm";
  o.dim = dim;
  o.value = [dim](const VectorXd& x) {
    require_same_size(x.size(), dim, "exp-norm value");
    return std::exp(x.squaredNorm());
  };
  o.gradient = [dim](const VectorXd& x) -> VectorXd {
    require_same_size(x.size(), dim, "exp-norm gradient");
    return 2.0 * std::exp(x.squaredNorm()) * x;
  };
  o.minimizer = VectorXd::Zero(dim);
  o.mu = 2.0;
  return o;
}

/// f(x, y) = (1 - x)^2 + 100 (y - x^2)^2.
inline Objective rosenbrock_objective() {
  Objective o;
  o.name = "rosenbrock";
  o.dim = 2;
  o.value = [](const VectorXd& v) {
    require_same_size(v.size(), 2, "rosenbrock value");
    const double x = v(0), y = v(1);
    return (1.0 - x) * (1.0 - x) + 100.0 * (y - x * x) * (y - x * x);
  };
  o.gradient = [](const VectorXd& v) {
    require_same_size(v.size(), 2, "rosenbrock gradient");
    const double x = v(0), y = v(1);
    VectorXd g(2);
    g(0) = -2.0 * (1.0 - x) - 400.0 * x * (y - x * x);
    g(1) = 200.0 * (y - x * x);
    return g;
  };
  o.minimizer = VectorXd::Ones(2);
  return o;
}

}  // namespace lyap
