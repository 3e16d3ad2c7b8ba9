#pragma once

// Independent reference computations used only by the tests.

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace lyap::oracle {

/// Central differences with step h = 1e-6 * max(1, ||x||).
inline Eigen::VectorXd central_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x) {
  const double h = 1e-6 * std::max(1.0, x.norm());
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline double relative_error(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

/// x_0, x_1, ... of x_{k+1} = a x_k + b x_{k-1}.
inline std::vector<double> scalar_recurrence(double a, double b, double x0, double x1,
                                             int n) {
  std::vector<double> xs{x0, x1};
  while (static_cast<int>(xs.size()) < n) {
    const auto k = xs.size();
    xs.push_back(a * xs[k - 1] + b * xs[k - 2]);
  }
  return xs;
}

/// |z|^k-style spectral radius estimate by repeated multiplication of the
/// companion matrix: ||M^k z0||^(1/k).
inline double power_iteration_radius(double a, double b, int k) {
  Eigen::Vector2d z(1.0, 0.3);
  double log_norm = 0.0;
  for (int i = 0; i < k; ++i) {
    z = Eigen::Vector2d(a * z(0) + b * z(1), z(0));
    const double n = z.norm();
    log_norm += std::log(n);
    z /= n;
  }
  return std::exp(log_norm / k);
}

}  // namespace lyap::oracle
