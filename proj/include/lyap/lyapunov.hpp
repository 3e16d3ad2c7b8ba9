#pragma once

// The three-point Lyapunov candidate
//   V(x_k, x_{k-1}, x_{k-2}) = ||x_{k-1} - x*||^2 - <x_k - x*, x_{k-2} - x*>
// in scalar, vector and per-eigen-coordinate form. Along any scalar
// recurrence x_{k+1} = a x_k + b x_{k-1} it obeys V_{k+1} = -b V_k exactly.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lyap/error.hpp"
#include "lyap/spectral.hpp"

namespace lyap {

/// Default monotonicity tolerance; matches the V measurement floor used for
/// the quadratic experiments.
inline constexpr double kMonotoneTol = 1e-9;

inline double scalar_V(double x_k, double x_km1, double x_km2) {
  return x_km1 * x_km1 - x_k * x_km2;
}

inline double vector_V(const Eigen::VectorXd& x_k, const Eigen::VectorXd& x_km1,
                       const Eigen::VectorXd& x_km2, const Eigen::VectorXd& x_star) {
  require_same_size(x_k.size(), x_star.size(), "vector_V x_k");
  require_same_size(x_km1.size(), x_star.size(), "vector_V x_{k-1}");
  require_same_size(x_km2.size(), x_star.size(), "vector_V x_{k-2}");
  const Eigen::VectorXd e1 = x_km1 - x_star;
  return e1.squaredNorm() - (x_k - x_star).dot(x_km2 - x_star);
}

/// Coordinate-wise scalar_V of eigenbasis states; sums to vector_V.
inline Eigen::VectorXd per_coordinate_V(const Eigen::VectorXd& z_k,
                                        const Eigen::VectorXd& z_km1,
                                        const Eigen::VectorXd& z_km2) {
  require_same_size(z_km1.size(), z_k.size(), "per_coordinate_V");
  require_same_size(z_km2.size(), z_k.size(), "per_coordinate_V");
  return z_km1.array().square() - z_k.array() * z_km2.array();
}

/// Exact per-step multiplier of the scalar V series, -b (= |lambda|^2).
inline double contraction_factor(const TwoStepCoefficients& c,
                                 double tol = kConjugateTol) {
  if (!is_conjugate_pair(c, tol)) {
    throw Ineligible("contraction_factor needs a^2 + 4b <= 0");
  }
  return -c.b;
}

struct LyapunovSeries {
  std::vector<double> values;  // values[j] is V at iteration start_index + j
  int start_index = 2;
  double tolerance = kMonotoneTol;
};

struct MonotoneViolation {
  int index = 0;  // iteration number of V_next
  double v_prev = 0.0;
  double v_next = 0.0;
  double excess = 0.0;  // v_next - v_prev
};

struct MonotonicityReport {
  bool monotone = true;
  std::vector<MonotoneViolation> violations;
  // max V_{k+1} / V_k over steps with V_k > 0; NaN if there is none.
  double max_ratio = std::numeric_limits<double>::quiet_NaN();
};

/// A step violates monotonicity when V_{k+1} > V_k + tol * max(1, |V_k|).
inline MonotonicityReport check_monotone(const LyapunovSeries& series) {
  if (series.values.empty()) throw std::invalid_argument("empty Lyapunov series");
  MonotonicityReport report;
  const auto& v = series.values;
  for (std::size_t j = 0; j + 1 < v.size(); ++j) {
    const double prev = v[j];
    const double next = v[j + 1];
    if (next > prev + series.tolerance * std::max(1.0, std::abs(prev)) ||
        std::isnan(next)) {
      report.violations.push_back({series.start_index + static_cast<int>(j) + 1,
                                   prev, next, next - prev});
    }
    if (prev > 0.0) {
      const double ratio = next / prev;
      if (std::isnan(report.max_ratio) || ratio > report.max_ratio) {
        report.max_ratio = ratio;
      }
    }
  }
  report.monotone = report.violations.empty();
  return report;
}

}  // namespace lyap
