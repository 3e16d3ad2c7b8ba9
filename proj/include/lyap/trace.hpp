#pragma once

// Running a method for a fixed budget and recording per-iterate metrics.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lyap/lyapunov.hpp"
#include "lyap/methods.hpp"
#include "lyap/problems.hpp"

namespace lyap {

/// Iterates farther than this from x* are treated as divergence.
inline constexpr double kDivergenceThreshold = 1e12;

struct Trace {
  Trace(MethodSpec m, std::string problem_name, std::uint64_t s)
      : method(m), problem(std::move(problem_name)), seed(s) {}

  MethodSpec method;
  std::string problem;
  std::uint64_t seed = 0;

  std::vector<Eigen::VectorXd> iterates;  // empty unless requested
  std::vector<double> objective_gap;      // f(x_k) - f(x*)
  std::vector<double> distance;           // ||x_k - x*||
  LyapunovSeries lyapunov;                // V_k for k >= 2
  bool diverged = false;

  std::size_t size() const { return distance.size(); }
};

struct TraceOptions {
  int iters = 2000;  // number of recorded iterates, x_0 included
  // Stop once V drops below this value (0 disables early stopping).
  double stop_below = 0.0;
  bool keep_iterates = false;
  double tolerance = kMonotoneTol;
  // x_{-1}; defaults to x_0.
  std::optional<Eigen::VectorXd> previous;
};

namespace detail {

inline void check_options(const TraceOptions& opt) {
  if (opt.iters < 3) throw std::invalid_argument("iters must be >= 3");
}

inline bool should_stop(const Trace& t, const TraceOptions& opt) {
  return opt.stop_below > 0.0 && !t.lyapunov.values.empty() &&
         t.lyapunov.values.back() >= 0.0 && t.lyapunov.values.back() < opt.stop_below;
}

}  // namespace detail

/// Draws x_0 = x* + r * z / ||z|| with z standard normal.
inline Eigen::VectorXd sample_start(const Eigen::VectorXd& x_star, double radius,
                                    std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd z = standard_normal_vector(rng, static_cast<int>(x_star.size()));
  return x_star + radius * z / z.norm();
}

/// Quadratic path. The state is advanced in eigen-coordinates relative to
/// x*, which is exactly step_quadratic without the round trip through the
/// original basis; metrics are read off the same coordinates.
inline Trace run_trace(const QuadraticProblem& p, const MethodSpec& spec,
                       const Eigen::VectorXd& x0, const TraceOptions& opt = {},
                       std::uint64_t seed = 0) {
  detail::check_options(opt);
  require_same_size(x0.size(), p.dim, "run_trace x0");
  const Eigen::VectorXd& xm1 = opt.previous ? *opt.previous : x0;
  require_same_size(xm1.size(), p.dim, "run_trace previous");

  Trace t(spec, "quadratic", seed);
  t.lyapunov.tolerance = opt.tolerance;
  const auto coeffs = coefficients_for(spec, p.eigvals);
  const Eigen::MatrixXd& q = p.eigvecs;

  IterationState z{q.transpose() * (x0 - p.minimizer),
                   q.transpose() * (xm1 - p.minimizer), std::nullopt};
  Eigen::VectorXd z_km1, z_km2;

  for (int k = 0; k < opt.iters; ++k) {
    if (k > 0) z = step_quadratic_eigenbasis(coeffs, z);
    const Eigen::VectorXd& zk = z.current;
    if (zk.hasNaN()) throw std::runtime_error("NaN iterate");
    const double dist = zk.norm();
    t.distance.push_back(dist);
    t.objective_gap.push_back(0.5 * zk.dot(p.eigvals.cwiseProduct(zk)));
    if (opt.keep_iterates) t.iterates.push_back(p.minimizer + q * zk);
    if (k >= 2) t.lyapunov.values.push_back(per_coordinate_V(zk, z_km1, z_km2).sum());
    if (!std::isfinite(dist) || dist > kDivergenceThreshold) {
      t.diverged = true;
      break;
    }
    if (detail::should_stop(t, opt)) break;
    z_km2 = std::move(z_km1);
    z_km1 = zk;
  }
  return t;
}

/// Oracle path: the literal method update through the objective's gradient.
inline Trace run_trace(const Objective& obj, const MethodSpec& spec,
                       const Eigen::VectorXd& x0, const TraceOptions& opt = {},
                       std::uint64_t seed = 0) {
  detail::check_options(opt);
  require_same_size(x0.size(), obj.dim, "run_trace x0");
  if (!obj.minimizer) {
    throw std::invalid_argument("run_trace needs an objective with a known minimizer");
  }
  const Eigen::VectorXd& x_star = *obj.minimizer;
  const double f_star = obj.value(x_star);

  Trace t(spec, obj.name, seed);
  t.lyapunov.tolerance = opt.tolerance;
  IterationState s = initial_state(spec.kind(), x0);
  if (opt.previous) {
    require_same_size(opt.previous->size(), obj.dim, "run_trace previous");
    s.previous = *opt.previous;
    // Pick y_{-1} so that x_0 = beta x_{-1} + (1 - beta) y_{-1} still holds.
    if (s.auxiliary && spec.beta() != 1.0) {
      s.auxiliary = (x0 - spec.beta() * s.previous) / (1.0 - spec.beta());
    }
  }
  Eigen::VectorXd x_km1, x_km2;

  for (int k = 0; k < opt.iters; ++k) {
    if (k > 0) s = step_general(obj, spec, s);
    const Eigen::VectorXd& xk = s.current;
    if (xk.hasNaN()) throw std::runtime_error("NaN in oracle output at iteration " +
                                              std::to_string(k));
    const double dist = (xk - x_star).norm();
    t.distance.push_back(dist);
    t.objective_gap.push_back(obj.value(xk) - f_star);
    if (opt.keep_iterates) t.iterates.push_back(xk);
    if (k >= 2) t.lyapunov.values.push_back(vector_V(xk, x_km1, x_km2, x_star));
    if (!std::isfinite(dist) || dist > kDivergenceThreshold) {
      t.diverged = true;
      break;
    }
    if (detail::should_stop(t, opt)) break;
    x_km2 = std::move(x_km1);
    x_km1 = xk;
  }
  return t;
}

}  // namespace lyap
