#pragma once

// Heavy ball, Nesterov, triple momentum and Nesterov Gauss-Seidel written as
// two-step methods, with an engine per representation:
//   * per-eigenvalue scalar coefficients (a, b),
//   * the quadratic step through the eigenbasis,
//   * the literal gradient-oracle update for arbitrary objectives.

#include <Eigen/Dense>
#include <cctype>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lyap/error.hpp"
#include "lyap/problems.hpp"
#include "lyap/spectral.hpp"

namespace lyap {

enum class MethodKind { HB, NAG, TMM, NAGGS };

inline std::string_view to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::HB: return "HB";
    case MethodKind::NAG: return "NAG";
    case MethodKind::TMM: return "TMM";
    case MethodKind::NAGGS: return "NAG-GS";
  }
  return "?";
}

/// Accepts "HB", "hb", "NAG-GS", "naggs", ...
inline MethodKind parse_method_kind(std::string_view name) {
  std::string s;
  for (char ch : name) {
    if (ch == '-' || ch == '_') continue;
    s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (s == "hb" || s == "heavyball") return MethodKind::HB;
  if (s == "nag" || s == "nesterov") return MethodKind::NAG;
  if (s == "tmm") return MethodKind::TMM;
  if (s == "naggs") return MethodKind::NAGGS;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

class MethodSpec {
 public:
  /// gamma is only meaningful for TMM and is forced to 0 otherwise.
  MethodSpec(MethodKind kind, double alpha, double beta, double gamma = 0.0)
      : kind_(kind), alpha_(alpha), beta_(beta),
        gamma_(kind == MethodKind::TMM ? gamma : 0.0) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw std::invalid_argument("alpha must be a positive finite number");
    }
    if (!std::isfinite(beta) || !std::isfinite(gamma)) {
      throw std::invalid_argument("beta and gamma must be finite");
    }
    if (kind != MethodKind::TMM && beta < 0.0) {
      throw std::invalid_argument("beta must be >= 0 for " +
                                  std::string(to_string(kind)));
    }
  }

  MethodKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  std::string_view name() const { return to_string(kind_); }

 private:
  MethodKind kind_;
  double alpha_;
  double beta_;
  double gamma_;
};

/// x_k, x_{k-1} and, for NAG-GS, the y-sequence value y_{k-1}.
struct IterationState {
  VectorXd current;
  VectorXd previous;
  std::optional<VectorXd> auxiliary;
};

/// Starting state with x_{-1} = x_0 (and y_{-1} = x_0 for NAG-GS), which
/// makes the first step a plain gradient step for every method (of length
/// (1 - beta) alpha for NAG-GS).
inline IterationState initial_state(MethodKind kind, const VectorXd& x0) {
  IterationState s{x0, x0, std::nullopt};
  if (kind == MethodKind::NAGGS) s.auxiliary = x0;
  return s;
}

/// Hyperparameters minimizing the worst-case spectral radius on [mu, L].
inline MethodSpec optimal_hyperparams(MethodKind kind, double mu, double L) {
  if (!(mu > 0.0)) {
    throw std::invalid_argument(
        "optimal hyperparameters need mu > 0; pass explicit values for mu = 0");
  }
  if (!(L >= mu)) throw std::invalid_argument("L must be >= mu");
  const double sl = std::sqrt(L);
  const double sm = std::sqrt(mu);
  switch (kind) {
    case MethodKind::HB: {
      const double r = (sl - sm) / (sl + sm);
      return {kind, 4.0 / ((sl + sm) * (sl + sm)), r * r};
    }
    case MethodKind::NAG:
      return {kind, 1.0 / L, (sl - sm) / (sl + sm)};
    case MethodKind::TMM: {
      const double rho = 1.0 - std::sqrt(mu / L);
      return {kind, (1.0 + rho) / L, rho * rho / (2.0 - rho),
              rho * rho / ((1.0 + rho) * (2.0 - rho))};
    }
    case MethodKind::NAGGS: {
      const double denom = L + mu + 2.0 * std::sqrt(mu * L);
      return {kind, (2.0 + 2.0 * std::sqrt(L / mu)) / denom, (L - mu) / denom};
    }
  }
  throw std::logic_error("unreachable");
}

/// (a, b) with x_{k+1} = a x_k + b x_{k-1} along an eigenvector of W with
/// eigenvalue lambda.
inline TwoStepCoefficients scalar_coefficients(const MethodSpec& spec,
                                               double lambda) {
  const double al = spec.alpha() * lambda;
  const double beta = spec.beta();
  switch (spec.kind()) {
    case MethodKind::HB:
      return {1.0 - al + beta, -beta};
    case MethodKind::NAG:
      return {(1.0 - al) * (1.0 + beta), -(1.0 - al) * beta};
    case MethodKind::TMM:
      return {1.0 + beta - al * (1.0 + spec.gamma()), al * spec.gamma() - beta};
    case MethodKind::NAGGS:
      return {2.0 * beta + (1.0 - beta) * (1.0 - beta) - al * (1.0 - beta),
              -beta * beta};
  }
  throw std::logic_error("unreachable");
}

/// Asymptotic rate at the smallest eigenvalue, valid when its companion
/// matrix has a conjugate pair. Throws Ineligible otherwise.
inline double theoretical_rate(const MethodSpec& spec, double mu,
                               double tol = kConjugateTol) {
  if (!is_conjugate_pair(scalar_coefficients(spec, mu), tol)) {
    throw Ineligible(std::string(spec.name()) +
                     " eigenvalues at lambda = mu are not a conjugate pair");
  }
  const double a = spec.alpha(), beta = spec.beta();
  switch (spec.kind()) {
    case MethodKind::HB: return std::sqrt(beta);
    case MethodKind::NAG: return std::sqrt((1.0 - a * mu) * beta);
    case MethodKind::TMM: return std::sqrt(beta - a * spec.gamma() * mu);
    case MethodKind::NAGGS: return beta;
  }
  throw std::logic_error("unreachable");
}

inline std::vector<TwoStepCoefficients> coefficients_for(
    const MethodSpec& spec, const VectorXd& eigvals) {
  std::vector<TwoStepCoefficients> out;
  out.reserve(static_cast<std::size_t>(eigvals.size()));
  for (Eigen::Index i = 0; i < eigvals.size(); ++i) {
    out.push_back(scalar_coefficients(spec, eigvals(i)));
  }
  return out;
}

/// One step of the decoupled recurrences in eigen-coordinates (x - x*
/// expressed in the basis Q).
inline IterationState step_quadratic_eigenbasis(
    const std::vector<TwoStepCoefficients>& coeffs, const IterationState& state) {
  const auto n = static_cast<Eigen::Index>(coeffs.size());
  require_same_size(state.current.size(), n, "step_quadratic_eigenbasis");
  require_same_size(state.previous.size(), n, "step_quadratic_eigenbasis");
  IterationState next;
  next.current.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = coeffs[static_cast<std::size_t>(i)];
    next.current(i) = c.a * state.current(i) + c.b * state.previous(i);
  }
  next.previous = state.current;
  return next;
}

/// Full-space quadratic step: move to eigen-coordinates around the
/// minimizer, apply the scalar recurrences, move back. The NAG-GS
/// y-sequence, when present, is advanced with the exact gradient.
inline IterationState step_quadratic(const QuadraticProblem& p,
                                     const MethodSpec& spec,
                                     const IterationState& state) {
  require_same_size(state.current.size(), p.dim, "step_quadratic");
  require_same_size(state.previous.size(), p.dim, "step_quadratic");
  const auto coeffs = coefficients_for(spec, p.eigvals);
  IterationState local{p.eigvecs.transpose() * (state.current - p.minimizer),
                       p.eigvecs.transpose() * (state.previous - p.minimizer),
                       std::nullopt};
  IterationState stepped = step_quadratic_eigenbasis(coeffs, local);
  IterationState next;
  next.current = p.minimizer + p.eigvecs * stepped.current;
  next.previous = state.current;
  if (state.auxiliary) {
    require_same_size(state.auxiliary->size(), p.dim, "step_quadratic auxiliary");
    const double beta = spec.beta();
    next.auxiliary = beta * *state.auxiliary + (1.0 - beta) * state.current -
                     spec.alpha() * gradient(p, state.current);
  }
  return next;
}

/// Literal update of each method through the gradient oracle.
inline IterationState step_general(const Objective& obj, const MethodSpec& spec,
                                   const IterationState& state) {
  require_same_size(state.current.size(), obj.dim, "step_general");
  require_same_size(state.previous.size(), obj.dim, "step_general");
  const double alpha = spec.alpha();
  const double beta = spec.beta();
  const VectorXd& x = state.current;
  const VectorXd& xp = state.previous;

  IterationState next;
  next.previous = x;
  switch (spec.kind()) {
    case MethodKind::HB:
      next.current = x - alpha * obj.gradient(x) + beta * (x - xp);
      break;
    case MethodKind::NAG: {
      const VectorXd y = x + beta * (x - xp);
      next.current = y - alpha * obj.gradient(y);
      break;
    }
    case MethodKind::TMM: {
      const double gamma = spec.gamma();
      const VectorXd probe = (1.0 + gamma) * x - gamma * xp;
      next.current = (1.0 + beta) * x - beta * xp - alpha * obj.gradient(probe);
      break;
    }
    case MethodKind::NAGGS: {
      if (!state.auxiliary) {
        throw std::invalid_argument("NAG-GS step needs the auxiliary y state");
      }
      require_same_size(state.auxiliary->size(), obj.dim, "step_general auxiliary");
      VectorXd y = beta * *state.auxiliary + (1.0 - beta) * x - alpha * obj.gradient(x);
      next.current = beta * x + (1.0 - beta) * y;
      next.auxiliary = std::move(y);
      break;
    }
  }
  return next;
}

}  // namespace lyap
