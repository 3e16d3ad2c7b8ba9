#pragma once

// Analysis of the 2x2 companion matrix M = [[a, b], [1, 0]] that drives one
// eigen-coordinate of a two-step method x_{k+1} = a x_k + b x_{k-1}.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "lyap/error.hpp"

namespace lyap {

using Complex = std::complex<double>;

/// Default relative tolerance for the conjugate-pair test.
inline constexpr double kConjugateTol = 1e-12;

/// Coefficients of x_{k+1} = a x_k + b x_{k-1} for one eigenvalue of W.
struct TwoStepCoefficients {
  double a = 0.0;
  double b = 0.0;
};

struct ComplexPair {
  Complex lambda1;
  Complex lambda2;

  double max_modulus() const {
    return std::max(std::abs(lambda1), std::abs(lambda2));
  }
};

struct SchurFactors {
  Eigen::Matrix2cd U;
  Eigen::Matrix2cd T;
};

inline Eigen::Matrix2d companion_matrix(const TwoStepCoefficients& c) {
  Eigen::Matrix2d m;
  m << c.a, c.b, 1.0, 0.0;
  return m;
}

inline double discriminant(const TwoStepCoefficients& c) {
  return c.a * c.a + 4.0 * c.b;
}

inline double discriminant_scale(const TwoStepCoefficients& c) {
  return std::max({1.0, c.a * c.a, std::abs(4.0 * c.b)});
}

/// True when the eigenvalues are complex conjugates or real and equal,
/// i.e. a^2 + 4b <= 0 up to a relative tolerance.
inline bool is_conjugate_pair(const TwoStepCoefficients& c,
                              double tol = kConjugateTol) {
  return discriminant(c) <= tol * discriminant_scale(c);
}

/// Roots of z^2 - a z - b. A discriminant inside the conjugate-pair
/// tolerance band is treated as zero, so eigenvalues and eligibility never
/// disagree. lambda1 is the root with Im >= 0 (complex case) or with the
/// larger modulus (real case).
inline ComplexPair eigenvalues_2x2(const TwoStepCoefficients& c,
                                   double tol = kConjugateTol) {
  const double disc = discriminant(c);
  if (disc < 0.0) {
    const double re = 0.5 * c.a;
    const double im = 0.5 * std::sqrt(-disc);
    return {Complex(re, im), Complex(re, -im)};
  }
  if (disc <= tol * discriminant_scale(c)) {
    return {Complex(0.5 * c.a, 0.0), Complex(0.5 * c.a, 0.0)};
  }
  // Stable real roots: the large one by the quadratic formula, the small one
  // from the product r1 r2 = -b.
  const double sq = std::sqrt(disc);
  const double r1 = 0.5 * (c.a + std::copysign(sq, c.a));
  const double r2 = (r1 != 0.0) ? -c.b / r1 : 0.0;
  return {Complex(r1, 0.0), Complex(r2, 0.0)};
}

/// Explicit Schur factorization M = U T U^* built from the eigenvector
/// (lambda1, 1). Requires a conjugate pair.
inline SchurFactors schur_2x2(const TwoStepCoefficients& c,
                              double tol = kConjugateTol) {
  if (!is_conjugate_pair(c, tol)) {
    throw Ineligible("schur_2x2 needs a^2 + 4b <= 0 (a=" + std::to_string(c.a) +
                     ", b=" + std::to_string(c.b) + ")");
  }
  const ComplexPair eig = eigenvalues_2x2(c, tol);
  const Complex l1 = eig.lambda1;
  const double norm = std::sqrt(1.0 + std::norm(l1));

  SchurFactors f;
  f.U << l1 / norm, 1.0 / norm, Complex(1.0) / norm, -std::conj(l1) / norm;

  const Eigen::Matrix2cd m = companion_matrix(c).cast<Complex>();
  const Eigen::Vector2cd u1 = f.U.col(0);
  const Eigen::Vector2cd u2 = f.U.col(1);
  f.T(0, 0) = eig.lambda1;
  f.T(1, 1) = eig.lambda2;
  f.T(1, 0) = Complex(0.0, 0.0);
  f.T(0, 1) = u1.dot(m * u2);  // dot() conjugates its first argument
  return f;
}

}  // namespace lyap
