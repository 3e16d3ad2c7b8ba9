#pragma once

// Coordinate-wise spectral certificate for a method on a quadratic: the
// 2d x 2d iteration matrix is block diagonal (after a permutation) in the
// eigenbasis of W, so each eigenvalue of W is analyzed on its own.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lyap/methods.hpp"
#include "lyap/spectral.hpp"

namespace lyap {

struct CoordinateRecord {
  double lambda_w = 0.0;
  TwoStepCoefficients coeffs;
  ComplexPair eigenpair;
  bool conjugate_pair = false;
  double rate = 0.0;  // max |eigenvalue| of the 2x2 block
};

struct SpectralCertificate {
  std::vector<CoordinateRecord> per_coordinate;
  double spectral_radius = 0.0;
  // Every block has a conjugate pair and the spectral radius is < 1.
  bool eligible = false;

  std::size_t conjugate_count() const {
    return static_cast<std::size_t>(std::count_if(
        per_coordinate.begin(), per_coordinate.end(),
        [](const CoordinateRecord& r) { return r.conjugate_pair; }));
  }
};

inline SpectralCertificate analyze(const MethodSpec& spec,
                                   const Eigen::VectorXd& eigvals,
                                   double tol = kConjugateTol) {
  SpectralCertificate cert;
  cert.per_coordinate.reserve(static_cast<std::size_t>(eigvals.size()));
  bool all_conjugate = true;
  for (Eigen::Index i = 0; i < eigvals.size(); ++i) {
    CoordinateRecord rec;
    rec.lambda_w = eigvals(i);
    rec.coeffs = scalar_coefficients(spec, rec.lambda_w);
    rec.eigenpair = eigenvalues_2x2(rec.coeffs, tol);
    rec.conjugate_pair = is_conjugate_pair(rec.coeffs, tol);
    rec.rate = rec.eigenpair.max_modulus();
    all_conjugate = all_conjugate && rec.conjugate_pair;
    cert.spectral_radius = std::max(cert.spectral_radius, rec.rate);
    cert.per_coordinate.push_back(rec);
  }
  cert.eligible = all_conjugate && cert.spectral_radius < 1.0;
  return cert;
}

/// CSV with one row per eigenvalue of W. The eigenvalue columns describe
/// lambda1 (the root with Im >= 0, or the larger real root); modulus is the
/// block's spectral radius.
inline void write_certificate_csv(std::ostream& os, const SpectralCertificate& cert) {
  os << "lambda_w,a,b,re,im,modulus,conjugate_pair\n";
  std::ostringstream line;
  line << std::setprecision(17);
  for (const auto& r : cert.per_coordinate) {
    line.str("");
    line << r.lambda_w << ',' << r.coeffs.a << ',' << r.coeffs.b << ','
         << r.eigenpair.lambda1.real() << ',' << r.eigenpair.lambda1.imag() << ','
         << r.rate << ',' << (r.conjugate_pair ? 1 : 0) << '\n';
    os << line.str();
  }
}

inline void write_certificate_report(std::ostream& os, const MethodSpec& spec,
                                     const SpectralCertificate& cert) {
  const std::size_t n = cert.per_coordinate.size();
  os << "method           " << spec.name() << '\n'
     << std::setprecision(10) << "alpha            " << spec.alpha() << '\n'
     << "beta             " << spec.beta() << '\n';
  if (spec.kind() == MethodKind::TMM) os << "gamma            " << spec.gamma() << '\n';
  os << "coordinates      " << n << '\n'
     << "conjugate pairs  " << cert.conjugate_count() << " / " << n << '\n'
     << "spectral radius  " << cert.spectral_radius << '\n';
  if (n > 0) {
    auto [lo, hi] = std::minmax_element(
        cert.per_coordinate.begin(), cert.per_coordinate.end(),
        [](const auto& x, const auto& y) { return x.rate < y.rate; });
    os << "rate range       [" << lo->rate << ", " << hi->rate << "]\n";
  }
  for (const auto& r : cert.per_coordinate) {
    if (!r.conjugate_pair) {
      os << "first real split lambda_w = " << r.lambda_w << " (a=" << r.coeffs.a
         << ", b=" << r.coeffs.b << ")\n";
      break;
    }
  }
  os << "verdict          "
     << (cert.eligible ? "ELIGIBLE: V decreases monotonically on every trajectory"
                       : "NOT ELIGIBLE: no monotonicity guarantee")
     << '\n';
}

}  // namespace lyap
