#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lyap {

struct SymmetricEigen {
  Eigen::MatrixXd eigvecs;  // columns are eigenvectors
  Eigen::VectorXd eigvals;  // nondecreasing
};

/// Cyclic Jacobi eigendecomposition of a dense symmetric matrix.
/// Throws std::invalid_argument if w is not square or not symmetric to 1e-10
/// (relative to its largest entry).
inline SymmetricEigen symmetric_eigendecomposition(const Eigen::MatrixXd& w,
                                                   int max_sweeps = 100) {
  const Eigen::Index n = w.rows();
  if (n != w.cols()) throw std::invalid_argument("matrix is not square");
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("matrix is not symmetric");
  }

  Eigen::MatrixXd a = 0.5 * (w + w.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  auto off_norm2 = [&] {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < j; ++i) s += a(i, j) * a(i, j);
    return s;
  };
  const double total = std::max(a.squaredNorm(), 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm2() <= 1e-30 * total) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing a(p, q); t = tan(theta), smaller root.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i) < a(j, j);
  });

  SymmetricEigen out;
  out.eigvals.resize(n);
  out.eigvecs.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigvals(k) = a(order[k], order[k]);
    out.eigvecs.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace lyap
