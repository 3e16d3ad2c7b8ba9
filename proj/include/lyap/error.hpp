#pragma once

#include <stdexcept>
#include <string>

namespace lyap {

/// Vector or matrix arguments whose sizes disagree.
class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& what)
      : std::invalid_argument("dimension mismatch: " + what) {}
};

/// Coefficients whose companion matrix does not have a conjugate
/// eigenvalue pair, where an operation requires one.
class Ineligible : public std::domain_error {
 public:
  explicit Ineligible(const std::string& what)
      : std::domain_error("ineligible: " + what) {}
};

inline void require_same_size(long a, long b, const char* context) {
  if (a != b) {
    throw DimensionMismatch(std::string(context) + " (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
  }
}

}  // namespace lyap
