#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mirl {

/// Pairwise (cascade) summation with a fixed split order. The result depends
/// only on the input values, never on how they were produced.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

/// Unbiased sample variance (n - 1 denominator); 0 for fewer than 2 values.
double sample_variance(std::span<const double> values);

/// Unbiased sample covariance of two equally sized sequences.
double sample_covariance(std::span<const double> a, std::span<const double> b);

/// Standard error of the mean, sqrt(var / n).
double standard_error(std::span<const double> values);

/// `count` equally spaced points from lo to hi inclusive.
struct UniformGrid {
  double lo = -1.0;
  double hi = 1.0;
  std::size_t count = 21;

  double step() const noexcept { return (hi - lo) / static_cast<double>(count - 1); }
  double at(std::size_t i) const noexcept {
    return i + 1 == count ? hi : lo + static_cast<double>(i) * step();
  }
  std::vector<double> points() const;
  /// Throws ConfigError unless lo < hi and count >= 2.
  void validate() const;
};

}  // namespace mirl
