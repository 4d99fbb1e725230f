#include "mirl/stats.hpp"

#include <cmath>

#include "mirl/errors.hpp"

namespace mirl {

namespace {

constexpr std::size_t kPairwiseBlock = 32;

double pairwise_sum_impl(const double* data, std::size_t n) {
  if (n <= kPairwiseBlock) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double sample_covariance(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n != b.size()) throw UsageError("sample_covariance: length mismatch");
  if (n < 2) return 0.0;
  const double ma = mean(a);
  const double mb = mean(b);
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = (a[i] - ma) * (b[i] - mb);
  return pairwise_sum(prod) / static_cast<double>(n - 1);
}

double sample_variance(std::span<const double> values) {
  return sample_covariance(values, values);
}

double standard_error(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::sqrt(sample_variance(values) / static_cast<double>(values.size()));
}

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = at(i);
  return out;
}

void UniformGrid::validate() const {
  if (!(lo < hi)) throw ConfigError("grid: lo must be < hi");
  if (count < 2) throw ConfigError("grid: count must be >= 2");
}

}  // namespace mirl
