#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "mirl/errors.hpp"
#include "mirl/stats.hpp"

namespace {

TEST(Stats, PairwiseSumMatchesExactIntegers) {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  EXPECT_EQ(mirl::pairwise_sum(v), 500500.0);
  EXPECT_EQ(mirl::pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(Stats, PairwiseSumIsAccurateOnSmallTerms) {
  std::vector<double> v(1 << 20, 0.1);
  EXPECT_NEAR(mirl::pairwise_sum(v), 0.1 * (1 << 20), 1e-8);
}

TEST(Stats, MomentsOfKnownSample) {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{2, 4, 6, 8};
  EXPECT_DOUBLE_EQ(mirl::mean(a), 2.5);
  EXPECT_DOUBLE_EQ(mirl::sample_variance(a), 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(mirl::sample_covariance(a, b), 10.0 / 3.0);
  EXPECT_DOUBLE_EQ(mirl::standard_error(a), std::sqrt(5.0 / 3.0 / 4.0));
  EXPECT_EQ(mirl::sample_variance(std::vector<double>{3.0}), 0.0);
}

TEST(Stats, UniformGridEndpointsAreExact) {
  const mirl::UniformGrid g{-1.0, 1.0, 21};
  const auto pts = g.points();
  ASSERT_EQ(pts.size(), 21u);
  EXPECT_EQ(pts.front(), -1.0);
  EXPECT_EQ(pts.back(), 1.0);
  EXPECT_NEAR(pts[10], 0.0, 1e-15);
}

TEST(Stats, UniformGridValidation) {
  EXPECT_THROW((mirl::UniformGrid{1.0, -1.0, 5}.validate()), mirl::ConfigError);
  EXPECT_THROW((mirl::UniformGrid{-1.0, 1.0, 1}.validate()), mirl::ConfigError);
  EXPECT_NO_THROW((mirl::UniformGrid{-1.0, 1.0, 2}.validate()));
}

}  // namespace
