#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mirl/errors.hpp"
#include "mirl/oracle/oracle.hpp"
#include "mirl/stats.hpp"

namespace {

using namespace mirl;

TEST(OracleReport, PassedIffWithinTolerance) {
  EXPECT_TRUE(oracle::OracleReport::make("a", 1.0, 1.05, 0.1).passed);
  EXPECT_FALSE(oracle::OracleReport::make("a", 1.0, 1.2, 0.1).passed);
  EXPECT_FALSE(oracle::OracleReport::make("a", 1.0, std::nan(""), 0.1).passed);
}

TEST(OdeOracle, ClosedForms) {
  const SimConfig cfg;
  const auto ou = simulate_episode(lookup("ou"), cfg, 0);
  const auto o = oracle::ode_malliavin_oracle(ou, 800);
  for (std::size_t k = 0; k <= 800; ++k) {
    EXPECT_NEAR(o[k] / (std::sqrt(2.0) * std::exp(-(0.8 - ou.times[k]))), 1.0, 1e-10);
  }
  const auto zero = simulate_episode(lookup("zero"), cfg, 0);
  for (double v : oracle::ode_malliavin_oracle(zero, 800)) EXPECT_DOUBLE_EQ(v, std::sqrt(2.0));
}

TEST(ThirdDerivativeOracle, VanishesForQuadraticLosses) {
  const SimConfig cfg;
  for (const char* name : {"ou", "zero"}) {
    const auto traj = simulate_episode(lookup(name), cfg, 1);
    for (double v : oracle::third_derivative_oracle(traj, 800, lookup(name))) EXPECT_EQ(v, 0.0);
  }
}

TEST(ThirdDerivativeOracle, NeedsThirdDerivative) {
  Potential p = lookup("quartic");
  p.third.reset();
  const auto traj = simulate_episode(p, SimConfig{}, 0);
  EXPECT_THROW(oracle::third_derivative_oracle(traj, 800, p), UsageError);
}

TEST(GibbsSampler, OuMomentsAreNormal) {
  const auto x = oracle::gibbs_rejection_sampler(lookup("ou"), 1.0, 100000, 1);
  const double m = mean(x);
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  m4 /= n;
  EXPECT_LE(std::abs(m3 / std::pow(m2, 1.5)), 0.05);
  EXPECT_LE(std::abs(m4 / (m2 * m2) - 3.0), 0.1);
}

TEST(GibbsSampler, QuarticVarianceMatchesQuadrature) {
  const auto& q = lookup("quartic");
  const auto x = oracle::gibbs_rejection_sampler(q, 4.0, 100000, 2);
  const auto mom = oracle::gibbs_moments(q, 4.0);
  const double se = std::sqrt((mom.fourth_central - mom.variance * mom.variance) / 100000.0);
  EXPECT_LE(std::abs(sample_variance(x) - mom.variance), 3 * se);
}

TEST(GibbsSampler, ConcentratesAsBetaGrows) {
  const auto& q = lookup("quartic");
  double previous = std::numeric_limits<double>::infinity();
  for (double beta : {1.0, 10.0, 100.0, 1000.0}) {
    const auto x = oracle::gibbs_rejection_sampler(q, beta, 20000, 3);
    const double sd = std::sqrt(sample_variance(x));
    EXPECT_LT(sd, previous) << beta;
    EXPECT_LT(std::abs(mean(x)), 5 * sd / std::sqrt(20000.0) + 1e-12);
    previous = sd;
  }
}

TEST(GibbsSampler, Deterministic) {
  const auto& q = lookup("double_well");
  EXPECT_EQ(oracle::gibbs_rejection_sampler(q, 2.0, 500, 9),
            oracle::gibbs_rejection_sampler(q, 2.0, 500, 9));
}

TEST(ConditionalExpectationOracle, OuIdentity) {
  const SimConfig cfg;
  const auto ens = simulate_ensemble(lookup("ou"), cfg, 20000);
  const double bws[] = {0.2, 0.1, 0.05};
  const auto ce = oracle::conditional_expectation_oracle(ens, 0.3, 800, bws);
  ASSERT_TRUE(ce.extrapolated);
  EXPECT_NEAR(*ce.extrapolated, 0.3, 0.02);
  EXPECT_EQ(ce.per_bandwidth.size(), 3u);
}

TEST(ConditionalExpectationOracle, QuarticTowardTrueGradient) {
  const SimConfig cfg;
  const auto ens = simulate_ensemble(lookup("quartic"), cfg, 20000);
  const double bws[] = {0.4, 0.2, 0.1, 0.05};
  const auto ce = oracle::conditional_expectation_oracle(ens, 0.5, 800, bws);
  ASSERT_TRUE(ce.extrapolated);
  EXPECT_NEAR(*ce.extrapolated, 0.625, 0.03);
  for (const auto& b : ce.per_bandwidth) EXPECT_NEAR(b.value, 0.625, 0.1) << b.bandwidth;
}

TEST(ConditionalExpectationOracle, EmptyNeighbourhoodIsDegenerate) {
  const std::vector<double> x{0.0, 0.1, -0.2};
  const std::vector<double> g{0.0, 0.1, -0.2};
  const double bws[] = {0.1, 0.05};
  const auto ce = oracle::conditional_expectation_oracle(x, g, 50.0, bws);
  for (const auto& b : ce.per_bandwidth) EXPECT_TRUE(b.degenerate);
  EXPECT_FALSE(ce.extrapolated);
}

TEST(Suite, SelectionAndFaultInjection) {
  EXPECT_EQ(oracle::suite_names().size(), 9u);
  oracle::SuiteOptions bad;
  bad.only = {"nope"};
  EXPECT_THROW(oracle::run_suite(bad), UsageError);

  oracle::SuiteOptions opt;
  opt.only = {"d_gamma_vs_third_derivative", "factorization"};
  auto reports = oracle::run_suite(opt);
  ASSERT_EQ(reports.size(), 2u);
  for (const auto& r : reports) EXPECT_TRUE(r.passed) << r.name;

  opt.corrupt_d_gamma = true;
  reports = oracle::run_suite(opt);
  EXPECT_FALSE(reports[1].passed);
  EXPECT_EQ(reports[1].name, "d_gamma_vs_third_derivative");
  EXPECT_TRUE(reports[0].passed);
}

TEST(Suite, ReportJson) {
  const auto file = std::filesystem::temp_directory_path() / "mirl_oracle_report.json";
  oracle::write_report_json(file, {oracle::OracleReport::make("x", 1.0, 1.5, 0.1)});
  std::ifstream in(file);
  const auto j = nlohmann::json::parse(in);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j[0]["name"], "x");
  EXPECT_EQ(j[0]["passed"], false);
  EXPECT_DOUBLE_EQ(j[0]["estimate"].get<double>(), 1.5);
}

}  // namespace
