#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "mirl/errors.hpp"
#include "svg.hpp"

namespace {

using namespace mirl;
using namespace mirl::cli;

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mirl_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(Config, ParsesKeyValueText) {
  RawConfig raw;
  raw.merge_text(
      "# experiment\n"
      "potential = ou   # trailing comment\n"
      "\n"
      "  sim.dt=5e-4\n"
      "chain.reuse_ensemble = true\n"
      "grid.count = 5\n");
  const auto cfg = resolve(raw);
  EXPECT_EQ(cfg.potential, "ou");
  EXPECT_EQ(cfg.sim.dt, 5e-4);
  EXPECT_TRUE(cfg.chain.reuse_ensemble);
  EXPECT_EQ(cfg.grid.points().size(), 5u);
  EXPECT_EQ(cfg.figures.size(), 4u);
}

TEST(Config, Defaults) {
  const auto cfg = resolve(RawConfig{});
  EXPECT_EQ(cfg.potential, "quartic");
  EXPECT_EQ(cfg.n_paths, 5000u);
  EXPECT_EQ(cfg.chain.n_steps, 2000u);
  EXPECT_EQ(cfg.chain.burn_in, 300u);
  EXPECT_EQ(cfg.chain.eta, 0.05);
  EXPECT_EQ(cfg.chain.beta, 4.0);
  EXPECT_EQ(cfg.n_bins, 60u);
  EXPECT_EQ(cfg.grid.count, 21u);
  EXPECT_FALSE(cfg.validate_only);
}

TEST(Config, Errors) {
  RawConfig raw;
  EXPECT_THROW(raw.merge_text("nosuch.key = 1\n"), ConfigError);
  EXPECT_THROW(raw.merge_text("sim.dt 0.1\n"), ConfigError);
  EXPECT_THROW(raw.merge_file("/nonexistent/mirl.cfg"), ConfigError);
  auto bad = [](const std::string& key, const std::string& value) {
    RawConfig r;
    r.set(key, value);
    return resolve(r);
  };
  EXPECT_THROW(bad("grid.lo", "2"), ConfigError);
  EXPECT_THROW(bad("grid.count", "1"), ConfigError);
  EXPECT_THROW(bad("sim.dt", "abc"), ConfigError);
  EXPECT_THROW(bad("sim.seed", "-4"), ConfigError);
  EXPECT_THROW(bad("sim.init", "cauchy"), ConfigError);
  EXPECT_THROW(bad("figures", "grad_sweep,pie"), ConfigError);
  EXPECT_THROW(bad("potential", "cubic"), ConfigError);
  EXPECT_THROW(bad("chain.degenerate_policy", "skip"), ConfigError);
}

TEST(Config, InitLaws) {
  RawConfig raw;
  raw.set("sim.init", "uniform");
  raw.set("sim.init_lo", "-2");
  const auto u = std::get<UniformInit>(resolve(raw).sim.init);
  EXPECT_EQ(u.lo, -2.0);
  EXPECT_EQ(u.hi, 1.0);
  raw.set("sim.init", "point");
  raw.set("sim.init_x", "0.25");
  EXPECT_EQ(std::get<PointInit>(resolve(raw).sim.init).x, 0.25);
}

TEST(Config, ValidateSelection) {
  RawConfig raw;
  raw.set("validate.only", " , ");
  const auto cfg = resolve(raw);
  ASSERT_TRUE(cfg.validate_only);
  EXPECT_TRUE(cfg.validate_only->empty());
  EXPECT_THROW(cmd_validate(cfg), UsageError);
}

TEST(Svg, RendersSeriesAndBreaksOnNan) {
  LinePlot plot{"t & <title>", "x", "y", {}};
  plot.series.push_back({"a", "#000", {0, 1, 2, 3, 4}, {0, 1, std::nan(""), 3, 4}});
  const auto svg = render_svg(plot);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("t &amp; &lt;title&gt;"), std::string::npos);
  std::size_t polylines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) {
    ++polylines;
  }
  EXPECT_EQ(polylines, 2u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Svg, NiceTicks) {
  const auto t = nice_ticks(-1.0, 1.0);
  ASSERT_FALSE(t.empty());
  EXPECT_DOUBLE_EQ(t.front(), -1.0);
  EXPECT_NEAR(t.back(), 1.0, 1e-12);
}

TEST(Commands, SimulateSingleEpisode) {
  RawConfig raw;
  raw.set("sim.n_paths", "1");
  raw.set("outputs", scratch("sim").string());
  const auto cfg = resolve(raw);
  EXPECT_EQ(cmd_simulate(cfg).size(), 1u);
  EXPECT_TRUE(std::filesystem::exists(cfg.outputs / "episode_000000.csv"));
  EXPECT_TRUE(std::filesystem::exists(cfg.outputs / "manifest.json"));
}

TEST(Commands, SimulateRejectsBadDtBeforeWriting) {
  RawConfig raw;
  raw.set("sim.dt", "0.9");
  raw.set("outputs", scratch("baddt").string());
  const auto cfg = resolve(raw);
  EXPECT_THROW(cmd_simulate(cfg), ConfigError);
  EXPECT_FALSE(std::filesystem::exists(cfg.outputs));
}

TEST(Commands, EstimateGradientTwoPointOu) {
  RawConfig raw;
  raw.set("potential", "ou");
  raw.set("sim.n_paths", "20000");
  raw.set("grid.lo", "-0.5");
  raw.set("grid.hi", "0.5");
  raw.set("grid.count", "2");
  raw.set("outputs", scratch("grad").string());
  const auto cfg = resolve(raw);
  const auto rows = cmd_estimate_gradient(cfg);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    ASSERT_FALSE(r.estimate.degenerate);
    EXPECT_EQ(r.truth, r.estimate.alpha);
    EXPECT_LE(std::abs(r.estimate.ratio - r.estimate.alpha), 3 * r.estimate.ratio_stderr);
  }
  const auto g = lines(cfg.outputs / "gradient.csv");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0], "alpha,estimate,true,stderr,degenerate");
  const auto s = lines(cfg.outputs / "gradient_stats.csv");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], "alpha,ratio,num_mean,den_mean,num_stderr,den_stderr,n_active,degenerate");
  EXPECT_TRUE(std::filesystem::exists(cfg.outputs / "grad_sweep.svg"));

  const std::string first = slurp(cfg.outputs / "gradient.csv");
  cmd_estimate_gradient(cfg);
  EXPECT_EQ(slurp(cfg.outputs / "gradient.csv"), first);
}

TEST(Commands, RunIrlSmoke) {
  RawConfig raw;
  raw.set("chain.n_steps", "10");
  raw.set("chain.burn_in", "2");
    raw.set("outputs", scratch("irl").string());
  const auto cfg = resolve(raw);
  const auto s = cmd_run_irl(cfg);
  EXPECT_EQ(s.run.retained.size(), 8u);
  const auto chain = lines(cfg.outputs / "chain.csv");
  ASSERT_EQ(chain.size(), 11u);
  EXPECT_EQ(chain[0], "k,alpha,grad_ratio,grad_true_if_known,degenerate,clipped");
  const auto hist = lines(cfg.outputs / "histogram.csv");
  ASSERT_EQ(hist.size(), 61u);
  EXPECT_EQ(hist[0], "bin_lo,bin_hi,density,loss_hat");
  for (const char* svg : {"chain_grads.svg", "gibbs_hist.svg", "loss_recon.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(cfg.outputs / svg)) << svg;
  }
  std::ifstream in(cfg.outputs / "summary.json");
  auto j = nlohmann::json::parse(in);
  for (const char* key : {"ks_distance", "loss_sup_error", "clip_count", "eta", "beta"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["metadata"].contains("runtime_seconds"));

  const std::string chain_text = slurp(cfg.outputs / "chain.csv");
  const std::string hist_text = slurp(cfg.outputs / "histogram.csv");
  cmd_run_irl(cfg);
  EXPECT_EQ(slurp(cfg.outputs / "chain.csv"), chain_text);
  EXPECT_EQ(slurp(cfg.outputs / "histogram.csv"), hist_text);
  std::ifstream again(cfg.outputs / "summary.json");
  auto j2 = nlohmann::json::parse(again);
  j.erase("metadata");
  j2.erase("metadata");
  EXPECT_EQ(j, j2);
}

TEST(Commands, FigureSubset) {
  RawConfig raw;
  raw.set("chain.n_steps", "5");
  raw.set("chain.burn_in", "0");
    raw.set("figures", "loss_recon");
  raw.set("outputs", scratch("subset").string());
  const auto cfg = resolve(raw);
  cmd_run_irl(cfg);
  EXPECT_TRUE(std::filesystem::exists(cfg.outputs / "loss_recon.svg"));
  EXPECT_FALSE(std::filesystem::exists(cfg.outputs / "chain_grads.svg"));
}

}  // namespace
