#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mirl/forward_sim.hpp"
#include "mirl/trajectory_io.hpp"

namespace {

using namespace mirl;

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mirl_io_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(TrajectoryIo, HeaderAndRowCount) {
  const auto traj = simulate_episode(lookup("quartic"), SimConfig{}, 0);
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,t,x,grad,hess");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, traj.states.size());
}

TEST(TrajectoryIo, RoundTripIsLossless) {
  const auto dir = scratch("roundtrip");
  const auto traj = simulate_episode(lookup("quartic"), SimConfig{}, 2);
  write_trajectory_csv(dir / "p.csv", traj);
  const auto back = read_trajectory_csv(dir / "p.csv", 2);
  EXPECT_EQ(back.states, traj.states);
  EXPECT_EQ(back.grad_obs, traj.grad_obs);
  EXPECT_EQ(back.hess_obs, traj.hess_obs);
  EXPECT_EQ(back.increments, traj.increments);
  EXPECT_DOUBLE_EQ(back.dt, traj.dt);
  EXPECT_EQ(back.episode, 2u);
}

TEST(TrajectoryIo, EnsembleWritesFilesAndManifest) {
  const auto dir = scratch("ensemble");
  const SimConfig cfg;
  const auto ens = simulate_ensemble(lookup("ou"), cfg, 3);
  write_ensemble(dir, ens, cfg, "ou");
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(std::filesystem::exists(dir / episode_file_name(i)));
  EXPECT_EQ(episode_file_name(7), "episode_000007.csv");
  std::ifstream in(dir / "manifest.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["potential"], "ou");
  EXPECT_EQ(j["n_paths"], 3);
  EXPECT_EQ(j["files"].size(), 3u);
  EXPECT_TRUE(j.contains("metadata"));
  EXPECT_TRUE(j["metadata"].contains("created_utc"));
}

TEST(TrajectoryIo, ManifestIsReproducibleOutsideMetadata) {
  const SimConfig cfg;
  const auto ens = simulate_ensemble(lookup("ou"), cfg, 2);
  const auto a = scratch("repro_a");
  const auto b = scratch("repro_b");
  write_ensemble(a, ens, cfg, "ou");
  write_ensemble(b, ens, cfg, "ou");
  auto load = [](const std::filesystem::path& p) {
    std::ifstream in(p / "manifest.json");
    auto j = nlohmann::json::parse(in);
    j.erase("metadata");
    return j;
  };
  EXPECT_EQ(load(a), load(b));
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  EXPECT_EQ(slurp(a / episode_file_name(1)), slurp(b / episode_file_name(1)));
}

}  // namespace
