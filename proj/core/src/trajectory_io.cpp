#include "mirl/trajectory_io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mirl/errors.hpp"

namespace mirl {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json init_to_json(const InitLaw& law) {
  return std::visit(
      [](const auto& l) -> nlohmann::json {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, GaussianInit>) {
          return {{"law", "gaussian"}, {"mean", l.mean}, {"std", l.std}};
        } else if constexpr (std::is_same_v<L, UniformInit>) {
          return {{"law", "uniform"}, {"lo", l.lo}, {"hi", l.hi}};
        } else {
          return {{"law", "point"}, {"x", l.x}};
        }
      },
      law);
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "k,t,x,grad,hess\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << k << ',' << format_double(traj.times[k]) << ',' << format_double(traj.states[k]) << ','
        << format_double(traj.grad_obs[k]) << ',' << format_double(traj.hess_obs[k]) << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot open " + path.string() + " for writing");
  write_trajectory_csv(out, traj);
}

Trajectory read_trajectory_csv(const std::filesystem::path& path, std::size_t episode) {
  std::ifstream in(path);
  if (!in) throw RuntimeError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "k,t,x,grad,hess") {
    throw RuntimeError(path.string() + ": expected header 'k,t,x,grad,hess'");
  }
  Trajectory traj;
  traj.episode = episode;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field[5];
    for (auto& f : field) {
      if (!std::getline(row, f, ',')) throw RuntimeError(path.string() + ": short row: " + line);
    }
    traj.times.push_back(std::stod(field[1]));
    traj.states.push_back(std::stod(field[2]));
    traj.grad_obs.push_back(std::stod(field[3]));
    traj.hess_obs.push_back(std::stod(field[4]));
  }
  if (traj.states.size() < 2) throw RuntimeError(path.string() + ": need at least two rows");
  traj.dt = traj.times[1] - traj.times[0];
  traj.increments = recover_increments(traj.states, traj.grad_obs, traj.dt);
  return traj;
}

std::string episode_file_name(std::size_t index) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "episode_%06zu.csv", index);
  return buf;
}

void write_ensemble(const std::filesystem::path& run_dir, const std::vector<Trajectory>& ensemble,
                    const SimConfig& config, const std::string& potential_name) {
  std::filesystem::create_directories(run_dir);
  nlohmann::json files = nlohmann::json::array();
  for (const auto& traj : ensemble) {
    const auto name = episode_file_name(traj.episode);
    write_trajectory_csv(run_dir / name, traj);
    files.push_back(name);
  }
  nlohmann::json manifest = {
      {"potential", potential_name},
      {"sim",
       {{"dt", config.dt()},
        {"horizon", config.horizon()},
        {"s", config.s()},
        {"n_steps", config.n_steps()},
        {"s_index", config.s_index()},
        {"init", init_to_json(config.init())},
        {"master_seed", config.master_seed()},
        {"grad_noise_std", config.grad_noise_std()}}},
      {"n_paths", ensemble.size()},
      {"columns", {"k", "t", "x", "grad", "hess"}},
      {"files", files},
      {"warnings", config.warnings()},
      {"metadata", {{"created_utc", utc_timestamp()}}},
  };
  std::ofstream out(run_dir / "manifest.json");
  if (!out) throw RuntimeError("cannot write manifest in " + run_dir.string());
  out << manifest.dump(2) << '\n';
}

}  // namespace mirl
