#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mirl/estimator.hpp"
#include "mirl/forward_sim.hpp"
#include "mirl/irl_chain.hpp"

namespace mirl::cli {

// Config files are flat `key = value` lines. `#` starts a comment, blank
// lines are skipped, and keys are dotted (`sim.dt`, `chain.eta`). Every key
// can also be given on the command line as `--sim.dt 5e-4`.

struct KeySpec {
  std::string key;
  std::string default_value;
  std::string help;
};

/// Every recognised key with its default.
const std::vector<KeySpec>& key_table();

/// Raw key/value pairs after merging defaults, file and overrides.
class RawConfig {
 public:
  RawConfig();

  /// Throws ConfigError on unknown keys or malformed lines.
  void merge_file(const std::filesystem::path& path);
  void merge_text(const std::string& text, const std::string& origin = "<text>");
  void set(const std::string& key, const std::string& value);

  const std::string& get(const std::string& key) const;
  bool explicitly_set(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> explicit_;
};

struct AlphaGrid {
  double lo = -1.0;
  double hi = 1.0;
  std::size_t count = 21;

  std::vector<double> points() const;
};

struct ExperimentConfig {
  std::string potential = "quartic";
  SimSettings sim;
  std::size_t n_paths = 5000;
  ChainConfig chain;
  std::size_t n_bins = 60;
  EstimatorOptions estimator;
  AlphaGrid grid;
  std::filesystem::path outputs = "out";
  std::vector<std::string> figures;
  std::optional<std::vector<std::string>> validate_only;
  bool corrupt_d_gamma = false;

  bool wants_figure(const std::string& name) const;
};

/// Typed view of a RawConfig. Throws ConfigError on bad values or when
/// grid.lo >= grid.hi or grid.count < 2.
ExperimentConfig resolve(const RawConfig& raw);

const std::vector<std::string>& figure_names();

}  // namespace mirl::cli
