#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mirl {

using ScalarFn = std::function<double(double)>;

/// Evaluator bundle for a scalar loss L and its first two derivatives.
///
/// `third` (L''') is carried for validation only. Nothing on the estimation
/// path calls it: the forward learner exposes X, L'(X) and L''(X), and the
/// Malliavin machinery recovers everything else from those observables.
/// All evaluators must be pure so path workers can share a Potential.
struct Potential {
  std::string name;
  ScalarFn eval;
  ScalarFn grad;
  ScalarFn hess;
  std::optional<ScalarFn> third;

  double operator()(double x) const { return eval(x); }
};

/// Named collection of potentials. The built-in catalog holds
/// "quartic", "ou", "zero" and "double_well"; callers can extend a copy.
class PotentialCatalog {
public:
  static const PotentialCatalog& builtin();

  /// Adds or replaces an entry keyed by `potential.name`.
  void add(Potential potential);

  /// Throws ConfigError naming the valid keys when `name` is unknown.
  const Potential& lookup(const std::string& name) const;

  bool contains(const std::string& name) const;
  std::vector<std::string> keys() const;

private:
  std::map<std::string, Potential> entries_;
};

/// Shorthand for PotentialCatalog::builtin().lookup(name).
const Potential& lookup(const std::string& name);

}  // namespace mirl
