#include "mirl/potentials.hpp"

#include "mirl/errors.hpp"

namespace mirl {

namespace {

PotentialCatalog make_builtin() {
  PotentialCatalog catalog;
  catalog.add({"quartic",
               [](double x) { return 0.25 * x * x * x * x + 0.5 * x * x; },
               [](double x) { return x * x * x + x; },
               [](double x) { return 3.0 * x * x + 1.0; },
               [](double x) { return 6.0 * x; }});
  catalog.add({"ou",
               [](double x) { return 0.5 * x * x; },
               [](double x) { return x; },
               [](double) { return 1.0; },
               [](double) { return 0.0; }});
  catalog.add({"zero",
               [](double) { return 0.0; },
               [](double) { return 0.0; },
               [](double) { return 0.0; },
               [](double) { return 0.0; }});
  // (x^2 - 1)^2 / 4
  catalog.add({"double_well",
               [](double x) {
                 const double w = x * x - 1.0;
                 return 0.25 * w * w;
               },
               [](double x) { return x * x * x - x; },
               [](double x) { return 3.0 * x * x - 1.0; },
               [](double x) { return 6.0 * x; }});
  return catalog;
}

}  // namespace

const PotentialCatalog& PotentialCatalog::builtin() {
  static const PotentialCatalog catalog = make_builtin();
  return catalog;
}

void PotentialCatalog::add(Potential potential) {
  if (potential.name.empty()) throw ConfigError("potential name must not be empty");
  if (!potential.eval || !potential.grad || !potential.hess) {
    throw ConfigError("potential '" + potential.name + "' needs eval, grad and hess");
  }
  auto name = potential.name;
  entries_.insert_or_assign(std::move(name), std::move(potential));
}

const Potential& PotentialCatalog::lookup(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    std::string valid;
    for (const auto& [key, _] : entries_) {
      if (!valid.empty()) valid += ", ";
      valid += key;
    }
    throw ConfigError("unknown potential '" + name + "'; valid keys: " + valid);
  }
  return it->second;
}

bool PotentialCatalog::contains(const std::string& name) const {
  return entries_.contains(name);
}

std::vector<std::string> PotentialCatalog::keys() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [key, _] : entries_) out.push_back(key);
  return out;
}

const Potential& lookup(const std::string& name) {
  return PotentialCatalog::builtin().lookup(name);
}

}  // namespace mirl
