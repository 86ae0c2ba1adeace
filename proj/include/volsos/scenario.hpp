// Scenario registry: each scenario is a JSON document giving the defining
// polynomial g of K = {g >= 0}, the bounding set B, an optional exact
// volume, and declared connected-component predicates.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volsos/moments.hpp"
#include "volsos/polynomial.hpp"

namespace volsos {

// Membership predicate for one connected component of the interior of K.
// axis < 0 means the component is all of K (the common single-component
// case); otherwise membership requires sign * x[axis] > 0.
struct ComponentPredicate {
  std::string description;
  int axis = -1;
  int sign = 0;

  bool matches(std::span<const double> x) const {
    return axis < 0 || static_cast<double>(sign) * x[axis] > 0.0;
  }
};

struct ScenarioSpec {
  std::string name;
  int n = 0;
  Polynomial g{1};
  BoundingSet bounding;
  std::optional<double> exact_volume;
  std::string notes;
  std::vector<ComponentPredicate> components;  // at least one
};

// Text format for polynomials in config files: a JSON list of terms
// {"coeff": float, "exps": [int,...]}. Negative exponents are rejected.
Polynomial parse_polynomial_json(const std::string& json_text);
std::string polynomial_to_json(const Polynomial& p);

ScenarioSpec parse_scenario_json(const std::string& json_text);
ScenarioSpec load_scenario_file(const std::string& path);

class ScenarioRegistry {
 public:
  // Loads every *.json file in dir.
  static ScenarioRegistry load_directory(const std::string& dir);
  // Directory baked in at configure time, overridable by VOLSOS_SCENARIOS.
  static std::string default_directory();

  const ScenarioSpec& get(const std::string& name) const;
  bool has(const std::string& name) const;
  std::vector<std::string> names() const;  // sorted
  void add(ScenarioSpec s);

 private:
  std::vector<ScenarioSpec> scenarios_;
};

}  // namespace volsos
