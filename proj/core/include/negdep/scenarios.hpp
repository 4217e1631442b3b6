#ifndef NEGDEP_SCENARIOS_HPP
#define NEGDEP_SCENARIOS_HPP

#include <functional>
#include <string>
#include <vector>

#include "negdep/mc.hpp"

namespace negdep {

struct RunOptions {
  std::int64_t reps_override = 0;  // 0 = per-check defaults
  std::uint64_t seed = 42;
  int threads = 1;
};

struct ScenarioResult {
  std::string name;
  std::vector<VerificationResult> checks;
  /// Exploratory records never count against the pass status.
  bool all_pass() const;
};

/// A named, seeded verification run. Every reference-sourced claim is
/// encoded as one of these and runnable by name from the CLI.
struct Scenario {
  std::string name;
  std::string description;
  bool exploratory = false;
  std::function<ScenarioResult(const RunOptions&)> run;
};

const std::vector<Scenario>& scenario_catalog();
const Scenario* find_scenario(const std::string& name);
/// Names expanded by "--scenario all" (every non-exploratory scenario).
std::vector<std::string> all_scenario_names();

/// Generic experiment runner behind `simulate --spec`: estimates the
/// configured quantity and attaches the bound checks appropriate to the
/// procedure.
ScenarioResult run_experiment(const ExperimentSpec& spec);

}  // namespace negdep

#endif  // NEGDEP_SCENARIOS_HPP
