/*
 Copyright 2026 The ilempc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef ILEMPC_SCENARIOS_HPP
#define ILEMPC_SCENARIOS_HPP

#include <map>
#include <string>

#include "ilempc/analysis.hpp"

namespace ilempc {

/// Periodic sequence of target points r(k).
struct ReferenceSignal {
  std::vector<Vector> points;  // one period
  long period() const { return static_cast<long>(points.size()); }
  const Vector& at(long k) const {
    const long p = period();
    return points[static_cast<size_t>(((k % p) + p) % p)];
  }
};

enum class MonotoneMetric { kCumulativeCost, kWindowAverage };

/// Everything needed to reproduce one benchmark experiment.
struct Scenario {
  std::string name;
  PlantModel model;
  StageCost cost;
  ControllerConfig config;
  StateVector x0;
  std::optional<ReferenceSignal> reference;
  MonotoneMetric monotone_metric = MonotoneMetric::kCumulativeCost;

  // Expected outcomes (targets + tolerances); NaN target = no target.
  double expected_final_cost = std::numeric_limits<double>::quiet_NaN();
  double final_cost_tolerance = 0.0;
  int expected_converged_at = -1;

  /// Human-readable parameter echo for reports.
  std::map<std::string, std::string> parameter_echo;
};

/// Names: linear-regulator, nonlinear-regulator, linear-tracker, unicycle,
/// reactor-economic, reactor-convexified. Throws on unknown names.
Scenario make_scenario(const std::string& name);

std::vector<std::string> scenario_names();

/// Feasible initial trajectory per the scenario recipe, verified before
/// return (throws InvariantBreach on a failed gate). Stored over the report
/// window with the scenario's exact extension rule attached.
Trajectory generate_initial_trajectory(const Scenario& scenario);

struct OracleResult {
  double objective = 0.0;
  Trajectory trajectory;
};

/// Single long-horizon solve from x0 with the terminal pinned to the steady
/// state; used as the ground-truth optimum for regulator-type scenarios.
OracleResult oracle_long_horizon(const Scenario& scenario, long T);

/// Best periodic trajectory against the scenario reference (free initial
/// state, closure equality); tracking scenarios only.
OracleResult oracle_optimal_reachable(const Scenario& scenario);

}  // namespace ilempc

#endif  // ILEMPC_SCENARIOS_HPP
