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

#ifndef ILEMPC_CONTROLLER_HPP
#define ILEMPC_CONTROLLER_HPP

#include <functional>
#include <optional>
#include <stdexcept>

#include "ilempc/average_constraints.hpp"

namespace ilempc {

/// Raised when a theory-backed guarantee fails numerically (an infeasible
/// shifted warm start, a broken recipe, ...). Deliberately fatal: silent
/// recovery would invalidate the guarantees the learning loop relies on.
class InvariantBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ControllerConfig {
  int horizon = 1;        // N
  long sim_length = 1;    // T_sim, the metric/report window
  int iterations = 1;     // J_max
  double eps_eq = 1e-7;
  double eps_feas = 1e-6;
  double settle_band = 1e-4;  // required tail closeness for hold extensions
  double window_fraction = 0.5;  // trailing window for average metrics
  std::optional<AverageConstraintSpec> average_constraint;
  SolverOptions solver;
};

/// Per-solve row of the average-constraint log.
struct AverageConstraintSample {
  long k = 0;
  Vector h_applied;
  Vector offset;          // d at the time of the solve
  double residual = 0.0;  // window-sum membership violation at the accepted solve
  Vector running_average;
};

struct SolverTotals {
  long outer_iterations = 0;
  long inner_iterations = 0;
  double max_terminal_residual = 0.0;
  double max_warm_start_residual = 0.0;  // worst constraint violation of any warm start
  double max_state_violation = 0.0;
  double max_output_residual = 0.0;
};

/// One learning iteration: closed-loop trajectory plus performance metrics.
struct IterationRecord {
  int iteration = 0;  // j
  Trajectory trajectory;
  std::vector<double> optimal_values;  // V*_j(x_j(k)) per step
  double cumulative_cost = 0.0;        // J_j over the report window
  double window_average = 0.0;         // trailing-window mean of the stage cost
  double trailing_average_max = 0.0;   // limsup estimate (labeled an estimate)
  double trailing_average_min = 0.0;   // liminf estimate
  SolverTotals solver_totals;
  std::vector<AverageConstraintSample> average_samples;
};

/// Window problem for iteration j at time k: initial state x_now, terminal
/// target read from the previous iteration at k+N, scenario cost and boxes.
NlpProblem build_step_problem(const Trajectory& prev, const PlantModel& model,
                              const StageCost& cost, const StateVector& x_now, long k,
                              const ControllerConfig& cfg);

/// Feasible-by-construction warm start for time k+1: the previous solution
/// shifted one step with the previous iteration's control at k+N appended.
std::vector<ControlVector> shifted_candidate(const NlpSolution& solution,
                                             const Trajectory& prev, long k);

/// One receding-horizon step: solve the window problem and apply the first
/// control. An infeasible warm start is an invariant breach and throws.
std::pair<ControlVector, NlpSolution> controller_step(
    NlpSolver& solver, const PlantModel& model, const StageCost& cost, int j, long k,
    const StateVector& x_now, const Trajectory& prev,
    const std::vector<ControlVector>& warm, const ControllerConfig& cfg,
    const Vector* avg_offset = nullptr);

/// Runs one full closed-loop iteration against the previous trajectory.
/// `sim_length` may exceed cfg.sim_length (metrics always use the config
/// window); the returned trajectory carries no extension rule.
IterationRecord run_iteration(NlpSolver& solver, const PlantModel& model,
                              const StageCost& cost, int j, const Trajectory& prev,
                              const ControllerConfig& cfg, long sim_length = -1);

using RecordSink = std::function<void(const IterationRecord&)>;

/// Full learning run: iteration j consumes iteration j-1's trajectory as its
/// only carried state. Records stream through `sink` as they finish.
///
/// Iteration j is simulated for cfg.sim_length + (iterations - j) * horizon
/// steps so every previous-iteration lookup lands on a stored sample; the
/// initial trajectory must answer lookups up to
/// cfg.sim_length + iterations * horizon (through its extension rule).
void run_learning(NlpSolver& solver, const PlantModel& model, const StageCost& cost,
                  const Trajectory& initial, const ControllerConfig& cfg,
                  const RecordSink& sink);

/// Convenience overload collecting the records.
std::vector<IterationRecord> run_learning(NlpSolver& solver, const PlantModel& model,
                                          const StageCost& cost, const Trajectory& initial,
                                          const ControllerConfig& cfg);

/// Metrics of a trajectory under the config's report window; used for the
/// j = 0 (initial trajectory) summary row.
IterationRecord initial_record(const StageCost& cost, const Trajectory& initial,
                               const ControllerConfig& cfg);

}  // namespace ilempc

#endif  // ILEMPC_CONTROLLER_HPP
