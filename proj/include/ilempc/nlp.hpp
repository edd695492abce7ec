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

#ifndef ILEMPC_NLP_HPP
#define ILEMPC_NLP_HPP

#include <optional>
#include <ostream>
#include <vector>

#include "ilempc/stage_cost.hpp"
#include "ilempc/trajectory.hpp"

namespace ilempc {

/// Vector-valued output y = h(x, u) with Jacobians; used by summed-output
/// (average) constraints.
struct OutputMap {
  int dim = 0;  // p
  std::function<Vector(const StateVector&, const ControlVector&)> value;
  StepJacobian jac_state;    // p x n
  StepJacobian jac_control;  // p x m
};

/// Membership constraint sum_{i=0}^{N-1} h(x_i, u_i) - offset in base.
struct SummedOutputConstraint {
  OutputMap output;
  BoxSet base;    // Y0
  Vector offset;  // d
};

/// Finite-horizon optimal-control problem over a control sequence under
/// single shooting: minimize sum_{i=0}^{N-1} l(start_time+i, x_i, u_i) with
/// x_0 = initial_state, the dynamics implicit in the rollout, componentwise
/// box constraints, an optional terminal equality x_N = terminal_state and an
/// optional summed-output membership constraint.
struct NlpProblem {
  PlantModel model;
  StageCost cost;
  long start_time = 0;
  int horizon = 0;  // N >= 1
  StateVector initial_state;
  std::optional<StateVector> terminal_state;
  std::optional<SummedOutputConstraint> summed_output;
};

enum class SolveStatus { kConverged, kMaxIterations, kInfeasibleStart };

const char* to_string(SolveStatus status);

struct NlpSolution {
  std::vector<ControlVector> controls;  // u*(0..N-1)
  std::vector<StateVector> states;      // x*(0..N); x*(N) snapped to the target
  double objective = 0.0;
  double stationarity_residual = 0.0;  // projected-gradient infinity norm
  double terminal_residual = 0.0;       // pre-snap ||x*(N) - x_term||_inf
  double state_box_violation = 0.0;
  double output_residual = 0.0;         // distance of the summed output to its box
  int outer_iterations = 0;
  int inner_iterations = 0;
  SolveStatus status = SolveStatus::kMaxIterations;
};

struct SolverOptions {
  double eps_kkt = 1e-8;
  double eps_eq = 1e-7;
  double eps_feas = 1e-6;
  double initial_penalty = 10.0;
  double penalty_growth = 10.0;
  double penalty_cap = 1e10;
  double residual_shrink = 4.0;  // required residual reduction per outer pass
  // The outer loop drives the equality residual to eq_tighten * eps_eq, so a
  // shifted candidate built from the solution stays below eps_eq even after
  // one step of dynamics growth.
  double eq_tighten = 0.25;
  int max_outer = 200;
  int max_inner = 500;
  std::ostream* trace = nullptr;
};

/// Objective of `problem` along the rollout of `controls`.
double evaluate_objective(const NlpProblem& problem,
                          const std::vector<ControlVector>& controls);

/// Gradient of evaluate_objective with respect to every control entry,
/// computed by reverse accumulation through the dynamics.
std::vector<ControlVector> gradient(const NlpProblem& problem,
                                    const std::vector<ControlVector>& controls);

/// Periodic-orbit problem used by the reachable-trajectory oracle: both the
/// initial state and the controls are decision variables, tied by the closure
/// equality x(P) = x(0) + closure_offset.
struct PeriodicProblem {
  PlantModel model;
  StageCost cost;
  int period = 0;
  Vector closure_offset;  // zero for a plain periodic orbit
};

struct PeriodicSolution {
  StateVector initial_state;
  std::vector<ControlVector> controls;
  std::vector<StateVector> states;
  double objective = 0.0;
  double closure_residual = 0.0;
  SolveStatus status = SolveStatus::kMaxIterations;
};

/// Augmented-Lagrangian solver with a projected quasi-Newton inner loop.
///
/// The terminal equality (and the summed-output membership, as clipped-slack
/// equalities) is handled by the outer loop; control boxes by exact
/// projection; state boxes by penalty terms promoted to multiplier terms when
/// violated. From a feasible warm start the returned objective is never worse
/// than the warm start's (monotone-descent contract).
///
/// A solver instance owns mutable workspace: confine each instance to one
/// thread; run distinct instances concurrently on distinct problems.
class NlpSolver {
 public:
  explicit NlpSolver(SolverOptions options = {});

  /// Requires a warm start whose rollout satisfies every constraint within
  /// eps_feas (status kInfeasibleStart otherwise).
  NlpSolution solve(const NlpProblem& problem,
                    const std::vector<ControlVector>& warm_start);

  /// Orbit solve for the oracle; the warm start may violate the closure
  /// equality (no descent contract on this path).
  PeriodicSolution solve_periodic(const PeriodicProblem& problem,
                                  const StateVector& x0_guess,
                                  const std::vector<ControlVector>& warm_start);

  const SolverOptions& options() const { return options_; }

  /// Count of solves whose returned objective exceeded the warm start's by
  /// more than 1e-12 (must stay zero; tracked for the acceptance suite).
  long descent_contract_violations() const { return descent_violations_; }

  struct ShootingSpec;   // internal problem form shared by both solve paths
  struct InnerResult;

 private:
  Vector solve_shooting(const ShootingSpec& spec, const Vector& z0, double* objective,
                        double* stationarity, int* outer_used, int* inner_used,
                        SolveStatus* status);

  SolverOptions options_;
  long descent_violations_ = 0;
};

}  // namespace ilempc

#endif  // ILEMPC_NLP_HPP
