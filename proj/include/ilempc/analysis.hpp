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

#ifndef ILEMPC_ANALYSIS_HPP
#define ILEMPC_ANALYSIS_HPP

#include <vector>

#include "ilempc/controller.hpp"

namespace ilempc {

/// Continuous storage function candidate with gradient.
struct StorageFunction {
  std::function<double(const StateVector&)> value;
  std::function<Vector(const StateVector&)> gradient;

  static StorageFunction Zero();
  /// lambda(x) = x'Px + q'x + c.
  static StorageFunction Quadratic(const Matrix& P, const Vector& q, double c = 0.0);
};

/// Rotated cost L(x, u) = l(x, u) - lambda(f(x, u)) + lambda(x), with
/// gradients assembled from the model Jacobians. Time index passes through.
StageCost rotated_cost(const StageCost& l, const StorageFunction& lambda,
                       const PlantModel& model);

struct GridSpec {
  int points_per_state_dim = 5;
  int points_per_control_dim = 5;
};

struct DissipativityReport {
  double min_value = 0.0;
  StateVector argmin_state;
  ControlVector argmin_control;
  bool verdict = false;
  long samples = 0;
  /// Sampled check only; no global claim is made.
  double grid_cell_halfwidth = 0.0;
};

/// Samples L on a uniform grid over the model boxes. Verdict: min >= -1e-8
/// and the grid argmin within one grid cell of the declared steady state.
DissipativityReport check_dissipativity(const StageCost& l, const StorageFunction& lambda,
                                        const PlantModel& model, const GridSpec& grid);

/// Least-squares search for a quadratic-plus-linear storage function pushing
/// the rotated cost nonnegative on the sample grid. A best-effort oracle, not
/// a certificate.
StorageFunction fit_storage_function(const StageCost& l, const PlantModel& model,
                                     const GridSpec& grid, double margin = 1e-6,
                                     int max_iterations = 400);

struct EquivalenceReport {
  double control_distance = 0.0;       // max |u1* - u2*| over the window
  double objective_gap = 0.0;          // rotated optimum minus base optimum
  double predicted_gap = 0.0;          // lambda(x_init) - lambda(x_term)
  double gap_error = 0.0;              // |objective_gap - predicted_gap|
  NlpSolution base_solution;
  NlpSolution rotated_solution;
};

/// Solves the window problem with both the base cost and its rotation under
/// identical constraints; the objectives must differ by
/// lambda(x_init) - lambda(x_term) and the minimizers must agree.
EquivalenceReport rotated_equivalence(NlpSolver& solver, const NlpProblem& problem,
                                      const StorageFunction& lambda,
                                      const std::vector<ControlVector>& warm_start);

/// Compensated partial sum of the stage cost over [0, T).
double cumulative_cost(const Trajectory& traj, const StageCost& l, long T);

struct WindowAverageReport {
  double mean = 0.0;
  double trailing_max = 0.0;  // limsup estimate over trailing averages
  double trailing_min = 0.0;  // liminf estimate
  long window_begin = 0;
  long window_end = 0;
};

/// Mean of the stage cost over [begin, end), plus max/min of the trailing
/// running-average sequence as limsup/liminf estimates.
WindowAverageReport window_average(const Trajectory& traj, const StageCost& l,
                                   long begin, long end);

struct RecedingHorizonReport {
  double max_improvement = 0.0;
  long worst_k = -1;
  bool verdict = false;
  std::vector<double> improvements;
};

/// For each k in [k_begin, k_end]: re-solves the N-step window with both
/// endpoints pinned to the trajectory's own states and measures the cost
/// improvement. Verdict true iff max improvement <= tol.
RecedingHorizonReport check_receding_horizon_optimality(
    NlpSolver& solver, const Trajectory& traj, int N, const StageCost& l,
    const PlantModel& model, long k_begin, long k_end, double tol = 1e-5);

struct ConvergenceReport {
  std::vector<double> state_distances;   // pair (j, j+1) -> max over the window
  std::vector<double> cost_deltas;       // |metric_{j+1} - metric_j|
  int converged_at = -1;                 // first pair index below both thresholds
  double state_tol = 1e-5;
  double cost_tol = 1e-6;
};

/// Inter-iteration distances over a shared window. `metrics` must hold one
/// scalar per record (cumulative J or window average, per scenario).
ConvergenceReport iteration_convergence(const std::vector<Trajectory>& trajectories,
                                        const std::vector<double>& metrics, long window_end,
                                        double state_tol = 1e-5, double cost_tol = 1e-6);

}  // namespace ilempc

#endif  // ILEMPC_ANALYSIS_HPP
