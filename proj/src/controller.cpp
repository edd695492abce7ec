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

#include "ilempc/controller.hpp"

#include <cmath>
#include <sstream>

namespace ilempc {

namespace {

double kahan_sum(const std::vector<double>& values, size_t begin, size_t end) {
  double total = 0.0, carry = 0.0;
  for (size_t i = begin; i < end; ++i) {
    const double v = values[i] - carry;
    const double t = total + v;
    carry = (t - total) - v;
    total = t;
  }
  return total;
}

}  // namespace

NlpProblem build_step_problem(const Trajectory& prev, const PlantModel& model,
                              const StageCost& cost, const StateVector& x_now, long k,
                              const ControllerConfig& cfg) {
  if (!prev.supports_lookup(k + cfg.horizon)) {
    throw InvariantBreach("build_step_problem: previous trajectory cannot answer index " +
                          std::to_string(k + cfg.horizon));
  }
  NlpProblem problem;
  problem.model = model;
  problem.cost = cost;
  problem.start_time = k;
  problem.horizon = cfg.horizon;
  problem.initial_state = x_now;
  problem.terminal_state = prev.state_at(k + cfg.horizon);
  return problem;
}

std::vector<ControlVector> shifted_candidate(const NlpSolution& solution,
                                             const Trajectory& prev, long k) {
  std::vector<ControlVector> candidate;
  candidate.reserve(solution.controls.size());
  for (size_t i = 1; i < solution.controls.size(); ++i) {
    candidate.push_back(solution.controls[i]);
  }
  const long N = static_cast<long>(solution.controls.size());
  candidate.push_back(prev.control_at(k + N));
  return candidate;
}

std::pair<ControlVector, NlpSolution> controller_step(
    NlpSolver& solver, const PlantModel& model, const StageCost& cost, int j, long k,
    const StateVector& x_now, const Trajectory& prev,
    const std::vector<ControlVector>& warm, const ControllerConfig& cfg,
    const Vector* avg_offset) {
  NlpProblem problem = build_step_problem(prev, model, cost, x_now, k, cfg);
  if (cfg.average_constraint && avg_offset) {
    problem = attach_to_problem(problem, *cfg.average_constraint, *avg_offset);
  }
  NlpSolution solution = solver.solve(problem, warm);
  if (solution.status == SolveStatus::kInfeasibleStart) {
    std::ostringstream msg;
    msg << "infeasible warm start at iteration " << j << ", time " << k
        << ": terminal residual " << solution.terminal_residual << ", box violation "
        << solution.state_box_violation << ", output residual " << solution.output_residual;
    throw InvariantBreach(msg.str());
  }
  return {solution.controls.front(), std::move(solution)};
}

IterationRecord run_iteration(NlpSolver& solver, const PlantModel& model,
                              const StageCost& cost, int j, const Trajectory& prev,
                              const ControllerConfig& cfg, long sim_length) {
  const long T = sim_length < 0 ? cfg.sim_length : sim_length;
  const int N = cfg.horizon;
  // The last solve (k = T-1) reads the previous iteration at k + N.
  if (!prev.supports_lookup(T + N - 1)) {
    throw InvariantBreach("run_iteration: previous trajectory too short for " +
                          std::to_string(T + N - 1) + " lookups");
  }

  IterationRecord record;
  record.iteration = j;
  record.optimal_values.reserve(static_cast<size_t>(T));

  const bool averaged = cfg.average_constraint.has_value();
  std::optional<KahanVector> d_acc;
  std::optional<KahanVector> applied_sum;
  if (averaged) {
    d_acc.emplace(init_offset(prev, cfg.average_constraint->output, N));
    applied_sum.emplace(cfg.average_constraint->output.dim);
    record.average_samples.reserve(static_cast<size_t>(T));
  }

  std::vector<StateVector> states;
  std::vector<ControlVector> controls;
  states.reserve(static_cast<size_t>(T) + 1);
  controls.reserve(static_cast<size_t>(T));
  states.push_back(prev.state_at(0));  // x0 is shared across iterations

  std::vector<ControlVector> warm;
  warm.reserve(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) warm.push_back(prev.control_at(i));

  std::vector<double> stage_values;
  stage_values.reserve(static_cast<size_t>(T));

  for (long k = 0; k < T; ++k) {
    const Vector* d_ptr = averaged ? &d_acc->value() : nullptr;

    // Recursive-feasibility assertion, before every solve: the shifted
    // candidate must satisfy every constraint of the incoming problem.
    {
      StateVector x = states.back();
      double box_violation = 0.0;
      Vector h_sum = averaged ? Vector(Vector::Zero(cfg.average_constraint->output.dim))
                              : Vector();
      for (int i = 0; i < N; ++i) {
        box_violation = std::max(box_violation,
                                 model.control_box.violation(warm[static_cast<size_t>(i)]));
        if (averaged) {
          h_sum += cfg.average_constraint->output.value(x, warm[static_cast<size_t>(i)]);
        }
        x = model.f(x, warm[static_cast<size_t>(i)]);
        box_violation = std::max(box_violation, model.state_box.violation(x));
      }
      const double terminal_gap = (x - prev.state_at(k + N)).lpNorm<Eigen::Infinity>();
      const double output_gap =
          averaged ? cfg.average_constraint->base.violation(h_sum - d_acc->value()) : 0.0;
      const double worst = std::max({box_violation, terminal_gap, output_gap});
      record.solver_totals.max_warm_start_residual =
          std::max(record.solver_totals.max_warm_start_residual, worst);
      if (worst > cfg.eps_feas) {
        std::ostringstream msg;
        msg << "recursive feasibility breached at iteration " << j << ", time " << k
            << ": candidate terminal gap " << terminal_gap << ", box violation "
            << box_violation << ", output gap " << output_gap;
        throw InvariantBreach(msg.str());
      }
    }

    auto [u_applied, solution] =
        controller_step(solver, model, cost, j, k, states.back(), prev, warm, cfg, d_ptr);

    record.optimal_values.push_back(solution.objective);
    record.solver_totals.outer_iterations += solution.outer_iterations;
    record.solver_totals.inner_iterations += solution.inner_iterations;
    record.solver_totals.max_terminal_residual =
        std::max(record.solver_totals.max_terminal_residual, solution.terminal_residual);
    record.solver_totals.max_state_violation =
        std::max(record.solver_totals.max_state_violation, solution.state_box_violation);
    record.solver_totals.max_output_residual =
        std::max(record.solver_totals.max_output_residual, solution.output_residual);

    stage_values.push_back(cost(k, states.back(), u_applied));

    if (averaged) {
      const auto& spec = *cfg.average_constraint;
      const Vector h_applied = spec.output.value(states.back(), u_applied);
      applied_sum->add(h_applied);
      AverageConstraintSample sample;
      sample.k = k;
      sample.h_applied = h_applied;
      sample.offset = d_acc->value();
      sample.residual = solution.output_residual;
      sample.running_average = applied_sum->value() / static_cast<double>(k + 1);
      record.average_samples.push_back(std::move(sample));

      const Vector h_incoming =
          spec.output.value(prev.state_at(k + N), prev.control_at(k + N));
      d_acc->add(-h_applied);
      d_acc->add(h_incoming);
    }

    controls.push_back(u_applied);
    states.push_back(step(model, states.back(), u_applied));

    // Feasible-by-construction candidate for the next step.
    warm = shifted_candidate(solution, prev, k);
  }

  record.trajectory = Trajectory(std::move(states), std::move(controls), Extension::None());

  const long W = cfg.sim_length;
  record.cumulative_cost = kahan_sum(stage_values, 0, static_cast<size_t>(std::min(W, T)));
  const long w_begin = static_cast<long>(std::floor(static_cast<double>(W) *
                                                    (1.0 - cfg.window_fraction)));
  const long w_end = std::min<long>(W, T);
  if (w_begin < w_end) {
    record.window_average = kahan_sum(stage_values, static_cast<size_t>(w_begin),
                                      static_cast<size_t>(w_end)) /
                            static_cast<double>(w_end - w_begin);
    double trail_sum = 0.0;
    double trail_max = -std::numeric_limits<double>::infinity();
    double trail_min = std::numeric_limits<double>::infinity();
    for (long k = w_begin; k < w_end; ++k) {
      trail_sum += stage_values[static_cast<size_t>(k)];
      const double avg = trail_sum / static_cast<double>(k - w_begin + 1);
      trail_max = std::max(trail_max, avg);
      trail_min = std::min(trail_min, avg);
    }
    record.trailing_average_max = trail_max;
    record.trailing_average_min = trail_min;
  }
  return record;
}

void run_learning(NlpSolver& solver, const PlantModel& model, const StageCost& cost,
                  const Trajectory& initial, const ControllerConfig& cfg,
                  const RecordSink& sink) {
  if (cfg.horizon < 1 || cfg.sim_length < cfg.horizon || cfg.iterations < 1) {
    throw std::invalid_argument("run_learning: invalid configuration");
  }
  const FeasibilityReport gate = check_feasible(initial, model, cfg.eps_feas);
  if (!gate.feasible) {
    std::ostringstream msg;
    msg << "run_learning: initial trajectory infeasible (dynamics "
        << gate.max_dynamics_residual << ", state " << gate.max_state_violation
        << ", control " << gate.max_control_violation << ")";
    throw InvariantBreach(msg.str());
  }
  const long deepest =
      cfg.sim_length + static_cast<long>(cfg.iterations) * cfg.horizon - 1;
  if (!initial.supports_lookup(deepest)) {
    throw InvariantBreach("run_learning: initial trajectory cannot answer index " +
                          std::to_string(deepest) +
                          "; attach an extension rule or raise its length");
  }

  // Only the previous iteration's trajectory is carried across iterations.
  Trajectory prev = initial;
  for (int j = 1; j <= cfg.iterations; ++j) {
    const long sim_length =
        cfg.sim_length + static_cast<long>(cfg.iterations - j) * cfg.horizon;
    IterationRecord record = run_iteration(solver, model, cost, j, prev, cfg, sim_length);
    prev = record.trajectory;
    sink(record);
  }
}

std::vector<IterationRecord> run_learning(NlpSolver& solver, const PlantModel& model,
                                          const StageCost& cost, const Trajectory& initial,
                                          const ControllerConfig& cfg) {
  std::vector<IterationRecord> records;
  records.reserve(static_cast<size_t>(cfg.iterations));
  run_learning(solver, model, cost, initial, cfg,
               [&records](const IterationRecord& r) { records.push_back(r); });
  return records;
}

IterationRecord initial_record(const StageCost& cost, const Trajectory& initial,
                               const ControllerConfig& cfg) {
  IterationRecord record;
  record.iteration = 0;
  record.trajectory = initial;
  const long W = std::min<long>(cfg.sim_length, initial.length());
  std::vector<double> stage_values;
  stage_values.reserve(static_cast<size_t>(W));
  for (long k = 0; k < W; ++k) {
    stage_values.push_back(cost(k, initial.state_at(k), initial.control_at(k)));
  }
  record.cumulative_cost = kahan_sum(stage_values, 0, stage_values.size());
  const long w_begin = static_cast<long>(std::floor(static_cast<double>(cfg.sim_length) *
                                                    (1.0 - cfg.window_fraction)));
  if (w_begin < W) {
    record.window_average =
        kahan_sum(stage_values, static_cast<size_t>(w_begin), static_cast<size_t>(W)) /
        static_cast<double>(W - w_begin);
  }
  return record;
}

}  // namespace ilempc
