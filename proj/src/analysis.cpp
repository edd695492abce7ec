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

#include "ilempc/analysis.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace ilempc {

StorageFunction StorageFunction::Zero() {
  StorageFunction s;
  s.value = [](const StateVector&) { return 0.0; };
  s.gradient = [](const StateVector& x) { return Vector(Vector::Zero(x.size())); };
  return s;
}

StorageFunction StorageFunction::Quadratic(const Matrix& P, const Vector& q, double c) {
  StorageFunction s;
  s.value = [P, q, c](const StateVector& x) { return x.dot(P * x) + q.dot(x) + c; };
  s.gradient = [P, q](const StateVector& x) {
    return Vector((P + P.transpose()) * x + q);
  };
  return s;
}

StageCost rotated_cost(const StageCost& l, const StorageFunction& lambda,
                       const PlantModel& model) {
  StageCost L;
  L.value = [l, lambda, model](long k, const StateVector& x, const ControlVector& u) {
    return l.value(k, x, u) - lambda.value(model.f(x, u)) + lambda.value(x);
  };
  L.grad_x = [l, lambda, model](long k, const StateVector& x, const ControlVector& u) {
    const Vector gl = lambda.gradient(model.f(x, u));
    return Vector(l.grad_x(k, x, u) - model.f_x(x, u).transpose() * gl + lambda.gradient(x));
  };
  L.grad_u = [l, lambda, model](long k, const StateVector& x, const ControlVector& u) {
    const Vector gl = lambda.gradient(model.f(x, u));
    return Vector(l.grad_u(k, x, u) - model.f_u(x, u).transpose() * gl);
  };
  return L;
}

namespace {

// Uniform grid iterator over a bounded box.
std::vector<Vector> grid_points(const BoxSet& box, int points) {
  const int dim = static_cast<int>(box.dim());
  std::vector<Vector> out;
  std::vector<int> idx(static_cast<size_t>(dim), 0);
  const long total = static_cast<long>(std::pow(points, dim));
  out.reserve(static_cast<size_t>(total));
  for (long t = 0; t < total; ++t) {
    Vector v(dim);
    long rest = t;
    for (int i = 0; i < dim; ++i) {
      const int step = static_cast<int>(rest % points);
      rest /= points;
      v[i] = points == 1 ? 0.5 * (box.lower[i] + box.upper[i])
                         : box.lower[i] + (box.upper[i] - box.lower[i]) * step / (points - 1);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

DissipativityReport check_dissipativity(const StageCost& l, const StorageFunction& lambda,
                                        const PlantModel& model, const GridSpec& grid) {
  if (!model.state_box.bounded() || !model.control_box.bounded()) {
    throw std::invalid_argument("check_dissipativity: needs bounded boxes to sample");
  }
  if (!model.steady_state) {
    throw std::invalid_argument("check_dissipativity: model declares no steady state");
  }
  const StageCost L = rotated_cost(l, lambda, model);
  const auto xs_grid = grid_points(model.state_box, grid.points_per_state_dim);
  const auto us_grid = grid_points(model.control_box, grid.points_per_control_dim);

  DissipativityReport report;
  report.min_value = std::numeric_limits<double>::infinity();
  for (const auto& x : xs_grid) {
    for (const auto& u : us_grid) {
      const double v = L.value(0, x, u);
      ++report.samples;
      if (v < report.min_value) {
        report.min_value = v;
        report.argmin_state = x;
        report.argmin_control = u;
      }
    }
  }

  // One grid cell per dimension, with a little slack for ties.
  bool near = true;
  const auto& [xs, us] = *model.steady_state;
  for (int i = 0; i < model.state_dim; ++i) {
    const double cell = grid.points_per_state_dim <= 1
                            ? (model.state_box.upper[i] - model.state_box.lower[i])
                            : (model.state_box.upper[i] - model.state_box.lower[i]) /
                                  (grid.points_per_state_dim - 1);
    near = near && std::abs(report.argmin_state[i] - xs[i]) <= cell * 1.0001;
    report.grid_cell_halfwidth = std::max(report.grid_cell_halfwidth, 0.5 * cell);
  }
  for (int i = 0; i < model.control_dim; ++i) {
    const double cell = grid.points_per_control_dim <= 1
                            ? (model.control_box.upper[i] - model.control_box.lower[i])
                            : (model.control_box.upper[i] - model.control_box.lower[i]) /
                                  (grid.points_per_control_dim - 1);
    near = near && std::abs(report.argmin_control[i] - us[i]) <= cell * 1.0001;
  }
  report.verdict = report.min_value >= -1e-8 && near;
  return report;
}

StorageFunction fit_storage_function(const StageCost& l, const PlantModel& model,
                                     const GridSpec& grid, double margin,
                                     int max_iterations) {
  if (!model.state_box.bounded() || !model.control_box.bounded()) {
    throw std::invalid_argument("fit_storage_function: needs bounded boxes to sample");
  }
  const int n = model.state_dim;
  const int np = n * (n + 1) / 2;
  const int dim = np + n;

  const auto xs_grid = grid_points(model.state_box, grid.points_per_state_dim);
  const auto us_grid = grid_points(model.control_box, grid.points_per_control_dim);

  // L_i(theta) = l_i + a_i' theta is linear in the quadratic/linear
  // coefficients; push the violated samples up by reweighted least squares.
  std::vector<Vector> features;
  std::vector<double> base;
  features.reserve(xs_grid.size() * us_grid.size());
  auto feature_of = [&](const StateVector& x, const StateVector& fx) {
    Vector a(dim);
    int at = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        a[at++] = x[i] * x[j] - fx[i] * fx[j];
      }
    }
    for (int i = 0; i < n; ++i) a[np + i] = x[i] - fx[i];
    return a;
  };
  for (const auto& x : xs_grid) {
    for (const auto& u : us_grid) {
      features.push_back(feature_of(x, model.f(x, u)));
      base.push_back(l.value(0, x, u));
    }
  }

  Vector theta = Vector::Zero(dim);
  const double reg = 1e-9;
  for (int it = 0; it < max_iterations; ++it) {
    Matrix AtA = reg * Matrix::Identity(dim, dim);
    Vector Atb = Vector::Zero(dim);
    long active = 0;
    for (size_t i = 0; i < features.size(); ++i) {
      const double Li = base[i] + features[i].dot(theta);
      if (Li < margin) {
        AtA += features[i] * features[i].transpose();
        Atb += features[i] * (margin - base[i]);
        ++active;
      }
    }
    if (active == 0) break;
    const Vector next = AtA.ldlt().solve(Atb);
    if ((next - theta).lpNorm<Eigen::Infinity>() <= 1e-12) {
      theta = next;
      break;
    }
    theta = next;
  }

  Matrix P = Matrix::Zero(n, n);
  int at = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // theta holds the coefficient of x_i x_j; split across the symmetric pair.
      if (i == j) {
        P(i, j) = theta[at];
      } else {
        P(i, j) = 0.5 * theta[at];
        P(j, i) = 0.5 * theta[at];
      }
      ++at;
    }
  }
  return StorageFunction::Quadratic(P, theta.segment(np, n));
}

EquivalenceReport rotated_equivalence(NlpSolver& solver, const NlpProblem& problem,
                                      const StorageFunction& lambda,
                                      const std::vector<ControlVector>& warm_start) {
  if (!problem.terminal_state) {
    throw std::invalid_argument("rotated_equivalence: problem has no terminal target");
  }
  EquivalenceReport report;
  report.base_solution = solver.solve(problem, warm_start);

  NlpProblem rotated = problem;
  rotated.cost = rotated_cost(problem.cost, lambda, problem.model);
  report.rotated_solution = solver.solve(rotated, warm_start);

  for (size_t i = 0; i < report.base_solution.controls.size(); ++i) {
    report.control_distance = std::max(
        report.control_distance, (report.base_solution.controls[i] -
                                  report.rotated_solution.controls[i])
                                     .lpNorm<Eigen::Infinity>());
  }
  // Telescoping: sum L = sum l + lambda(x_init) - lambda(x_term) on the
  // constraint manifold, so the rotated optimum differs by exactly that.
  report.objective_gap = report.rotated_solution.objective - report.base_solution.objective;
  report.predicted_gap =
      lambda.value(problem.initial_state) - lambda.value(*problem.terminal_state);
  report.gap_error = std::abs(report.objective_gap - report.predicted_gap);
  return report;
}

double cumulative_cost(const Trajectory& traj, const StageCost& l, long T) {
  if (T > traj.length() && traj.extension().kind == Extension::Kind::kNone) {
    throw std::out_of_range("cumulative_cost: window exceeds the stored horizon");
  }
  double total = 0.0, carry = 0.0;
  for (long k = 0; k < T; ++k) {
    const double v = l.value(k, traj.state_at(k), traj.control_at(k)) - carry;
    const double t = total + v;
    carry = (t - total) - v;
    total = t;
  }
  return total;
}

WindowAverageReport window_average(const Trajectory& traj, const StageCost& l,
                                   long begin, long end) {
  if (begin >= end) throw std::invalid_argument("window_average: empty window");
  WindowAverageReport report;
  report.window_begin = begin;
  report.window_end = end;
  double sum = 0.0;
  report.trailing_max = -std::numeric_limits<double>::infinity();
  report.trailing_min = std::numeric_limits<double>::infinity();
  for (long k = begin; k < end; ++k) {
    sum += l.value(k, traj.state_at(k), traj.control_at(k));
    const double avg = sum / static_cast<double>(k - begin + 1);
    report.trailing_max = std::max(report.trailing_max, avg);
    report.trailing_min = std::min(report.trailing_min, avg);
  }
  report.mean = sum / static_cast<double>(end - begin);
  return report;
}

RecedingHorizonReport check_receding_horizon_optimality(
    NlpSolver& solver, const Trajectory& traj, int N, const StageCost& l,
    const PlantModel& model, long k_begin, long k_end, double tol) {
  RecedingHorizonReport report;
  report.improvements.reserve(static_cast<size_t>(std::max<long>(0, k_end - k_begin + 1)));
  for (long k = k_begin; k <= k_end; ++k) {
    NlpProblem problem;
    problem.model = model;
    problem.cost = l;
    problem.start_time = k;
    problem.horizon = N;
    problem.initial_state = traj.state_at(k);
    problem.terminal_state = traj.state_at(k + N);

    std::vector<ControlVector> window;
    window.reserve(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) window.push_back(traj.control_at(k + i));

    const double window_cost = evaluate_objective(problem, window);
    const NlpSolution sol = solver.solve(problem, window);
    const double improvement = window_cost - sol.objective;
    report.improvements.push_back(improvement);
    if (improvement > report.max_improvement) {
      report.max_improvement = improvement;
      report.worst_k = k;
    }
  }
  report.verdict = report.max_improvement <= tol;
  return report;
}

ConvergenceReport iteration_convergence(const std::vector<Trajectory>& trajectories,
                                        const std::vector<double>& metrics, long window_end,
                                        double state_tol, double cost_tol) {
  if (trajectories.size() < 2 || trajectories.size() != metrics.size()) {
    throw std::invalid_argument("iteration_convergence: need >= 2 aligned records");
  }
  ConvergenceReport report;
  report.state_tol = state_tol;
  report.cost_tol = cost_tol;
  for (size_t i = 0; i + 1 < trajectories.size(); ++i) {
    double dist = 0.0;
    for (long k = 0; k <= window_end; ++k) {
      dist = std::max(dist, (trajectories[i].state_at(k) - trajectories[i + 1].state_at(k))
                                .lpNorm<Eigen::Infinity>());
    }
    report.state_distances.push_back(dist);
    report.cost_deltas.push_back(std::abs(metrics[i + 1] - metrics[i]));
    if (report.converged_at < 0 && dist <= state_tol &&
        report.cost_deltas.back() <= cost_tol) {
      report.converged_at = static_cast<int>(i) + 1;
    }
  }
  return report;
}

}  // namespace ilempc
