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

#include "ilempc/trajectory.hpp"

#include <string>

namespace ilempc {

Extension Extension::Hold(StateVector xs, ControlVector us) {
  Extension e;
  e.kind = Kind::kSteadyStateHold;
  e.hold_state = std::move(xs);
  e.hold_control = std::move(us);
  return e;
}

Extension Extension::Periodic(long period) {
  if (period <= 0) throw std::invalid_argument("Extension::Periodic: period must be positive");
  Extension e;
  e.kind = Kind::kPeriodic;
  e.period = period;
  return e;
}

Trajectory::Trajectory(std::vector<StateVector> states, std::vector<ControlVector> controls,
                       Extension extension)
    : states_(std::move(states)), controls_(std::move(controls)), extension_(std::move(extension)) {
  if (states_.empty() || states_.size() != controls_.size() + 1) {
    throw std::invalid_argument("Trajectory: need T+1 states for T controls");
  }
  if (extension_.kind == Extension::Kind::kPeriodic && extension_.period > length()) {
    throw std::invalid_argument("Trajectory: period exceeds stored length");
  }
}

StateVector Trajectory::state_at(long k) const {
  const long T = length();
  if (k < 0) throw std::out_of_range("Trajectory::state_at: negative index");
  if (k <= T) return states_[static_cast<size_t>(k)];
  switch (extension_.kind) {
    case Extension::Kind::kSteadyStateHold:
      return extension_.hold_state;
    case Extension::Kind::kPeriodic: {
      const long P = extension_.period;
      return states_[static_cast<size_t>(T - P + ((k - T) % P))];
    }
    case Extension::Kind::kNone:
    default:
      throw std::out_of_range("Trajectory::state_at: index " + std::to_string(k) +
                              " beyond stored horizon " + std::to_string(T) +
                              " and no extension rule");
  }
}

ControlVector Trajectory::control_at(long k) const {
  const long T = length();
  if (k < 0) throw std::out_of_range("Trajectory::control_at: negative index");
  if (k < T) return controls_[static_cast<size_t>(k)];
  switch (extension_.kind) {
    case Extension::Kind::kSteadyStateHold:
      return extension_.hold_control;
    case Extension::Kind::kPeriodic: {
      const long P = extension_.period;
      return controls_[static_cast<size_t>(T - P + ((k - T) % P))];
    }
    case Extension::Kind::kNone:
    default:
      throw std::out_of_range("Trajectory::control_at: index " + std::to_string(k) +
                              " beyond stored horizon " + std::to_string(T) +
                              " and no extension rule");
  }
}

bool Trajectory::supports_lookup(long k) const {
  if (extension_.kind != Extension::Kind::kNone) return true;
  return k < length();
}

std::pair<StateVector, ControlVector> extend_lookup(const Trajectory& traj, long k) {
  return {traj.state_at(k), traj.control_at(k)};
}

Trajectory rollout(const PlantModel& model, const StateVector& x0,
                   const std::vector<ControlVector>& controls) {
  if (x0.size() != model.state_dim) {
    throw std::invalid_argument("rollout: initial state dimension mismatch");
  }
  std::vector<StateVector> states;
  states.reserve(controls.size() + 1);
  states.push_back(x0);
  for (const auto& u : controls) {
    states.push_back(step(model, states.back(), u));
  }
  return Trajectory(std::move(states), controls);
}

FeasibilityReport check_feasible(const Trajectory& traj, const PlantModel& model,
                                 double tol) {
  FeasibilityReport report;
  const auto& xs = traj.states();
  const auto& us = traj.controls();
  for (size_t k = 0; k < us.size(); ++k) {
    const double r = (model.f(xs[k], us[k]) - xs[k + 1]).lpNorm<Eigen::Infinity>();
    if (r > report.max_dynamics_residual) {
      report.max_dynamics_residual = r;
      report.worst_dynamics_index = static_cast<long>(k);
    }
    const double cv = model.control_box.violation(us[k]);
    if (cv > report.max_control_violation) {
      report.max_control_violation = cv;
      report.worst_control_index = static_cast<long>(k);
    }
  }
  for (size_t k = 0; k < xs.size(); ++k) {
    const double sv = model.state_box.violation(xs[k]);
    if (sv > report.max_state_violation) {
      report.max_state_violation = sv;
      report.worst_state_index = static_cast<long>(k);
    }
  }
  if (traj.extension().kind == Extension::Kind::kPeriodic) {
    const long T = traj.length();
    const long P = traj.extension().period;
    report.periodic_closure_residual =
        (xs[static_cast<size_t>(T)] - xs[static_cast<size_t>(T - P)])
            .lpNorm<Eigen::Infinity>();
  }
  report.feasible = report.max_violation() <= tol;
  return report;
}

}  // namespace ilempc
