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

#ifndef ILEMPC_TRAJECTORY_HPP
#define ILEMPC_TRAJECTORY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ilempc/plant_model.hpp"

namespace ilempc {

/// Rule for reading a trajectory past its stored horizon. A stored trajectory
/// of length T keeps states[0..T] and controls[0..T-1]; the extension answers
/// lookups at k > T (states) or k >= T (controls).
struct Extension {
  enum class Kind { kNone, kSteadyStateHold, kPeriodic };

  Kind kind = Kind::kNone;
  StateVector hold_state;    // kSteadyStateHold
  ControlVector hold_control;
  long period = 0;           // kPeriodic

  static Extension None() { return {}; }
  static Extension Hold(StateVector xs, ControlVector us);
  static Extension Periodic(long period);
};

/// Paired state/control sequences of one closed-loop run.
///
/// Invariants (checked by check_feasible, not by the constructor):
///   - states[k+1] = f(states[k], controls[k]) within the dynamics tolerance,
///   - every stored state/control inside the model boxes,
///   - periodic extensions require states[T] == states[T-P] within 1e-8.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<StateVector> states, std::vector<ControlVector> controls,
             Extension extension = Extension::None());

  long length() const { return static_cast<long>(controls_.size()); }

  const std::vector<StateVector>& states() const { return states_; }
  const std::vector<ControlVector>& controls() const { return controls_; }
  const Extension& extension() const { return extension_; }

  /// State at index k, using the extension rule beyond the stored range.
  StateVector state_at(long k) const;
  /// Control at index k, same lookup rules.
  ControlVector control_at(long k) const;

  /// True when state/control lookups up to index k are answerable.
  bool supports_lookup(long k) const;

 private:
  std::vector<StateVector> states_;    // length T+1
  std::vector<ControlVector> controls_;  // length T
  Extension extension_;
};

/// (state, control) pair at index k; throws std::out_of_range past storage
/// when the trajectory has no extension.
std::pair<StateVector, ControlVector> extend_lookup(const Trajectory& traj, long k);

/// Simulates `controls` from x0 under the plant map; extension = none.
Trajectory rollout(const PlantModel& model, const StateVector& x0,
                   const std::vector<ControlVector>& controls);

struct FeasibilityReport {
  double max_dynamics_residual = 0.0;  // infinity norm
  double max_state_violation = 0.0;
  double max_control_violation = 0.0;
  long worst_dynamics_index = -1;
  long worst_state_index = -1;
  long worst_control_index = -1;
  double periodic_closure_residual = 0.0;  // only for periodic extensions
  bool feasible = false;

  double max_violation() const {
    return std::max({max_dynamics_residual, max_state_violation,
                     max_control_violation, periodic_closure_residual});
  }
};

/// Checks dynamics consistency and box membership of every stored sample.
/// Reports, never throws; verdict is max residual <= tol.
FeasibilityReport check_feasible(const Trajectory& traj, const PlantModel& model,
                                 double tol = 1e-6);

}  // namespace ilempc

#endif  // ILEMPC_TRAJECTORY_HPP
