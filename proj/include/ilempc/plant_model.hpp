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

#ifndef ILEMPC_PLANT_MODEL_HPP
#define ILEMPC_PLANT_MODEL_HPP

#include <functional>
#include <optional>
#include <utility>

#include "ilempc/box_set.hpp"

namespace ilempc {

using StateVector = Vector;
using ControlVector = Vector;

using StepMap = std::function<StateVector(const StateVector&, const ControlVector&)>;
using StepJacobian = std::function<Matrix(const StateVector&, const ControlVector&)>;

/// Discrete-time plant x(k+1) = f(x(k), u(k)) with box constraint sets and an
/// optional steady-state pair. Immutable after construction; all members are
/// pure functions, so instances are safe to share across threads.
struct PlantModel {
  int state_dim = 0;
  int control_dim = 0;
  StepMap f;
  StepJacobian f_x;  // d f / d x, state_dim x state_dim
  StepJacobian f_u;  // d f / d u, state_dim x control_dim
  BoxSet state_box;
  BoxSet control_box;
  std::optional<std::pair<StateVector, ControlVector>> steady_state;
};

/// One step of the plant map. No constraint check is performed.
StateVector step(const PlantModel& model, const StateVector& x, const ControlVector& u);

/// Central finite-difference Jacobians for models without analytic ones.
StepJacobian finite_difference_state_jacobian(StepMap f, int state_dim, double h = 1e-6);
StepJacobian finite_difference_control_jacobian(StepMap f, int state_dim, double h = 1e-6);

/// Validates dimensions, box ordering and (if declared) that the steady state
/// is a fixed point of f within `tol`. Throws std::invalid_argument otherwise.
void validate_model(const PlantModel& model, double tol = 1e-6);

}  // namespace ilempc

#endif  // ILEMPC_PLANT_MODEL_HPP
