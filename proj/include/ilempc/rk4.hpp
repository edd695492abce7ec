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

#ifndef ILEMPC_RK4_HPP
#define ILEMPC_RK4_HPP

#include "ilempc/plant_model.hpp"

namespace ilempc {

/// Continuous-time vector field dx/dt = F(x, u) with analytic Jacobians.
struct VectorField {
  int state_dim = 0;
  int control_dim = 0;
  std::function<StateVector(const StateVector&, const ControlVector&)> value;
  StepJacobian jac_state;    // dF/dx
  StepJacobian jac_control;  // dF/du
};

/// One-step map performing a single classical fourth-order Runge-Kutta update
/// with zero-order-hold control. The returned f_x / f_u propagate the exact
/// sensitivities of the RK4 stages, so they are the true Jacobians of the
/// discrete map, not an approximation of the flow.
struct Rk4Maps {
  StepMap f;
  StepJacobian f_x;
  StepJacobian f_u;
};

Rk4Maps discretize_rk4(const VectorField& ode, double dt);

}  // namespace ilempc

#endif  // ILEMPC_RK4_HPP
