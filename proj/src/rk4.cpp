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

#include "ilempc/rk4.hpp"

namespace ilempc {

Rk4Maps discretize_rk4(const VectorField& ode, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("discretize_rk4: timestep must be positive");
  const int n = ode.state_dim;

  Rk4Maps maps;
  maps.f = [ode, dt](const StateVector& x, const ControlVector& u) {
    const StateVector k1 = ode.value(x, u);
    const StateVector k2 = ode.value(x + 0.5 * dt * k1, u);
    const StateVector k3 = ode.value(x + 0.5 * dt * k2, u);
    const StateVector k4 = ode.value(x + dt * k3, u);
    return StateVector(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };

  // Stage sensitivities chained through the same evaluation points as f.
  maps.f_x = [ode, dt, n](const StateVector& x, const ControlVector& u) {
    const Matrix I = Matrix::Identity(n, n);
    const StateVector k1 = ode.value(x, u);
    const Matrix d1 = ode.jac_state(x, u);
    const StateVector x2 = x + 0.5 * dt * k1;
    const StateVector k2 = ode.value(x2, u);
    const Matrix d2 = ode.jac_state(x2, u) * (I + 0.5 * dt * d1);
    const StateVector x3 = x + 0.5 * dt * k2;
    const StateVector k3 = ode.value(x3, u);
    const Matrix d3 = ode.jac_state(x3, u) * (I + 0.5 * dt * d2);
    const StateVector x4 = x + dt * k3;
    const Matrix d4 = ode.jac_state(x4, u) * (I + dt * d3);
    return Matrix(I + (dt / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4));
  };

  maps.f_u = [ode, dt](const StateVector& x, const ControlVector& u) {
    const StateVector k1 = ode.value(x, u);
    const Matrix e1 = ode.jac_control(x, u);
    const StateVector x2 = x + 0.5 * dt * k1;
    const StateVector k2 = ode.value(x2, u);
    const Matrix e2 = ode.jac_control(x2, u) + ode.jac_state(x2, u) * (0.5 * dt * e1);
    const StateVector x3 = x + 0.5 * dt * k2;
    const StateVector k3 = ode.value(x3, u);
    const Matrix e3 = ode.jac_control(x3, u) + ode.jac_state(x3, u) * (0.5 * dt * e2);
    const StateVector x4 = x + dt * k3;
    const Matrix e4 = ode.jac_control(x4, u) + ode.jac_state(x4, u) * (dt * e3);
    return Matrix((dt / 6.0) * (e1 + 2.0 * e2 + 2.0 * e3 + e4));
  };

  return maps;
}

}  // namespace ilempc
