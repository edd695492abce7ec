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

#include "ilempc/stage_cost.hpp"

namespace ilempc {

StageCost StageCost::normalized_at(const StateVector& xs, const ControlVector& us) const {
  const double offset = value(0, xs, us);
  StageCost out = *this;
  out.value = [base = value, offset](long k, const StateVector& x, const ControlVector& u) {
    return base(k, x, u) - offset;
  };
  return out;
}

StageCost StageCost::Quadratic(const Matrix& Q, const Matrix& R) {
  return QuadraticAround(Q, R, StateVector::Zero(Q.rows()), ControlVector::Zero(R.rows()));
}

StageCost StageCost::QuadraticAround(const Matrix& Q, const Matrix& R, StateVector x_ref,
                                     ControlVector u_ref) {
  StageCost cost;
  cost.value = [Q, R, x_ref, u_ref](long, const StateVector& x, const ControlVector& u) {
    const Vector dx = x - x_ref;
    const Vector du = u - u_ref;
    return dx.dot(Q * dx) + du.dot(R * du);
  };
  cost.grad_x = [Q, x_ref](long, const StateVector& x, const ControlVector&) {
    return Vector(2.0 * (Q * (x - x_ref)));
  };
  cost.grad_u = [R, u_ref](long, const StateVector&, const ControlVector& u) {
    return Vector(2.0 * (R * (u - u_ref)));
  };
  return cost;
}

StageCost StageCost::WithFiniteDifferenceGradients(
    std::function<double(long, const StateVector&, const ControlVector&)> value,
    int state_dim, int control_dim, double h) {
  StageCost cost;
  cost.value = value;
  cost.grad_x = [value, state_dim, h](long k, const StateVector& x, const ControlVector& u) {
    Vector g(state_dim);
    StateVector xp = x, xm = x;
    for (int i = 0; i < state_dim; ++i) {
      xp[i] += h;
      xm[i] -= h;
      g[i] = (value(k, xp, u) - value(k, xm, u)) / (2.0 * h);
      xp[i] = x[i];
      xm[i] = x[i];
    }
    return g;
  };
  cost.grad_u = [value, control_dim, h](long k, const StateVector& x, const ControlVector& u) {
    Vector g(control_dim);
    ControlVector up = u, um = u;
    for (int i = 0; i < control_dim; ++i) {
      up[i] += h;
      um[i] -= h;
      g[i] = (value(k, x, up) - value(k, x, um)) / (2.0 * h);
      up[i] = u[i];
      um[i] = u[i];
    }
    return g;
  };
  return cost;
}

}  // namespace ilempc
