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

#include "ilempc/plant_model.hpp"

#include <string>

namespace ilempc {

StateVector step(const PlantModel& model, const StateVector& x, const ControlVector& u) {
  if (x.size() != model.state_dim || u.size() != model.control_dim) {
    throw std::invalid_argument("step: dimension mismatch (state " +
                                std::to_string(x.size()) + ", control " +
                                std::to_string(u.size()) + ")");
  }
  return model.f(x, u);
}

StepJacobian finite_difference_state_jacobian(StepMap f, int state_dim, double h) {
  return [f = std::move(f), state_dim, h](const StateVector& x, const ControlVector& u) {
    Matrix J(state_dim, x.size());
    StateVector xp = x, xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      xp[i] += h;
      xm[i] -= h;
      J.col(i) = (f(xp, u) - f(xm, u)) / (2.0 * h);
      xp[i] = x[i];
      xm[i] = x[i];
    }
    return J;
  };
}

StepJacobian finite_difference_control_jacobian(StepMap f, int state_dim, double h) {
  return [f = std::move(f), state_dim, h](const StateVector& x, const ControlVector& u) {
    Matrix J(state_dim, u.size());
    ControlVector up = u, um = u;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      up[i] += h;
      um[i] -= h;
      J.col(i) = (f(x, up) - f(x, um)) / (2.0 * h);
      up[i] = u[i];
      um[i] = u[i];
    }
    return J;
  };
}

void validate_model(const PlantModel& model, double tol) {
  if (model.state_dim <= 0 || model.control_dim <= 0) {
    throw std::invalid_argument("validate_model: nonpositive dimensions");
  }
  if (model.state_box.dim() != model.state_dim ||
      model.control_box.dim() != model.control_dim) {
    throw std::invalid_argument("validate_model: box dimensions do not match the plant");
  }
  if (model.steady_state) {
    const auto& [xs, us] = *model.steady_state;
    const double residual = (model.f(xs, us) - xs).lpNorm<Eigen::Infinity>();
    if (residual > tol) {
      throw std::invalid_argument("validate_model: declared steady state has residual " +
                                  std::to_string(residual));
    }
  }
}

}  // namespace ilempc
