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

#ifndef ILEMPC_STAGE_COST_HPP
#define ILEMPC_STAGE_COST_HPP

#include <functional>

#include "ilempc/plant_model.hpp"

namespace ilempc {

/// Running cost l(k, x, u) with gradients. The time index k is absolute, so
/// periodic-reference tracking costs are expressed with the same interface as
/// time-invariant ones (which simply ignore k).
struct StageCost {
  std::function<double(long, const StateVector&, const ControlVector&)> value;
  std::function<Vector(long, const StateVector&, const ControlVector&)> grad_x;
  std::function<Vector(long, const StateVector&, const ControlVector&)> grad_u;

  double operator()(long k, const StateVector& x, const ControlVector& u) const {
    return value(k, x, u);
  }

  /// Copy with `offset` subtracted from every evaluation, chosen so the
  /// normalized cost vanishes at (x_s, u_s).
  StageCost normalized_at(const StateVector& xs, const ControlVector& us) const;

  /// Quadratic cost x'Qx + u'Ru (around optional references).
  static StageCost Quadratic(const Matrix& Q, const Matrix& R);
  static StageCost QuadraticAround(const Matrix& Q, const Matrix& R,
                                   StateVector x_ref, ControlVector u_ref);

  /// Central finite-difference gradients for costs without analytic ones.
  static StageCost WithFiniteDifferenceGradients(
      std::function<double(long, const StateVector&, const ControlVector&)> value,
      int state_dim, int control_dim, double h = 1e-6);
};

}  // namespace ilempc

#endif  // ILEMPC_STAGE_COST_HPP
