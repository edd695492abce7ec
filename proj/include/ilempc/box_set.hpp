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

#ifndef ILEMPC_BOX_SET_HPP
#define ILEMPC_BOX_SET_HPP

#include <Eigen/Core>
#include <limits>
#include <stdexcept>

namespace ilempc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Componentwise interval set { v : lower <= v <= upper }. Bounds may be
/// +-infinity per component.
struct BoxSet {
  Vector lower;
  Vector upper;

  BoxSet() = default;
  BoxSet(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size()) {
      throw std::invalid_argument("BoxSet: bound dimensions differ");
    }
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
      if (!(lower[i] <= upper[i])) {
        throw std::invalid_argument("BoxSet: lower > upper");
      }
    }
  }

  static BoxSet Symmetric(int dim, double radius) {
    return BoxSet(Vector::Constant(dim, -radius), Vector::Constant(dim, radius));
  }

  static BoxSet Unbounded(int dim) {
    const double inf = std::numeric_limits<double>::infinity();
    return BoxSet(Vector::Constant(dim, -inf), Vector::Constant(dim, inf));
  }

  Eigen::Index dim() const { return lower.size(); }

  bool contains(const Vector& v, double tol = 0.0) const {
    return violation(v) <= tol;
  }

  /// Largest componentwise distance outside the box (0 inside or on the
  /// boundary).
  double violation(const Vector& v) const {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      worst = std::max(worst, lower[i] - v[i]);
      worst = std::max(worst, v[i] - upper[i]);
    }
    return std::max(worst, 0.0);
  }

  Vector project(const Vector& v) const {
    return v.cwiseMax(lower).cwiseMin(upper);
  }

  bool bounded() const {
    return lower.allFinite() && upper.allFinite();
  }
};

}  // namespace ilempc

#endif  // ILEMPC_BOX_SET_HPP
