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

#ifndef ILEMPC_AVERAGE_CONSTRAINTS_HPP
#define ILEMPC_AVERAGE_CONSTRAINTS_HPP

#include <vector>

#include "ilempc/nlp.hpp"

namespace ilempc {

/// Asymptotic-average output constraint: the running averages of
/// y(k) = h(x(k), u(k)) must accumulate inside the target box Y. The
/// controller enforces it through a time-varying membership set, a fixed base
/// box translated by an evolving cumulative-output offset.
struct AverageConstraintSpec {
  OutputMap output;  // h
  BoxSet target;     // Y
  BoxSet base;       // Y0, must contain the origin

  /// Default base box [-N*w, N*w]^p with w the half-width of the target.
  static BoxSet default_base(const BoxSet& target, int horizon);
};

/// Base box plus translation offset; membership(v) <=> v - offset in base.
/// Since every summand is a single point, set subtraction/addition reduce
/// exactly to offset arithmetic.
struct OffsetSet {
  BoxSet base;
  Vector offset;

  bool contains(const Vector& v, double tol = 0.0) const {
    return base.contains(v - offset, tol);
  }
  double violation(const Vector& v) const { return base.violation(v - offset); }
};

/// Compensated (Kahan) accumulator; keeps the offset recursion exact to
/// rounding over long runs.
class KahanVector {
 public:
  explicit KahanVector(Vector init) : sum_(std::move(init)), carry_(Vector::Zero(sum_.size())) {}
  explicit KahanVector(int dim) : sum_(Vector::Zero(dim)), carry_(Vector::Zero(dim)) {}

  void add(const Vector& v) {
    for (Eigen::Index i = 0; i < sum_.size(); ++i) {
      const double y = v[i] - carry_[i];
      const double t = sum_[i] + y;
      carry_[i] = (t - sum_[i]) - y;
      sum_[i] = t;
    }
  }

  const Vector& value() const { return sum_; }

 private:
  Vector sum_;
  Vector carry_;
};

/// Initial offset d = sum_{i=0}^{N-1} h(prev state i, prev control i).
Vector init_offset(const Trajectory& prev, const OutputMap& h, int horizon);

/// One recursion step: d' = d - h_applied + h_incoming.
Vector update_offset(const Vector& d, const Vector& h_applied, const Vector& h_incoming);

/// Copy of `problem` carrying the membership constraint
/// (sum of h over the predicted window) - d in base.
NlpProblem attach_to_problem(const NlpProblem& problem, const AverageConstraintSpec& spec,
                             const Vector& d);

struct AsymptoticAverageReport {
  std::vector<Vector> running_averages;
  Vector final_average;
  bool within_target = false;  // against Y with slack
  double slack_used = 0.0;
};

/// Running-average sequence of a vector series plus a membership verdict
/// against `target` with slack eps_av.
AsymptoticAverageReport asymptotic_average(const std::vector<Vector>& values,
                                           const BoxSet& target, double eps_av = 1e-3);

}  // namespace ilempc

#endif  // ILEMPC_AVERAGE_CONSTRAINTS_HPP
