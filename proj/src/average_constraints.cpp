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

#include "ilempc/average_constraints.hpp"

namespace ilempc {

BoxSet AverageConstraintSpec::default_base(const BoxSet& target, int horizon) {
  Vector halfwidth = 0.5 * (target.upper - target.lower);
  return BoxSet(-static_cast<double>(horizon) * halfwidth,
                static_cast<double>(horizon) * halfwidth);
}

Vector init_offset(const Trajectory& prev, const OutputMap& h, int horizon) {
  KahanVector acc(h.dim);
  for (int i = 0; i < horizon; ++i) {
    acc.add(h.value(prev.state_at(i), prev.control_at(i)));
  }
  return acc.value();
}

Vector update_offset(const Vector& d, const Vector& h_applied, const Vector& h_incoming) {
  if (d.size() != h_applied.size() || d.size() != h_incoming.size()) {
    throw std::invalid_argument("update_offset: dimension mismatch");
  }
  return d - h_applied + h_incoming;
}

NlpProblem attach_to_problem(const NlpProblem& problem, const AverageConstraintSpec& spec,
                             const Vector& d) {
  NlpProblem out = problem;
  SummedOutputConstraint constraint;
  constraint.output = spec.output;
  constraint.base = spec.base;
  constraint.offset = d;
  out.summed_output = constraint;
  return out;
}

AsymptoticAverageReport asymptotic_average(const std::vector<Vector>& values,
                                           const BoxSet& target, double eps_av) {
  if (values.empty()) throw std::invalid_argument("asymptotic_average: empty sequence");
  AsymptoticAverageReport report;
  report.slack_used = eps_av;
  report.running_averages.reserve(values.size());
  KahanVector acc(static_cast<int>(values.front().size()));
  for (size_t k = 0; k < values.size(); ++k) {
    acc.add(values[k]);
    report.running_averages.push_back(acc.value() / static_cast<double>(k + 1));
  }
  report.final_average = report.running_averages.back();
  report.within_target = target.contains(report.final_average, eps_av);
  return report;
}

}  // namespace ilempc
