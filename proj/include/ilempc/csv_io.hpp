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

#ifndef ILEMPC_CSV_IO_HPP
#define ILEMPC_CSV_IO_HPP

#include <string>
#include <vector>

#include "ilempc/controller.hpp"

namespace ilempc {

/// Decimal text with 17 significant digits; round-trips doubles exactly.
std::string format_double(double v);

/// Header `k,x1..xn,u1..um`; the final row has empty control columns.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path, int state_dim, int control_dim);

struct SummaryRow {
  int iteration = 0;
  double cumulative_cost = 0.0;
  double window_average = 0.0;
  double max_terminal_residual = 0.0;
  long solver_outer_iterations = 0;
};

/// Columns: j, J_j, window_avg, max_terminal_residual, solver_outer_iters_total.
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::string& path);

/// Columns: k, h components, d components, residual, running-average components.
void write_average_constraint_csv(const std::string& path,
                                  const std::vector<AverageConstraintSample>& samples);

}  // namespace ilempc

#endif  // ILEMPC_CSV_IO_HPP
