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

#include "ilempc/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ilempc {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_or_throw(path);
  const int n = static_cast<int>(traj.states().front().size());
  const int m = traj.controls().empty() ? 0 : static_cast<int>(traj.controls().front().size());
  out << "k";
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  for (int i = 1; i <= m; ++i) out << ",u" << i;
  out << "\n";
  const long T = traj.length();
  for (long k = 0; k <= T; ++k) {
    out << k;
    const auto& x = traj.states()[static_cast<size_t>(k)];
    for (int i = 0; i < n; ++i) out << ',' << format_double(x[i]);
    if (k < T) {
      const auto& u = traj.controls()[static_cast<size_t>(k)];
      for (int i = 0; i < m; ++i) out << ',' << format_double(u[i]);
    } else {
      for (int i = 0; i < m; ++i) out << ',';  // final row: empty control columns
    }
    out << "\n";
  }
}

Trajectory read_trajectory_csv(const std::string& path, int state_dim, int control_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<StateVector> states;
  std::vector<ControlVector> controls;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) < 1 + state_dim) {
      throw std::runtime_error("malformed trajectory row in " + path);
    }
    StateVector x(state_dim);
    for (int i = 0; i < state_dim; ++i) x[i] = std::stod(fields[static_cast<size_t>(1 + i)]);
    states.push_back(std::move(x));
    const bool has_control = static_cast<int>(fields.size()) >= 1 + state_dim + control_dim &&
                             !fields[static_cast<size_t>(1 + state_dim)].empty();
    if (has_control) {
      ControlVector u(control_dim);
      for (int i = 0; i < control_dim; ++i) {
        u[i] = std::stod(fields[static_cast<size_t>(1 + state_dim + i)]);
      }
      controls.push_back(std::move(u));
    }
  }
  return Trajectory(std::move(states), std::move(controls));
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out = open_or_throw(path);
  out << "j,J_j,window_avg,max_terminal_residual,solver_outer_iters_total\n";
  for (const auto& r : rows) {
    out << r.iteration << ',' << format_double(r.cumulative_cost) << ','
        << format_double(r.window_average) << ',' << format_double(r.max_terminal_residual)
        << ',' << r.solver_outer_iterations << "\n";
  }
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  std::getline(in, line);
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 5) throw std::runtime_error("malformed summary row in " + path);
    SummaryRow r;
    r.iteration = std::stoi(fields[0]);
    r.cumulative_cost = std::stod(fields[1]);
    r.window_average = std::stod(fields[2]);
    r.max_terminal_residual = std::stod(fields[3]);
    r.solver_outer_iterations = std::stol(fields[4]);
    rows.push_back(r);
  }
  return rows;
}

void write_average_constraint_csv(const std::string& path,
                                  const std::vector<AverageConstraintSample>& samples) {
  std::ofstream out = open_or_throw(path);
  if (samples.empty()) {
    out << "k\n";
    return;
  }
  const int p = static_cast<int>(samples.front().h_applied.size());
  out << "k";
  for (int i = 1; i <= p; ++i) out << ",h" << i;
  for (int i = 1; i <= p; ++i) out << ",d" << i;
  out << ",residual";
  for (int i = 1; i <= p; ++i) out << ",avg" << i;
  out << "\n";
  for (const auto& s : samples) {
    out << s.k;
    for (int i = 0; i < p; ++i) out << ',' << format_double(s.h_applied[i]);
    for (int i = 0; i < p; ++i) out << ',' << format_double(s.offset[i]);
    out << ',' << format_double(s.residual);
    for (int i = 0; i < p; ++i) out << ',' << format_double(s.running_average[i]);
    out << "\n";
  }
}

}  // namespace ilempc
