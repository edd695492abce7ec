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

#include "ilempc/scenarios.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "ilempc/rk4.hpp"

namespace ilempc {

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix double_integrator_A() {
  Matrix A(2, 2);
  A << 1.0, 1.0, 0.0, 1.0;
  return A;
}

// -- plants ------------------------------------------------------------------

PlantModel linear_regulator_plant() {
  const Matrix A = double_integrator_A();
  Matrix B(2, 1);
  B << 0.0, 1.0;
  PlantModel m;
  m.state_dim = 2;
  m.control_dim = 1;
  m.f = [A, B](const StateVector& x, const ControlVector& u) { return StateVector(A * x + B * u); };
  m.f_x = [A](const StateVector&, const ControlVector&) { return A; };
  m.f_u = [B](const StateVector&, const ControlVector&) { return B; };
  m.state_box = BoxSet::Symmetric(2, 4.0);
  m.control_box = BoxSet::Symmetric(1, 1.0);
  m.steady_state = {StateVector::Zero(2), ControlVector::Zero(1)};
  return m;
}

PlantModel nonlinear_regulator_plant() {
  const Matrix A = double_integrator_A();
  Matrix B(2, 1);
  B << 0.0, 1.0;
  PlantModel m;
  m.state_dim = 2;
  m.control_dim = 1;
  m.f = [A, B](const StateVector& x, const ControlVector& u) {
    const double s = x[0] * x[1];
    StateVector g(2);
    g << s * (1.0 + std::sin(s)), 0.0;
    return StateVector(A * x + g + B * u);
  };
  m.f_x = [A](const StateVector& x, const ControlVector&) {
    const double s = x[0] * x[1];
    const double ds = 1.0 + std::sin(s) + s * std::cos(s);
    Matrix J = A;
    J(0, 0) += ds * x[1];
    J(0, 1) += ds * x[0];
    return J;
  };
  m.f_u = [B](const StateVector&, const ControlVector&) { return B; };
  m.state_box = BoxSet::Symmetric(2, 4.0);
  m.control_box = BoxSet::Symmetric(1, 1.0);
  m.steady_state = {StateVector::Zero(2), ControlVector::Zero(1)};
  return m;
}

PlantModel linear_tracker_plant() {
  const Matrix A = double_integrator_A();
  PlantModel m;
  m.state_dim = 2;
  m.control_dim = 2;
  m.f = [A](const StateVector& x, const ControlVector& u) { return StateVector(A * x + u); };
  m.f_x = [A](const StateVector&, const ControlVector&) { return A; };
  m.f_u = [](const StateVector&, const ControlVector&) { return Matrix(Matrix::Identity(2, 2)); };
  m.state_box = BoxSet(Vector::Constant(2, -4.0), Vector::Constant(2, 5.0));
  m.control_box = BoxSet::Symmetric(2, 1.0);
  return m;
}

// State (px, py, v, heading); controls (acceleration, turn rate).
PlantModel unicycle_plant(double dt) {
  VectorField ode;
  ode.state_dim = 4;
  ode.control_dim = 2;
  ode.value = [](const StateVector& x, const ControlVector& u) {
    StateVector dx(4);
    dx << x[2] * std::cos(x[3]), x[2] * std::sin(x[3]), u[0], u[1];
    return dx;
  };
  ode.jac_state = [](const StateVector& x, const ControlVector&) {
    Matrix J = Matrix::Zero(4, 4);
    J(0, 2) = std::cos(x[3]);
    J(0, 3) = -x[2] * std::sin(x[3]);
    J(1, 2) = std::sin(x[3]);
    J(1, 3) = x[2] * std::cos(x[3]);
    return J;
  };
  ode.jac_control = [](const StateVector&, const ControlVector&) {
    Matrix J = Matrix::Zero(4, 2);
    J(2, 0) = 1.0;
    J(3, 1) = 1.0;
    return J;
  };
  const Rk4Maps maps = discretize_rk4(ode, dt);
  PlantModel m;
  m.state_dim = 4;
  m.control_dim = 2;
  m.f = maps.f;
  m.f_x = maps.f_x;
  m.f_u = maps.f_u;
  m.state_box = BoxSet::Unbounded(4);
  m.control_box = BoxSet(Vector(2), Vector(2));
  m.control_box.lower << -15.0, -12.0;
  m.control_box.upper << 15.0, 12.0;
  return m;
}

// Isothermal reactor with consecutive-competitive reactions; states are the
// concentrations of the feed species, the reagent and the two products,
// controls the two inflow rates.
VectorField reactor_field() {
  constexpr double s1 = 1.0;
  constexpr double s2 = 0.4;
  VectorField ode;
  ode.state_dim = 4;
  ode.control_dim = 2;
  ode.value = [](const StateVector& x, const ControlVector& u) {
    StateVector dx(4);
    const double r1 = s1 * x[0] * x[1];
    const double r2 = s2 * x[1] * x[2];
    dx << u[0] - x[0] - r1, u[1] - x[1] - r1 - r2, -x[2] + r1 - r2, -x[3] + r2;
    return dx;
  };
  ode.jac_state = [](const StateVector& x, const ControlVector&) {
    Matrix J(4, 4);
    J << -1.0 - s1 * x[1], -s1 * x[0], 0.0, 0.0,                      //
        -s1 * x[1], -1.0 - s1 * x[0] - s2 * x[2], -s2 * x[1], 0.0,    //
        s1 * x[1], s1 * x[0] - s2 * x[2], -1.0 - s2 * x[1], 0.0,      //
        0.0, s2 * x[2], s2 * x[1], -1.0;
    return J;
  };
  ode.jac_control = [](const StateVector&, const ControlVector&) {
    Matrix J = Matrix::Zero(4, 2);
    J(0, 0) = 1.0;
    J(1, 1) = 1.0;
    return J;
  };
  return ode;
}

StateVector reactor_steady_state(const VectorField& ode, const ControlVector& us) {
  // Newton refinement from the nominal operating point; ODE equilibria are
  // exact fixed points of the RK4 map.
  StateVector x(4);
  x << 0.3874, 1.5811, 0.3752, 0.2373;
  for (int it = 0; it < 100; ++it) {
    const Vector r = ode.value(x, us);
    if (r.lpNorm<Eigen::Infinity>() < 1e-15) break;
    x -= ode.jac_state(x, us).partialPivLu().solve(r);
  }
  return x;
}

PlantModel reactor_plant(double dt, StateVector* xs_out, ControlVector* us_out) {
  const VectorField ode = reactor_field();
  ControlVector us(2);
  us << 1.0, 2.4310;
  const StateVector xs = reactor_steady_state(ode, us);
  const Rk4Maps maps = discretize_rk4(ode, dt);
  PlantModel m;
  m.state_dim = 4;
  m.control_dim = 2;
  m.f = maps.f;
  m.f_x = maps.f_x;
  m.f_u = maps.f_u;
  m.state_box = BoxSet(Vector::Zero(4), Vector::Constant(4, 6.0));
  m.control_box = BoxSet(Vector::Zero(2), Vector(2));
  m.control_box.upper << 5.0, 10.0;
  m.steady_state = {xs, us};
  if (xs_out) *xs_out = xs;
  if (us_out) *us_out = us;
  return m;
}

// -- references and costs ----------------------------------------------------

ReferenceSignal square_reference() {
  // Width-4 square centered at (4,4), one unit per step, counter-clockwise.
  ReferenceSignal ref;
  auto pt = [](double x, double y) {
    Vector v(2);
    v << x, y;
    return v;
  };
  for (int i = 0; i < 4; ++i) ref.points.push_back(pt(2.0 + i, 2.0));
  for (int i = 0; i < 4; ++i) ref.points.push_back(pt(6.0, 2.0 + i));
  for (int i = 0; i < 4; ++i) ref.points.push_back(pt(6.0 - i, 6.0));
  for (int i = 0; i < 4; ++i) ref.points.push_back(pt(2.0, 6.0 - i));
  return ref;
}

ReferenceSignal circle_reference(long period) {
  // Radius-5 circle about (6,6), starting at the point nearest the origin.
  ReferenceSignal ref;
  for (long k = 0; k < period; ++k) {
    const double ang = 1.25 * kPi + 2.0 * kPi * static_cast<double>(k) / period;
    Vector v(2);
    v << 6.0 + 5.0 * std::cos(ang), 6.0 + 5.0 * std::sin(ang);
    ref.points.push_back(std::move(v));
  }
  return ref;
}

StageCost position_tracking_cost(const ReferenceSignal& ref, int state_dim) {
  StageCost cost;
  cost.value = [ref](long k, const StateVector& x, const ControlVector&) {
    const Vector& r = ref.at(k);
    const double dx = x[0] - r[0];
    const double dy = x[1] - r[1];
    return dx * dx + dy * dy;
  };
  cost.grad_x = [ref, state_dim](long k, const StateVector& x, const ControlVector&) {
    const Vector& r = ref.at(k);
    Vector g = Vector::Zero(state_dim);
    g[0] = 2.0 * (x[0] - r[0]);
    g[1] = 2.0 * (x[1] - r[1]);
    return g;
  };
  cost.grad_u = [](long, const StateVector&, const ControlVector& u) {
    return Vector(Vector::Zero(u.size()));
  };
  return cost;
}

StageCost product_yield_cost() {
  StageCost cost;
  cost.value = [](long, const StateVector& x, const ControlVector&) { return -x[2]; };
  cost.grad_x = [](long, const StateVector& x, const ControlVector&) {
    Vector g = Vector::Zero(x.size());
    g[2] = -1.0;
    return g;
  };
  cost.grad_u = [](long, const StateVector&, const ControlVector& u) {
    return Vector(Vector::Zero(u.size()));
  };
  return cost;
}

OutputMap first_inflow_output() {
  OutputMap h;
  h.dim = 1;
  h.value = [](const StateVector&, const ControlVector& u) {
    Vector v(1);
    v << u[0];
    return v;
  };
  h.jac_state = [](const StateVector& x, const ControlVector&) {
    return Matrix(Matrix::Zero(1, x.size()));
  };
  h.jac_control = [](const StateVector&, const ControlVector& u) {
    Matrix J = Matrix::Zero(1, u.size());
    J(0, 0) = 1.0;
    return J;
  };
  return h;
}

AverageConstraintSpec inflow_average_spec(double base_halfwidth) {
  AverageConstraintSpec spec;
  spec.output = first_inflow_output();
  spec.target = BoxSet(Vector::Zero(1), Vector::Ones(1));
  spec.base = BoxSet(Vector::Constant(1, -base_halfwidth), Vector::Constant(1, base_halfwidth));
  return spec;
}

std::string echo_vector(const Vector& v) {
  std::ostringstream out;
  out << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ")";
  return out.str();
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"linear-regulator", "nonlinear-regulator", "linear-tracker",
          "unicycle",         "reactor-economic",    "reactor-convexified"};
}

Scenario make_scenario(const std::string& name) {
  Scenario s;
  s.name = name;

  if (name == "linear-regulator" || name == "nonlinear-regulator") {
    s.model = name == "linear-regulator" ? linear_regulator_plant()
                                         : nonlinear_regulator_plant();
    s.cost = StageCost::Quadratic(Matrix::Identity(2, 2), Matrix::Identity(1, 1));
    s.x0 = Vector(2);
    s.x0 << -3.95, -0.05;
    s.config.horizon = 4;
    s.config.sim_length = 60;
    s.config.iterations = 15;
    s.monotone_metric = MonotoneMetric::kCumulativeCost;
    if (name == "linear-regulator") {
      s.expected_final_cost = 49.9163600440;
      s.final_cost_tolerance = 1e-6;
      s.expected_converged_at = 5;
    }
    s.parameter_echo = {
        {"plant", name == "linear-regulator" ? "x+ = A x + B u"
                                             : "x+ = A x + g(x) + B u"},
        {"A", "(1 1; 0 1)"},
        {"B", "(0; 1)"},
        {"x0", "(-3.95, -0.05)"},
        {"state box", "[-4, 4]^2"},
        {"control box", "[-1, 1]"},
        {"stage cost", "|x|^2 + |u|^2"},
        {"N", "4"},
    };
    if (name == "nonlinear-regulator") {
      s.parameter_echo["g(x)"] = "(x1 x2 (1 + sin(x1 x2)), 0)";
    }
    return s;
  }

  if (name == "linear-tracker") {
    s.model = linear_tracker_plant();
    const ReferenceSignal ref = square_reference();
    s.cost = position_tracking_cost(ref, 2);
    s.reference = ref;
    s.x0 = Vector::Zero(2);
    s.config.horizon = 4;
    s.config.sim_length = 8 * ref.period();
    s.config.iterations = 15;
    s.monotone_metric = MonotoneMetric::kWindowAverage;
    s.parameter_echo = {
        {"plant", "x+ = A x + u"},
        {"A", "(1 1; 0 1)"},
        {"x0", "(0, 0)"},
        {"state box", "[-4, 5]^2"},
        {"control box", "[-1, 1]^2"},
        {"reference", "square, width 4, center (4,4), period 16"},
        {"stage cost", "|x - r(k)|^2"},
        {"N", "4"},
    };
    return s;
  }

  if (name == "unicycle") {
    const double dt = 0.1;
    s.model = unicycle_plant(dt);
    const ReferenceSignal ref = circle_reference(40);
    s.cost = position_tracking_cost(ref, 4);
    s.reference = ref;
    s.x0 = Vector::Zero(4);
    s.config.horizon = 10;
    s.config.sim_length = 8 * ref.period();
    s.config.iterations = 15;
    s.monotone_metric = MonotoneMetric::kWindowAverage;
    s.parameter_echo = {
        {"plant", "kinematic vehicle (px, py, v, heading), RK4"},
        {"dt", "0.1 s"},
        {"x0", "(0, 0, 0, 0)"},
        {"acceleration box", "[-15, 15] m/s^2"},
        {"turn-rate box", "[-12, 12] rad/s"},
        {"reference", "circle, radius 5 m, center (6,6), period 4 s"},
        {"stage cost", "|position - r(k)|^2"},
        {"N", "10"},
    };
    return s;
  }

  if (name == "reactor-economic" || name == "reactor-convexified") {
    const double dt = 0.1;
    StateVector xs;
    ControlVector us;
    s.model = reactor_plant(dt, &xs, &us);
    s.x0 = Vector(4);
    s.x0 << 0.5, 2.0, 0.3, 0.2;
    s.config.horizon = 5;
    s.config.sim_length = 600;
    s.config.iterations = 15;
    s.config.average_constraint = inflow_average_spec(0.25);
    if (name == "reactor-economic") {
      s.cost = product_yield_cost();
      s.monotone_metric = MonotoneMetric::kWindowAverage;
    } else {
      const Matrix Q = 0.36 * Matrix::Identity(4, 4);
      const Matrix R = 0.002 * Matrix::Identity(2, 2);
      StageCost quad = StageCost::QuadraticAround(0.5 * Q, 0.5 * R, xs, us);
      StageCost econ = product_yield_cost();
      StageCost sum;
      sum.value = [quad, econ](long k, const StateVector& x, const ControlVector& u) {
        return econ.value(k, x, u) + quad.value(k, x, u);
      };
      sum.grad_x = [quad, econ](long k, const StateVector& x, const ControlVector& u) {
        return Vector(econ.grad_x(k, x, u) + quad.grad_x(k, x, u));
      };
      sum.grad_u = [quad, econ](long k, const StateVector& x, const ControlVector& u) {
        return Vector(econ.grad_u(k, x, u) + quad.grad_u(k, x, u));
      };
      s.cost = sum.normalized_at(xs, us);
      s.monotone_metric = MonotoneMetric::kCumulativeCost;
    }
    s.parameter_echo = {
        {"plant", "isothermal reactor, consecutive-competitive reactions, RK4"},
        {"rate constants", "(1, 0.4)"},
        {"dt", "0.1 s"},
        {"x0", echo_vector(s.x0)},
        {"steady state", echo_vector(xs)},
        {"steady control", echo_vector(us)},
        {"state box", "[0, 6]^4"},
        {"control box", "[0, 5] x [0, 10]"},
        {"average target", "Av[u1] in [0, 1]"},
        {"membership base halfwidth", "0.25"},
        {"N", "5"},
        {"stage cost", name == "reactor-economic"
                           ? "-x3"
                           : "-x3 + 0.5(|x - xs|^2_Q + |u - us|^2_R), Q = 0.36 I, R = 0.002 I"},
    };
    return s;
  }

  throw std::invalid_argument("make_scenario: unknown scenario '" + name + "'");
}

// -- initial trajectories ----------------------------------------------------

namespace {

Matrix lqr_gain(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
  Matrix P = Q;
  for (int it = 0; it < 10000; ++it) {
    const Matrix BtP = B.transpose() * P;
    const Matrix K = (R + BtP * B).ldlt().solve(BtP * A);
    const Matrix next = Q + A.transpose() * P * (A - B * K);
    const double delta = (next - P).lpNorm<Eigen::Infinity>();
    P = next;
    if (delta < 1e-13) break;
  }
  const Matrix BtP = B.transpose() * P;
  return (R + BtP * B).ldlt().solve(BtP * A);
}

std::vector<ControlVector> regulator_bootstrap(const Scenario& s, long length) {
  // Hand plan: pump the velocity up and down to walk the first coordinate in,
  // then park. For the nonlinear plant the zero-control drift walks in on its
  // own; both are only rough starting guesses for the polish solve.
  std::vector<ControlVector> controls;
  StateVector x = s.x0;
  const Matrix A = double_integrator_A();
  Matrix B(2, 1);
  B << 0.0, 1.0;
  const Matrix K = lqr_gain(A, B, Matrix::Identity(2, 2), Matrix::Identity(1, 1));
  const bool linear = s.name == "linear-regulator";
  for (long k = 0; k < length; ++k) {
    ControlVector u(1);
    if (linear && x[0] < -0.6) {
      u << (k % 2 == 0 ? 1.0 : -1.0);
    } else if (!linear && x[0] < -0.5) {
      u << 0.0;
    } else {
      u = s.model.control_box.project(-K * x);
    }
    controls.push_back(u);
    x = s.model.f(x, u);
  }
  return controls;
}

Trajectory regulator_initial(const Scenario& s) {
  // The linear case polishes over a long window (the steering plan then sits
  // at the infinite-horizon optimum, which the learning preserves); for the
  // nonlinear case a short steer leaves headroom for the iterations to earn.
  const long polish_horizon = s.name == "linear-regulator" ? 40 : 12;
  const long T = s.config.sim_length;

  NlpProblem steer;
  steer.model = s.model;
  steer.cost = s.cost;
  steer.start_time = 0;
  steer.horizon = static_cast<int>(polish_horizon);
  steer.initial_state = s.x0;
  // No terminal pin: the plain running cost already parks the state.
  NlpSolver solver(s.config.solver);
  const NlpSolution plan = solver.solve(steer, regulator_bootstrap(s, polish_horizon));
  if (plan.status == SolveStatus::kInfeasibleStart) {
    throw InvariantBreach("regulator recipe: bootstrap plan infeasible");
  }

  std::vector<ControlVector> controls = plan.controls;
  const Matrix A = double_integrator_A();
  Matrix B(2, 1);
  B << 0.0, 1.0;
  const Matrix K = lqr_gain(A, B, Matrix::Identity(2, 2), Matrix::Identity(1, 1));
  StateVector x = plan.states.back();
  // plan.states.back() is the exact rollout endpoint here (no terminal snap).
  while (static_cast<long>(controls.size()) < T) {
    const ControlVector u = s.model.control_box.project(-K * x);
    controls.push_back(u);
    x = s.model.f(x, u);
  }
  Trajectory traj = rollout(s.model, s.x0, controls);
  const auto& [xs, us] = *s.model.steady_state;
  const double tail = (traj.states().back() - xs).lpNorm<Eigen::Infinity>();
  if (tail > s.config.settle_band) {
    throw InvariantBreach("regulator recipe: tail " + std::to_string(tail) +
                          " outside the settle band; raise the horizon");
  }
  return Trajectory(traj.states(), traj.controls(), Extension::Hold(xs, us));
}

Trajectory tracker_initial(const Scenario& s) {
  // Small designed loop through the origin; states come from a one-period
  // table so the closure is exact, controls follow from the dynamics.
  const long P = s.reference->period();
  const long T = s.config.sim_length;
  std::vector<StateVector> table;
  table.reserve(static_cast<size_t>(P));
  for (long k = 0; k < P; ++k) {
    const double ang = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(P);
    Vector x(2);
    x << 0.4 * (std::cos(ang) - 1.0), 0.4 * std::sin(ang);
    table.push_back(std::move(x));
  }
  const Matrix A = double_integrator_A();
  std::vector<StateVector> states;
  std::vector<ControlVector> controls;
  for (long k = 0; k <= T; ++k) states.push_back(table[static_cast<size_t>(k % P)]);
  for (long k = 0; k < T; ++k) {
    controls.push_back(table[static_cast<size_t>((k + 1) % P)] -
                       A * table[static_cast<size_t>(k % P)]);
  }
  return Trajectory(std::move(states), std::move(controls), Extension::Periodic(P));
}

Trajectory unicycle_initial(const Scenario& s) {
  // Out-and-back acceleration pulse with zero turn rate: a straight loop that
  // closes exactly in all four states.
  const long P = s.reference->period();
  const long T = s.config.sim_length;
  std::vector<ControlVector> profile;
  for (long k = 0; k < P; ++k) {
    ControlVector u(2);
    const double a = (k < P / 4) ? 1.0 : (k < 3 * P / 4) ? -1.0 : 1.0;
    u << a, 0.0;
    profile.push_back(std::move(u));
  }
  std::vector<ControlVector> controls;
  controls.reserve(static_cast<size_t>(T));
  for (long k = 0; k < T; ++k) controls.push_back(profile[static_cast<size_t>(k % P)]);
  Trajectory traj = rollout(s.model, s.x0, controls);
  return Trajectory(traj.states(), traj.controls(), Extension::Periodic(P));
}

Trajectory reactor_initial(const Scenario& s) {
  // Constant steady inflow from the start; the plant rides its own stable
  // flow onto the operating point.
  const long T = s.config.sim_length;
  const auto& [xs, us] = *s.model.steady_state;
  std::vector<ControlVector> controls(static_cast<size_t>(T), us);
  Trajectory traj = rollout(s.model, s.x0, controls);
  const double tail = (traj.states().back() - xs).lpNorm<Eigen::Infinity>();
  if (tail > s.config.settle_band) {
    throw InvariantBreach("reactor recipe: tail " + std::to_string(tail) +
                          " outside the settle band; raise the horizon");
  }
  return Trajectory(traj.states(), traj.controls(), Extension::Hold(xs, us));
}

}  // namespace

Trajectory generate_initial_trajectory(const Scenario& scenario) {
  Trajectory traj;
  if (scenario.name == "linear-regulator" || scenario.name == "nonlinear-regulator") {
    traj = regulator_initial(scenario);
  } else if (scenario.name == "linear-tracker") {
    traj = tracker_initial(scenario);
  } else if (scenario.name == "unicycle") {
    traj = unicycle_initial(scenario);
  } else if (scenario.name == "reactor-economic" || scenario.name == "reactor-convexified") {
    traj = reactor_initial(scenario);
  } else {
    throw std::invalid_argument("generate_initial_trajectory: unknown scenario");
  }

  const FeasibilityReport gate = check_feasible(traj, scenario.model, scenario.config.eps_feas);
  if (!gate.feasible) {
    std::ostringstream msg;
    msg << "initial trajectory failed the feasibility gate: dynamics "
        << gate.max_dynamics_residual << ", state " << gate.max_state_violation
        << ", control " << gate.max_control_violation;
    throw InvariantBreach(msg.str());
  }
  if ((traj.state_at(0) - scenario.x0).lpNorm<Eigen::Infinity>() > 0.0) {
    throw InvariantBreach("initial trajectory does not start at the scenario state");
  }
  return traj;
}

// -- oracles -----------------------------------------------------------------

OracleResult oracle_long_horizon(const Scenario& scenario, long T) {
  if (!scenario.model.steady_state) {
    throw std::invalid_argument("oracle_long_horizon: scenario has no steady-state target");
  }
  const auto& [xs, us] = *scenario.model.steady_state;

  Scenario warm_source = scenario;
  warm_source.config.sim_length = std::max<long>(T, scenario.config.sim_length);
  const Trajectory initial = generate_initial_trajectory(warm_source);

  NlpProblem problem;
  problem.model = scenario.model;
  problem.cost = scenario.cost;
  problem.start_time = 0;
  problem.horizon = static_cast<int>(T);
  problem.initial_state = scenario.x0;
  problem.terminal_state = xs;

  std::vector<ControlVector> warm;
  warm.reserve(static_cast<size_t>(T));
  for (long k = 0; k < T; ++k) warm.push_back(initial.control_at(k));

  NlpSolver solver(scenario.config.solver);
  const NlpSolution sol = solver.solve(problem, warm);
  if (sol.status == SolveStatus::kInfeasibleStart) {
    throw InvariantBreach("oracle_long_horizon: recipe warm start infeasible");
  }
  OracleResult out;
  out.objective = sol.objective;
  out.trajectory = rollout(scenario.model, scenario.x0, sol.controls);
  return out;
}

OracleResult oracle_optimal_reachable(const Scenario& scenario) {
  if (!scenario.reference) {
    throw std::invalid_argument("oracle_optimal_reachable: scenario has no reference");
  }
  const long P = scenario.reference->period();

  PeriodicProblem problem;
  problem.model = scenario.model;
  problem.cost = scenario.cost;
  problem.period = static_cast<int>(P);
  problem.closure_offset = Vector::Zero(scenario.model.state_dim);

  StateVector x0_guess;
  std::vector<ControlVector> warm;
  if (scenario.name == "unicycle") {
    // Near-circle guess: constant speed and turn rate, heading winds by one
    // full turn per period; the closure allows exactly that.
    problem.closure_offset[3] = 2.0 * kPi;
    const double dt = 0.1;
    const double speed = 2.0 * kPi * 5.0 / (static_cast<double>(P) * dt);
    x0_guess = Vector(4);
    x0_guess << scenario.reference->at(0)[0], scenario.reference->at(0)[1], speed,
        1.25 * kPi + 0.5 * kPi;
    ControlVector u(2);
    u << 0.0, 2.0 * kPi / (static_cast<double>(P) * dt);
    warm.assign(static_cast<size_t>(P), u);
  } else {
    Scenario warm_source = scenario;
    const Trajectory loop = generate_initial_trajectory(warm_source);
    x0_guess = loop.state_at(0);
    for (long k = 0; k < P; ++k) warm.push_back(loop.control_at(k));
  }

  NlpSolver solver(scenario.config.solver);
  const PeriodicSolution sol = solver.solve_periodic(problem, x0_guess, warm);

  OracleResult out;
  out.objective = sol.objective;
  std::vector<StateVector> states = sol.states;
  std::vector<ControlVector> controls = sol.controls;
  if (sol.closure_residual <= 1e-8 && problem.closure_offset.isZero()) {
    out.trajectory = Trajectory(std::move(states), std::move(controls), Extension::Periodic(P));
  } else {
    out.trajectory = Trajectory(std::move(states), std::move(controls), Extension::None());
  }
  return out;
}

}  // namespace ilempc
