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

#include "ilempc/nlp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace ilempc {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIterations: return "max-iter";
    case SolveStatus::kInfeasibleStart: return "infeasible-start";
  }
  return "unknown";
}

namespace {

std::vector<StateVector> roll_states(const PlantModel& model, const StateVector& x0,
                                     const std::vector<ControlVector>& controls) {
  std::vector<StateVector> xs;
  xs.reserve(controls.size() + 1);
  xs.push_back(x0);
  for (const auto& u : controls) xs.push_back(model.f(xs.back(), u));
  return xs;
}

// One-sided Powell-Hestenes-Rockafellar term for g <= 0 with multiplier gam.
inline double phr_value(double g, double gam, double rho) {
  const double t = gam + rho * g;
  if (t <= 0.0) return -0.5 * gam * gam / rho;
  return (0.5 / rho) * (t * t - gam * gam);
}

inline double phr_slope(double g, double gam, double rho) {
  return std::max(0.0, gam + rho * g);
}

}  // namespace

double evaluate_objective(const NlpProblem& problem,
                          const std::vector<ControlVector>& controls) {
  if (static_cast<int>(controls.size()) != problem.horizon) {
    throw std::invalid_argument("evaluate_objective: control sequence length != horizon");
  }
  StateVector x = problem.initial_state;
  double total = 0.0;
  double carry = 0.0;  // compensated sum
  for (int i = 0; i < problem.horizon; ++i) {
    const double v = problem.cost(problem.start_time + i, x, controls[i]) - carry;
    const double t = total + v;
    carry = (t - total) - v;
    total = t;
    x = problem.model.f(x, controls[i]);
  }
  return total;
}

std::vector<ControlVector> gradient(const NlpProblem& problem,
                                    const std::vector<ControlVector>& controls) {
  const int N = problem.horizon;
  if (static_cast<int>(controls.size()) != N) {
    throw std::invalid_argument("gradient: control sequence length != horizon");
  }
  const auto xs = roll_states(problem.model, problem.initial_state, controls);
  std::vector<ControlVector> grad(controls.size());
  Vector p = Vector::Zero(problem.model.state_dim);
  for (int i = N - 1; i >= 0; --i) {
    const long k = problem.start_time + i;
    const Matrix B = problem.model.f_u(xs[i], controls[i]);
    grad[i] = problem.cost.grad_u(k, xs[i], controls[i]) + B.transpose() * p;
    const Matrix A = problem.model.f_x(xs[i], controls[i]);
    p = problem.cost.grad_x(k, xs[i], controls[i]) + A.transpose() * p;
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Solver internals
// ---------------------------------------------------------------------------

struct NlpSolver::ShootingSpec {
  enum class Terminal { kNone, kFixed, kPeriodic };

  const PlantModel* model = nullptr;
  const StageCost* cost = nullptr;
  long start_time = 0;
  int horizon = 0;
  bool free_x0 = false;
  StateVector x0_fixed;
  Terminal terminal = Terminal::kNone;
  StateVector terminal_target;  // kFixed
  Vector closure_offset;        // kPeriodic
  const SummedOutputConstraint* summed = nullptr;

  int n = 0, m = 0, dim = 0;
  Vector lb, ub;

  void finalize() {
    n = model->state_dim;
    m = model->control_dim;
    dim = horizon * m + (free_x0 ? n : 0);
    lb.resize(dim);
    ub.resize(dim);
    int at = 0;
    if (free_x0) {
      lb.segment(0, n) = model->state_box.lower;
      ub.segment(0, n) = model->state_box.upper;
      at = n;
    }
    for (int i = 0; i < horizon; ++i) {
      lb.segment(at + i * m, m) = model->control_box.lower;
      ub.segment(at + i * m, m) = model->control_box.upper;
    }
  }

  StateVector x0_of(const Vector& z) const {
    return free_x0 ? StateVector(z.segment(0, n)) : x0_fixed;
  }
  ControlVector control_of(const Vector& z, int i) const {
    return z.segment((free_x0 ? n : 0) + i * m, m);
  }
  std::vector<ControlVector> controls_of(const Vector& z) const {
    std::vector<ControlVector> us(static_cast<size_t>(horizon));
    for (int i = 0; i < horizon; ++i) us[static_cast<size_t>(i)] = control_of(z, i);
    return us;
  }
  // State-box penalty applies to interior states; the final state is covered
  // by the terminal equality (fixed target inside the box) or, without one,
  // treated like an interior state.
  bool box_applies(int i) const {
    if (i == 0) return false;
    if (i == horizon) return terminal == Terminal::kNone;
    return true;
  }
};

namespace {

struct Multipliers {
  Vector mu;                       // terminal equality
  std::vector<Vector> box_lo, box_hi;  // per state index 0..N
  Vector out_lo, out_hi;           // summed-output box
  double rho = 10.0;

  static Multipliers Init(const NlpSolver::ShootingSpec& spec, double rho0) {
    Multipliers w;
    w.rho = rho0;
    w.mu = Vector::Zero(spec.n);
    w.box_lo.assign(static_cast<size_t>(spec.horizon) + 1, Vector::Zero(spec.n));
    w.box_hi.assign(static_cast<size_t>(spec.horizon) + 1, Vector::Zero(spec.n));
    const int p = spec.summed ? spec.summed->output.dim : 0;
    w.out_lo = Vector::Zero(p);
    w.out_hi = Vector::Zero(p);
    return w;
  }
};

struct Residuals {
  double eq = 0.0;
  double state_box = 0.0;
  double output = 0.0;
  double objective = 0.0;
  double total() const { return std::max({eq, state_box, output}); }
};

Vector equality_value(const NlpSolver::ShootingSpec& spec,
                      const std::vector<StateVector>& xs) {
  using T = NlpSolver::ShootingSpec::Terminal;
  switch (spec.terminal) {
    case T::kFixed: return xs.back() - spec.terminal_target;
    case T::kPeriodic: return xs.back() - xs.front() - spec.closure_offset;
    case T::kNone: default: return Vector();
  }
}

Vector summed_output_value(const NlpSolver::ShootingSpec& spec, const Vector& z,
                           const std::vector<StateVector>& xs) {
  Vector s = Vector::Zero(spec.summed->output.dim);
  for (int i = 0; i < spec.horizon; ++i) {
    s += spec.summed->output.value(xs[static_cast<size_t>(i)], spec.control_of(z, i));
  }
  return s - spec.summed->offset;
}

Residuals compute_residuals(const NlpSolver::ShootingSpec& spec, const Vector& z) {
  Residuals r;
  const auto us = spec.controls_of(z);
  const auto xs = roll_states(*spec.model, spec.x0_of(z), us);
  const Vector c = equality_value(spec, xs);
  r.eq = c.size() > 0 ? c.lpNorm<Eigen::Infinity>() : 0.0;
  for (int i = 1; i <= spec.horizon; ++i) {
    if (spec.box_applies(i)) {
      r.state_box = std::max(r.state_box,
                             spec.model->state_box.violation(xs[static_cast<size_t>(i)]));
    }
  }
  if (spec.summed) {
    r.output = spec.summed->base.violation(summed_output_value(spec, z, xs));
  }
  double total = 0.0, carry = 0.0;
  for (int i = 0; i < spec.horizon; ++i) {
    const double v =
        (*spec.cost)(spec.start_time + i, xs[static_cast<size_t>(i)], us[static_cast<size_t>(i)]) -
        carry;
    const double t = total + v;
    carry = (t - total) - v;
    total = t;
  }
  r.objective = total;
  return r;
}

// Augmented-Lagrangian value; gradient (by one adjoint sweep) when grad != nullptr.
double eval_augmented(const NlpSolver::ShootingSpec& spec, const Multipliers& w,
                      const Vector& z, double* objective_out, Vector* grad) {
  const int N = spec.horizon;
  const int n = spec.n;
  const double rho = w.rho;
  const auto& box = spec.model->state_box;

  const auto us = spec.controls_of(z);
  const auto xs = roll_states(*spec.model, spec.x0_of(z), us);

  double objective = 0.0, carry = 0.0;
  for (int i = 0; i < N; ++i) {
    const double v =
        (*spec.cost)(spec.start_time + i, xs[static_cast<size_t>(i)], us[static_cast<size_t>(i)]) -
        carry;
    const double t = objective + v;
    carry = (t - objective) - v;
    objective = t;
  }
  double phi = objective;

  const Vector c = equality_value(spec, xs);
  if (c.size() > 0) phi += w.mu.dot(c) + 0.5 * rho * c.squaredNorm();

  auto box_terms = [&](int i, const StateVector& x, double* value, Vector* slope) {
    const auto& glo = w.box_lo[static_cast<size_t>(i)];
    const auto& ghi = w.box_hi[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (std::isfinite(box.upper[j])) {
        if (value) *value += phr_value(x[j] - box.upper[j], ghi[j], rho);
        if (slope) (*slope)[j] += phr_slope(x[j] - box.upper[j], ghi[j], rho);
      }
      if (std::isfinite(box.lower[j])) {
        if (value) *value += phr_value(box.lower[j] - x[j], glo[j], rho);
        if (slope) (*slope)[j] -= phr_slope(box.lower[j] - x[j], glo[j], rho);
      }
    }
  };

  for (int i = 1; i <= N; ++i) {
    if (spec.box_applies(i)) box_terms(i, xs[static_cast<size_t>(i)], &phi, nullptr);
  }

  Vector s, w_out;
  if (spec.summed) {
    s = summed_output_value(spec, z, xs);
    const auto& b = spec.summed->base;
    w_out = Vector::Zero(s.size());
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      if (std::isfinite(b.upper[j])) {
        phi += phr_value(s[j] - b.upper[j], w.out_hi[j], rho);
        w_out[j] += phr_slope(s[j] - b.upper[j], w.out_hi[j], rho);
      }
      if (std::isfinite(b.lower[j])) {
        phi += phr_value(b.lower[j] - s[j], w.out_lo[j], rho);
        w_out[j] -= phr_slope(b.lower[j] - s[j], w.out_lo[j], rho);
      }
    }
  }

  if (objective_out) *objective_out = objective;
  if (!grad) return phi;

  grad->setZero(spec.dim);
  Vector p = Vector::Zero(n);
  if (c.size() > 0) p = w.mu + rho * c;
  if (spec.box_applies(N)) box_terms(N, xs[static_cast<size_t>(N)], nullptr, &p);

  const int offset = spec.free_x0 ? n : 0;
  for (int i = N - 1; i >= 0; --i) {
    const long k = spec.start_time + i;
    const auto& xi = xs[static_cast<size_t>(i)];
    const auto& ui = us[static_cast<size_t>(i)];
    const Matrix B = spec.model->f_u(xi, ui);
    Vector gu = spec.cost->grad_u(k, xi, ui) + B.transpose() * p;
    if (spec.summed) gu += spec.summed->output.jac_control(xi, ui).transpose() * w_out;
    grad->segment(offset + i * spec.m, spec.m) = gu;

    const Matrix A = spec.model->f_x(xi, ui);
    p = spec.cost->grad_x(k, xi, ui) + A.transpose() * p;
    if (spec.summed) p += spec.summed->output.jac_state(xi, ui).transpose() * w_out;
    if (i >= 1 && spec.box_applies(i)) box_terms(i, xi, nullptr, &p);
  }
  if (spec.free_x0) {
    Vector g0 = p;
    if (spec.terminal == NlpSolver::ShootingSpec::Terminal::kPeriodic && c.size() > 0) {
      g0 -= w.mu + rho * c;  // direct dependence of the closure on x0
    }
    grad->segment(0, n) = g0;
  }
  return phi;
}

void update_multipliers(const NlpSolver::ShootingSpec& spec, Multipliers& w, const Vector& z) {
  const auto us = spec.controls_of(z);
  const auto xs = roll_states(*spec.model, spec.x0_of(z), us);
  const Vector c = equality_value(spec, xs);
  if (c.size() > 0) w.mu += w.rho * c;
  const auto& box = spec.model->state_box;
  for (int i = 1; i <= spec.horizon; ++i) {
    if (!spec.box_applies(i)) continue;
    const auto& x = xs[static_cast<size_t>(i)];
    auto& glo = w.box_lo[static_cast<size_t>(i)];
    auto& ghi = w.box_hi[static_cast<size_t>(i)];
    for (int j = 0; j < spec.n; ++j) {
      if (std::isfinite(box.upper[j])) ghi[j] = phr_slope(x[j] - box.upper[j], ghi[j], w.rho);
      if (std::isfinite(box.lower[j])) glo[j] = phr_slope(box.lower[j] - x[j], glo[j], w.rho);
    }
  }
  if (spec.summed) {
    const Vector s = summed_output_value(spec, z, xs);
    const auto& b = spec.summed->base;
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      if (std::isfinite(b.upper[j])) w.out_hi[j] = phr_slope(s[j] - b.upper[j], w.out_hi[j], w.rho);
      if (std::isfinite(b.lower[j])) w.out_lo[j] = phr_slope(b.lower[j] - s[j], w.out_lo[j], w.rho);
    }
  }
}

Vector project_box(const Vector& z, const Vector& lb, const Vector& ub) {
  return z.cwiseMax(lb).cwiseMin(ub);
}

}  // namespace

struct NlpSolver::InnerResult {
  Vector z;
  double phi = 0.0;
  double objective = 0.0;
  double projected_gradient = 0.0;
  int iterations = 0;
};

NlpSolver::NlpSolver(SolverOptions options) : options_(options) {}

namespace {

// Projected quasi-Newton descent on the augmented Lagrangian over the decision
// box. Two-metric flavor: BFGS model on the free variables, gradient steps on
// the bound-locked ones, Armijo along the projected arc.
NlpSolver::InnerResult inner_minimize(const NlpSolver::ShootingSpec& spec,
                                      const Multipliers& w, Vector z,
                                      const SolverOptions& opt) {
  NlpSolver::InnerResult out;
  const int D = spec.dim;
  Matrix B = Matrix::Identity(D, D);
  bool scaled = false;

  Vector g(D);
  double objective = 0.0;
  double phi = eval_augmented(spec, w, z, &objective, &g);

  int it = 0;
  for (; it < opt.max_inner; ++it) {
    const Vector pg = z - project_box(z - g, spec.lb, spec.ub);
    const double pg_norm = pg.lpNorm<Eigen::Infinity>();
    const double tol = opt.eps_kkt * std::max(1.0, std::abs(objective));
    if (pg_norm <= tol) break;

    // Bound-locked coordinates: at a bound with the gradient pushing outward.
    std::vector<int> free_idx;
    std::vector<char> is_free(static_cast<size_t>(D), 0);
    free_idx.reserve(static_cast<size_t>(D));
    for (int i = 0; i < D; ++i) {
      const double span = 1e-12 * std::max(1.0, std::abs(z[i]));
      const bool at_lo = z[i] - spec.lb[i] <= span && g[i] > 0.0;
      const bool at_hi = spec.ub[i] - z[i] <= span && g[i] < 0.0;
      if (!at_lo && !at_hi) {
        is_free[static_cast<size_t>(i)] = 1;
        free_idx.push_back(i);
      }
    }

    Vector d = -g;
    if (!free_idx.empty()) {
      const int F = static_cast<int>(free_idx.size());
      Matrix Bf(F, F);
      Vector gf(F);
      for (int a = 0; a < F; ++a) {
        gf[a] = g[free_idx[static_cast<size_t>(a)]];
        for (int b = 0; b < F; ++b) {
          Bf(a, b) = B(free_idx[static_cast<size_t>(a)], free_idx[static_cast<size_t>(b)]);
        }
      }
      Eigen::LDLT<Matrix> ldlt(Bf);
      const Vector df = ldlt.solve(-gf);
      if (ldlt.info() == Eigen::Success && df.allFinite()) {
        d.setZero();
        for (int a = 0; a < F; ++a) d[free_idx[static_cast<size_t>(a)]] = df[a];
        // Locked coordinates keep a (projected-away) gradient step.
        for (int i = 0; i < D; ++i) {
          if (!is_free[static_cast<size_t>(i)]) d[i] = -g[i];
        }
      }
    }

    auto try_direction = [&](const Vector& dir, Vector& z_new, double& phi_new) {
      double alpha = 1.0;
      for (int ls = 0; ls < 60; ++ls) {
        z_new = project_box(z + alpha * dir, spec.lb, spec.ub);
        const Vector sstep = z_new - z;
        if (sstep.lpNorm<Eigen::Infinity>() == 0.0) return false;
        phi_new = eval_augmented(spec, w, z_new, nullptr, nullptr);
        if (phi_new <= phi + 1e-4 * g.dot(sstep)) return true;
        alpha *= 0.5;
      }
      return false;
    };

    Vector z_new;
    double phi_new = 0.0;
    bool ok = try_direction(d, z_new, phi_new);
    if (!ok && d != -g) {
      ok = try_direction(-g, z_new, phi_new);
    }
    if (!ok) break;  // stalled at numerical precision

    Vector g_new(D);
    double obj_new = 0.0;
    phi_new = eval_augmented(spec, w, z_new, &obj_new, &g_new);

    const Vector s = z_new - z;
    const Vector y = g_new - g;
    double sy = s.dot(y);
    if (!scaled && sy > 0.0) {
      const double yy = y.squaredNorm();
      if (yy > 0.0) B *= yy / sy;
      scaled = true;
    }
    Vector Bs = B * s;
    const double sBs = s.dot(Bs);
    Vector yd = y;
    if (sBs > 0.0 && sy < 0.2 * sBs) {  // Powell damping keeps B positive definite
      const double theta = 0.8 * sBs / (sBs - sy);
      yd = theta * y + (1.0 - theta) * Bs;
      sy = s.dot(yd);
    }
    if (sy > 1e-14 * std::max(1.0, s.squaredNorm()) && sBs > 0.0) {
      B += (yd * yd.transpose()) / sy - (Bs * Bs.transpose()) / sBs;
    }

    z = z_new;
    g = g_new;
    phi = phi_new;
    objective = obj_new;
  }

  out.z = z;
  out.phi = phi;
  out.objective = objective;
  out.projected_gradient = (z - project_box(z - g, spec.lb, spec.ub)).lpNorm<Eigen::Infinity>();
  out.iterations = it;
  return out;
}

}  // namespace

Vector NlpSolver::solve_shooting(const ShootingSpec& spec, const Vector& z0, double* objective,
                                 double* stationarity, int* outer_used, int* inner_used,
                                 SolveStatus* status) {
  Multipliers w = Multipliers::Init(spec, options_.initial_penalty);
  Vector z = project_box(z0, spec.lb, spec.ub);

  // Baseline for the descent contract: a feasible warm start is returned
  // unchanged rather than ever returning something worse.
  bool have_warm_baseline = false;
  double warm_objective = 0.0;
  {
    const Residuals r0 = compute_residuals(spec, z);
    if (r0.eq <= options_.eps_feas && r0.state_box <= options_.eps_feas &&
        r0.output <= options_.eps_feas) {
      have_warm_baseline = true;
      warm_objective = r0.objective;
    }
  }
  const Vector z_warm = z;

  bool have_best = false;   // best iterate at the tightened residual level
  Vector best_z;
  double best_objective = 0.0;
  bool converged = false;

  double prev_total = std::numeric_limits<double>::infinity();
  *inner_used = 0;
  int outer = 0;
  double last_pg = 0.0;
  for (; outer < options_.max_outer; ++outer) {
    InnerResult res = inner_minimize(spec, w, z, options_);
    z = res.z;
    *inner_used += res.iterations;
    last_pg = res.projected_gradient;

    const Residuals r = compute_residuals(spec, z);
    const bool feasible = r.eq <= options_.eps_eq && r.state_box <= options_.eps_feas &&
                          r.output <= options_.eps_feas;
    const bool eq_tight = r.eq <= options_.eps_eq * options_.eq_tighten ||
                          (feasible && w.rho >= options_.penalty_cap);
    if (options_.trace) {
      (*options_.trace) << "outer " << outer << " rho " << w.rho << " eq " << r.eq
                        << " box " << r.state_box << " out " << r.output << " obj "
                        << r.objective << " pg " << res.projected_gradient << "\n";
    }
    if (feasible && eq_tight && (!have_best || r.objective <= best_objective)) {
      have_best = true;
      best_z = z;
      best_objective = r.objective;
    }
    const double tol = options_.eps_kkt * std::max(1.0, std::abs(res.objective));
    if (feasible && eq_tight && res.projected_gradient <= tol) {
      converged = true;
      ++outer;
      break;
    }

    update_multipliers(spec, w, z);
    if (r.total() > prev_total / options_.residual_shrink) {
      w.rho = std::min(w.rho * options_.penalty_growth, options_.penalty_cap);
    }
    prev_total = r.total();
  }

  // Selection: the best tightened iterate, unless the warm start beats it
  // (which only happens within solver noise of a fixed point).
  Vector z_final;
  bool picked_converged = false;
  if (have_best && (!have_warm_baseline || best_objective <= warm_objective + 1e-12)) {
    z_final = best_z;
    picked_converged = converged && (best_z - z).lpNorm<Eigen::Infinity>() == 0.0;
  } else if (have_warm_baseline) {
    z_final = z_warm;
  } else {
    z_final = z;  // no feasible iterate found; report the last one honestly
  }
  *status = picked_converged ? SolveStatus::kConverged : SolveStatus::kMaxIterations;

  const Residuals rf = compute_residuals(spec, z_final);
  *objective = rf.objective;
  *outer_used = outer;
  Vector g(spec.dim);
  eval_augmented(spec, w, z_final, nullptr, &g);
  *stationarity = (z_final - project_box(z_final - g, spec.lb, spec.ub)).lpNorm<Eigen::Infinity>();
  if (*status != SolveStatus::kConverged) *stationarity = std::max(*stationarity, last_pg);
  return z_final;
}

NlpSolution NlpSolver::solve(const NlpProblem& problem,
                             const std::vector<ControlVector>& warm_start) {
  if (problem.horizon < 1) throw std::invalid_argument("solve: horizon must be >= 1");
  if (static_cast<int>(warm_start.size()) != problem.horizon) {
    throw std::invalid_argument("solve: warm start length != horizon");
  }
  if (problem.initial_state.size() != problem.model.state_dim) {
    throw std::invalid_argument("solve: initial state dimension mismatch");
  }
  if (problem.model.state_box.violation(problem.initial_state) > options_.eps_feas) {
    throw std::invalid_argument("solve: initial state outside the state box");
  }
  if (problem.terminal_state &&
      problem.model.state_box.violation(*problem.terminal_state) > options_.eps_feas) {
    throw std::invalid_argument("solve: terminal target outside the state box");
  }

  ShootingSpec spec;
  spec.model = &problem.model;
  spec.cost = &problem.cost;
  spec.start_time = problem.start_time;
  spec.horizon = problem.horizon;
  spec.free_x0 = false;
  spec.x0_fixed = problem.initial_state;
  if (problem.terminal_state) {
    spec.terminal = ShootingSpec::Terminal::kFixed;
    spec.terminal_target = *problem.terminal_state;
  }
  if (problem.summed_output) spec.summed = &*problem.summed_output;
  spec.finalize();

  Vector z0(spec.dim);
  for (int i = 0; i < problem.horizon; ++i) {
    z0.segment(i * spec.m, spec.m) = warm_start[static_cast<size_t>(i)];
  }

  NlpSolution sol;
  // Warm-start feasibility gate: callers are expected to supply the shifted
  // feasible candidate.
  {
    const Residuals r = compute_residuals(spec, z0);
    double control_violation = 0.0;
    for (const auto& u : warm_start) {
      control_violation = std::max(control_violation, problem.model.control_box.violation(u));
    }
    if (r.eq > options_.eps_feas || r.state_box > options_.eps_feas ||
        r.output > options_.eps_feas || control_violation > options_.eps_feas) {
      sol.status = SolveStatus::kInfeasibleStart;
      sol.controls = warm_start;
      sol.states = roll_states(problem.model, problem.initial_state, warm_start);
      sol.objective = r.objective;
      sol.terminal_residual = r.eq;
      sol.state_box_violation = std::max(r.state_box, control_violation);
      sol.output_residual = r.output;
      return sol;
    }
  }
  const double warm_objective = compute_residuals(spec, project_box(z0, spec.lb, spec.ub)).objective;

  double objective = 0.0, stationarity = 0.0;
  int outer = 0, inner = 0;
  SolveStatus status = SolveStatus::kMaxIterations;
  const Vector z = solve_shooting(spec, z0, &objective, &stationarity, &outer, &inner, &status);

  if (objective > warm_objective + 1e-12) ++descent_violations_;

  sol.controls = spec.controls_of(z);
  sol.states = roll_states(problem.model, problem.initial_state, sol.controls);
  const Vector c = equality_value(spec, sol.states);
  sol.terminal_residual = c.size() > 0 ? c.lpNorm<Eigen::Infinity>() : 0.0;
  if (problem.terminal_state) {
    // Bookkeeping snap: the stored endpoint is the target, the residual keeps
    // the true gap on record.
    sol.states.back() = *problem.terminal_state;
  }
  sol.objective = objective;
  sol.stationarity_residual = stationarity;
  const Residuals rf = compute_residuals(spec, z);
  sol.state_box_violation = rf.state_box;
  sol.output_residual = rf.output;
  sol.outer_iterations = outer;
  sol.inner_iterations = inner;
  sol.status = status;
  return sol;
}

PeriodicSolution NlpSolver::solve_periodic(const PeriodicProblem& problem,
                                           const StateVector& x0_guess,
                                           const std::vector<ControlVector>& warm_start) {
  if (problem.period < 1) throw std::invalid_argument("solve_periodic: period must be >= 1");
  if (static_cast<int>(warm_start.size()) != problem.period) {
    throw std::invalid_argument("solve_periodic: warm start length != period");
  }

  ShootingSpec spec;
  spec.model = &problem.model;
  spec.cost = &problem.cost;
  spec.start_time = 0;
  spec.horizon = problem.period;
  spec.free_x0 = true;
  spec.terminal = ShootingSpec::Terminal::kPeriodic;
  spec.closure_offset = problem.closure_offset.size() > 0
                            ? problem.closure_offset
                            : Vector(Vector::Zero(problem.model.state_dim));
  spec.finalize();

  Vector z0(spec.dim);
  z0.segment(0, spec.n) = x0_guess;
  for (int i = 0; i < problem.period; ++i) {
    z0.segment(spec.n + i * spec.m, spec.m) = warm_start[static_cast<size_t>(i)];
  }

  double objective = 0.0, stationarity = 0.0;
  int outer = 0, inner = 0;
  SolveStatus status = SolveStatus::kMaxIterations;
  const Vector z = solve_shooting(spec, z0, &objective, &stationarity, &outer, &inner, &status);

  PeriodicSolution sol;
  sol.initial_state = spec.x0_of(z);
  sol.controls = spec.controls_of(z);
  sol.states = roll_states(problem.model, sol.initial_state, sol.controls);
  sol.objective = objective;
  sol.closure_residual =
      (sol.states.back() - sol.states.front() - spec.closure_offset).lpNorm<Eigen::Infinity>();
  sol.status = status;
  return sol;
}

}  // namespace ilempc
