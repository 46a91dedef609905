#include "adacat/solvers.hpp"

#include "adacat/errors.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace adacat {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

void record(SolverRun& run, const Oracle& o, const Vector& x, int unit,
            Clock::time_point start) {
  if (!x.allFinite())
    throw NoConvergence("solver produced a non-finite iterate at unit " +
                        std::to_string(unit));
  const double f = o.value(x);
  run.events.push_back({unit, f, o.grad_equiv_cost(), elapsed_ms(start)});
}

}  // namespace

SolverDescriptor describe(SolverKind kind) {
  switch (kind) {
    case SolverKind::Gd:
      return {kind, "O(1)", "one gradient step"};
    case SolverKind::SteepestDescent:
      return {kind, "O(1)", "one exact line-search step"};
    case SolverKind::Racdm:
      return {kind, "O(n)", "n coordinate steps"};
    case SolverKind::Am:
      return {kind, "O(p)", "one cyclic sweep over all blocks"};
  }
  return {kind, "O(1)", "unknown"};
}

double scalar_minimize(const std::function<double(double)>& phi,
                       const std::function<double(double)>& phi_prime,
                       double h_hint) {
  (void)phi;  // derivative bisection needs no value calls
  const double d0 = phi_prime(0.0);
  if (d0 >= 0.0) return 0.0;
  const double tol_d = 1e-8 * std::abs(d0);

  double lo = 0.0;
  double hi = h_hint > 0.0 ? h_hint : 1.0;
  double dhi = phi_prime(hi);
  int doublings = 0;
  while (dhi < 0.0) {
    if (++doublings > 100)
      throw NoSignChange("scalar_minimize: derivative stayed negative after "
                         "100 doublings (direction unbounded below?)");
    lo = hi;
    hi *= 2.0;
    dhi = phi_prime(hi);
  }
  if (std::abs(dhi) <= tol_d) return hi;

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double dm = phi_prime(mid);
    if (std::abs(dm) <= tol_d) return mid;
    if (dm < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-12 * hi) break;
  }
  return 0.5 * (lo + hi);
}

SolverRun gd_run(const Oracle& o, const Vector& x0, double step,
                 const StopPredicate& stop, int cap) {
  const auto start = Clock::now();
  SolverRun run;
  Vector x = x0;
  record(run, o, x, 0, start);
  while (!stop(x, run.units)) {
    if (run.units >= cap) {
      run.hit_cap = true;
      break;
    }
    x -= step * o.gradient(x);
    ++run.units;
    record(run, o, x, run.units, start);
  }
  run.final_point = std::move(x);
  return run;
}

SolverRun steepest_run(const Oracle& o, const Vector& x0,
                       const StopPredicate& stop, int cap) {
  const auto start = Clock::now();
  SolverRun run;
  Vector x = x0;
  double h_hint = 1.0;
  record(run, o, x, 0, start);
  while (!stop(x, run.units)) {
    if (run.units >= cap) {
      run.hit_cap = true;
      break;
    }
    const Vector g = o.gradient(x);
    const double gg = g.squaredNorm();
    if (gg == 0.0) break;  // stationary, no descent direction left

    double h;
    if (o.is_quadratic()) {
      const double curv = g.dot(o.hessian_apply(g));
      if (!(curv > 0.0))
        throw NoSignChange("steepest_run: zero curvature along the gradient");
      h = gg / curv;
    } else if (o.has_ray_restriction()) {
      const auto ray = o.ray_restriction(x, -g);
      h = scalar_minimize(ray.value, ray.derivative, h_hint);
      h_hint = h > 0.0 ? h : h_hint;
    } else {
      auto phi = [&](double t) { return o.value(x - t * g); };
      auto phi_prime = [&](double t) {
        if (t == 0.0) return -gg;  // gradient at x is already in hand
        return -g.dot(o.gradient(x - t * g));
      };
      h = scalar_minimize(phi, phi_prime, h_hint);
      h_hint = h > 0.0 ? h : h_hint;
    }
    x -= h * g;
    ++run.units;
    record(run, o, x, run.units, start);
  }
  run.final_point = std::move(x);
  return run;
}

SolverRun racdm_run(const Oracle& o, const Vector& x0, RacdmState& state,
                    Rng& rng, const StopPredicate& stop, int cap,
                    const RacdmStepObserver& observe) {
  const int n = o.dim();
  if (state.beta_hat.size() != n)
    throw DimensionMismatch("racdm_run: beta_hat dimension mismatch");
  if (!(state.beta_hat.minCoeff() > 0.0))
    throw DimensionMismatch("racdm_run: beta_hat must be positive");

  const auto start = Clock::now();
  SolverRun run;
  Vector x = x0;
  record(run, o, x, 0, start);
  while (!stop(x, run.units)) {
    if (run.units >= cap) {
      run.hit_cap = true;
      break;
    }
    for (int s = 0; s < n; ++s) {
      const int i = std::min(static_cast<int>(rng.uniform() * n), n - 1);
      const double xi = x[i];
      const double d0 = o.partial(i, x);
      double bh = state.beta_hat[i];
      x[i] = xi - d0 / bh;
      double d1 = o.partial(i, x);
      int doublings = 0;
      while (d0 * d1 < 0.0) {
        if (++doublings > 60)
          throw DoublingCapExceeded(
              "racdm_run: 60 doublings of beta_hat[" + std::to_string(i) +
              "] without the sign condition holding");
        bh *= 2.0;
        x[i] = xi - d0 / bh;
        d1 = o.partial(i, x);
      }
      bh = std::max(0.5 * bh, RacdmState::beta_floor);
      state.beta_hat[i] = bh;
      if (observe) observe(i, d0, d1, bh);
    }
    ++run.units;
    record(run, o, x, run.units, start);
  }
  run.final_point = std::move(x);
  return run;
}

SolverRun am_run(const Oracle& o, const Vector& x0, const StopPredicate& stop,
                 int cap) {
  if (!o.has_blocks() || o.block_count() < 2)
    throw MissingBlockSolver(
        "am_run: oracle must provide a block layout with p >= 2");
  const int p = o.block_count();

  const auto start = Clock::now();
  SolverRun run;
  Vector x = x0;
  record(run, o, x, 0, start);
  while (!stop(x, run.units)) {
    if (run.units >= cap) {
      run.hit_cap = true;
      break;
    }
    for (int b = 0; b < p; ++b) x = o.block_argmin(b, x);
    ++run.units;
    record(run, o, x, run.units, start);
  }
  run.final_point = std::move(x);
  return run;
}

}  // namespace adacat
