#pragma once

#include "adacat/numkit.hpp"
#include "adacat/oracle.hpp"

#include <functional>
#include <vector>

namespace adacat {

// Evaluated once per iteration unit (before the first unit and after every
// completed one); may call the oracle, and those calls are counted. No unit
// executes after the predicate returns true.
using StopPredicate = std::function<bool(const Vector& y, int unit_count)>;

enum class SolverKind { Gd, SteepestDescent, Racdm, Am };

// What one counted unit means per method: one step for GD and steepest
// descent, n coordinate steps for RACDM, one full cyclic sweep for AM.
// c_n_label documents the per-unit oracle growth class.
struct SolverDescriptor {
  SolverKind kind;
  const char* c_n_label;      // O(1), O(n), O(p)
  const char* iteration_unit;
};

SolverDescriptor describe(SolverKind kind);

struct SolverEvent {
  int unit;
  double f_value;
  double grad_equiv;  // cumulative oracle cost at this point
  double wall_ms;
};

// Result of a run. hit_cap reports cap exhaustion with the predicate still
// false; the partial run stays usable (the envelope converts this into a
// typed InnerCapExceeded, the bench records it in the trace status).
struct SolverRun {
  Vector final_point;
  int units = 0;
  bool hit_cap = false;
  std::vector<SolverEvent> events;
};

// Exact one-dimensional minimization of a convex phi with phi'(0) < 0:
// doubling bracket from h_hint (cap 100), then bisection on phi' (cap 200),
// stopping at |phi'(h)| <= 1e-8 |phi'(0)| or bracket width <= 1e-12 h.
// Throws NoSignChange when the doubling cap is reached with phi' still
// negative.
double scalar_minimize(const std::function<double(double)>& phi,
                       const std::function<double(double)>& phi_prime,
                       double h_hint);

// Fixed-step gradient descent: x <- x - step * grad f(x).
SolverRun gd_run(const Oracle& o, const Vector& x0, double step,
                 const StopPredicate& stop, int cap);

// Steepest descent with exact line search; uses the closed form
// h = g'g / (g'Hg) when the oracle advertises quadratic structure,
// scalar_minimize otherwise.
SolverRun steepest_run(const Oracle& o, const Vector& x0,
                       const StopPredicate& stop, int cap);

// Running per-coordinate directional-smoothness estimates for RACDM;
// persists across runs for warm starts.
struct RacdmState {
  Vector beta_hat;
  static constexpr double beta_floor = 1e-12;
};

// Optional per-step probe: coordinate, partial before, partial at the
// accepted point, estimate after the final halving.
using RacdmStepObserver =
    std::function<void(int i, double d_before, double d_after, double beta)>;

// Random adaptive coordinate descent: sample a coordinate, step by the
// inverse smoothness estimate, double the estimate while the partial
// derivative flips sign (cap 60), accept, then halve the estimate.
SolverRun racdm_run(const Oracle& o, const Vector& x0, RacdmState& state,
                    Rng& rng, const StopPredicate& stop, int cap,
                    const RacdmStepObserver& observe = nullptr);

// Cyclic alternating minimization over the oracle's blocks (p >= 2);
// every block update is an exact block solve.
SolverRun am_run(const Oracle& o, const Vector& x0, const StopPredicate& stop,
                 int cap);

}  // namespace adacat
