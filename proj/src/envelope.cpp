#include "adacat/envelope.hpp"

#include "adacat/errors.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace adacat {

bool CatalystConfig::validate() const {
  if (!(alpha > beta && beta > gamma && gamma > 0.0))
    throw ConfigError("alpha/beta/gamma",
                      "requires alpha > beta > gamma > 0");
  if (!(Ld > 0.0) || Ld > Lu)
    throw ConfigError("Ld/Lu", "requires 0 < Ld <= Lu");
  if (!(L0 > 0.0)) throw ConfigError("L0", "requires L0 > 0");
  if (!(eps > 0.0)) throw ConfigError("eps", "requires eps > 0");
  if (inner_unit_cap < 1 || outer_cap < 1)
    throw ConfigError("caps", "iteration caps must be >= 1");
  return gamma <= 1.0;  // growth test fires trivially; caller may warn
}

std::pair<double, double> ms_coefficients(double A_k, double L) {
  const double invL = 1.0 / L;
  const double a = 0.5 * (invL + std::sqrt(invL * invL + 4.0 * A_k * invL));
  return {a, A_k + a};
}

Vector extrapolate(const Vector& y, const Vector& z, double A_k, double a_next,
                   double A_next) {
  if (y.size() != z.size())
    throw DimensionMismatch("extrapolate: y and z dimensions differ");
  return (A_k / A_next) * y + (a_next / A_next) * z;
}

MsCheck ms_condition(const ProxOracle& p, const Vector& y) {
  const double lhs = p.gradient(y).norm();
  const double rhs = 0.5 * p.L() * (y - p.center()).norm();
  return {lhs <= rhs, lhs, rhs};
}

SolverRun GdInner::run(const ProxOracle& prox, const Vector& start,
                       const StopPredicate& stop, int cap) {
  // grad F is (L_f + L)-Lipschitz, so 1/(L_f + L) is the canonical step.
  return gd_run(prox, start, 1.0 / (lf_hint_ + prox.L()), stop, cap);
}

SolverRun SteepestInner::run(const ProxOracle& prox, const Vector& start,
                             const StopPredicate& stop, int cap) {
  return steepest_run(prox, start, stop, cap);
}

RacdmInner::RacdmInner(int dim, double beta0, std::uint64_t seed,
                       bool warm_start)
    : beta0_(Vector::Constant(dim, beta0)), rng_(seed),
      warm_start_(warm_start) {
  if (!(beta0 > 0.0))
    throw ConfigError("beta0", "initial smoothness estimates must be > 0");
  state_.beta_hat = beta0_;
}

void RacdmInner::reset() { state_.beta_hat = beta0_; }

SolverRun RacdmInner::run(const ProxOracle& prox, const Vector& start,
                          const StopPredicate& stop, int cap) {
  if (!warm_start_) state_.beta_hat = beta0_;
  return racdm_run(prox, start, state_, rng_, stop, cap);
}

SolverRun AmInner::run(const ProxOracle& prox, const Vector& start,
                       const StopPredicate& stop, int cap) {
  return am_run(prox, start, stop, cap);
}

OuterRecord catalyst_outer_step(EnvelopeState& state,
                                const CatalystConfig& cfg, InnerSolver& inner,
                                const Oracle& o) {
  // The scale-up by beta and the first attempt's scale-down cancel, so
  // attempt 1 trials exactly L = min{alpha L_k, L_u}; every retry divides
  // by beta, floored at L_d.
  double L_run = std::min(cfg.alpha * state.L_prev, cfg.Lu);

  int t = 0;
  int prev_units = 0;
  double a = 0.0, A_next = 0.0, L = 0.0;
  Vector x, y_next;
  MsCheck cert{};
  std::vector<int> units_hist;

  for (;;) {
    ++t;
    if (t > 1) L_run /= cfg.beta;
    L = std::max(L_run, cfg.Ld);
    std::tie(a, A_next) = ms_coefficients(state.A, L);
    x = extrapolate(state.y, state.z, state.A, a, A_next);

    ProxOracle prox(o, L, x);
    MsCheck last{};
    StopPredicate until_certified = [&](const Vector& yy, int) {
      last = ms_condition(prox, yy);
      return last.holds;
    };
    SolverRun attempt = inner.run(prox, cfg.start_at_y ? state.y : x,
                                  until_certified, cfg.inner_unit_cap);
    if (attempt.hit_cap)
      throw InnerCapExceeded(
          L, t,
          "inner solver exhausted " + std::to_string(cfg.inner_unit_cap) +
              " units at L = " + std::to_string(L) + " (attempt " +
              std::to_string(t) + ")");

    y_next = std::move(attempt.final_point);
    cert = last;
    units_hist.push_back(attempt.units);

    const bool effort_grew =
        t > 1 && static_cast<double>(attempt.units) >=
                     cfg.gamma * static_cast<double>(prev_units);
    prev_units = attempt.units;
    if (effort_grew || L == cfg.Ld) break;
  }

  // z-step with the gradient of the original objective.
  state.z -= a * o.gradient(y_next);
  state.x = x;
  state.y = y_next;
  state.A = A_next;
  state.L_prev = L;
  ++state.k;

  return {state.k,  L,       t,       units_hist, A_next, cert.lhs,
          cert.rhs, o.value(state.y), state.y,    state.x, state.z};
}

Trace catalyst_run(const Oracle& o, const Vector& y0,
                   const CatalystConfig& cfg, InnerSolver& inner, double f_ref,
                   std::vector<OuterRecord>* records) {
  cfg.validate();
  if (!y0.allFinite())
    throw DimensionMismatch("catalyst_run: starting point must be finite");

  const auto start = std::chrono::steady_clock::now();
  auto wall = [&] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  };

  EnvelopeState st{0.0, y0, y0, y0, cfg.L0, 0};
  Trace trace;
  trace.f_ref = f_ref;

  double f_y = o.value(y0);
  trace.events.push_back({0, o.grad_equiv_cost(), f_y, f_y - f_ref,
                          std::nullopt, 0.0, std::nullopt, wall()});

  trace.terminal_status = TerminalStatus::outer_cap;
  while (st.k < cfg.outer_cap) {
    if (f_y - f_ref <= cfg.eps) {
      trace.terminal_status = TerminalStatus::converged;
      break;
    }
    OuterRecord rec = catalyst_outer_step(st, cfg, inner, o);
    f_y = rec.f_y;
    int units = 0;
    for (int u : rec.units_per_attempt) units += u;
    trace.events.push_back({rec.k, o.grad_equiv_cost(), f_y, f_y - f_ref,
                            rec.L_accepted, rec.A_k, units, wall()});
    if (records) records->push_back(std::move(rec));
  }
  if (f_y - f_ref <= cfg.eps)
    trace.terminal_status = TerminalStatus::converged;
  return trace;
}

}  // namespace adacat
