#pragma once

#include "adacat/numkit.hpp"
#include "adacat/oracle.hpp"
#include "adacat/solvers.hpp"
#include "adacat/trace.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace adacat {

// Parameters of the adaptive envelope. alpha scales the regularization
// parameter up between outer iterations, beta scales it down between
// attempts, gamma is the inner-effort growth threshold that ends the
// attempt loop. Requires alpha > beta > gamma > 0; gamma <= 1 makes the
// growth test fire trivially and is only warned about, not rejected.
struct CatalystConfig {
  double alpha = 2.0;
  double beta = 1.5;
  double gamma = 1.3;
  double L0 = 1.0;
  double Ld = 1e-3;
  double Lu = 1e3;
  double eps = 1e-9;
  int inner_unit_cap = 100000;
  int outer_cap = 1000;
  bool warm_start_state = true;

  // Starting point handed to the inner method each attempt: the
  // extrapolation point x^{k+1} (the scheme's literal reading, default),
  // or the last accepted y^k (the warm-start strategy used in the
  // experiments). The certificate is checked against x^{k+1} either way.
  bool start_at_y = false;

  // Throws ConfigError on hard violations; returns true when gamma <= 1
  // deserves a warning.
  bool validate() const;
};

// Accumulator state of the accelerated proximal scheme.
struct EnvelopeState {
  double A = 0.0;  // A_k, non-decreasing from A_0 = 0
  Vector y;
  Vector z;
  Vector x;  // extrapolation point of the accepted attempt
  double L_prev;
  int k = 0;
};

// Everything the outer loop decided at one iteration: the accepted
// regularization parameter, the attempt ladder, the certificate values at
// acceptance, and the accepted iterates (kept for trajectory checks).
struct OuterRecord {
  int k;
  double L_accepted;
  int attempts;
  std::vector<int> units_per_attempt;
  double A_k;
  double cert_lhs;  // ||grad F_{L,x}(y)||
  double cert_rhs;  // (L/2) ||y - x||
  double f_y;
  Vector y;
  Vector x;
  Vector z;
};

// Step coefficients: the positive root a of L a^2 - a - A_k = 0 and the
// accumulator A_{k+1} = A_k + a, satisfying L a^2 = A_{k+1} exactly.
std::pair<double, double> ms_coefficients(double A_k, double L);

// x^{k+1} = (A_k / A_{k+1}) y^k + (a_{k+1} / A_{k+1}) z^k.
Vector extrapolate(const Vector& y, const Vector& z, double A_k, double a_next,
                   double A_next);

struct MsCheck {
  bool holds;
  double lhs;
  double rhs;
};

// The inexactness certificate ||grad F_{L,x}(y)|| <= (L/2) ||y - x||.
// The gradient call is charged to the counter.
MsCheck ms_condition(const ProxOracle& p, const Vector& y);

// Run-until-predicate contract every inner method implements for the
// envelope. reset() drops warm-started adaptive state between independent
// envelope runs.
class InnerSolver {
 public:
  virtual ~InnerSolver() = default;
  virtual SolverRun run(const ProxOracle& prox, const Vector& start,
                        const StopPredicate& stop, int cap) = 0;
  virtual void reset() {}
};

// Fixed-step gradient descent on F_{L,x} with step 1/(L_f + L).
class GdInner final : public InnerSolver {
 public:
  explicit GdInner(double lf_hint) : lf_hint_(lf_hint) {}
  SolverRun run(const ProxOracle& prox, const Vector& start,
                const StopPredicate& stop, int cap) override;

 private:
  double lf_hint_;
};

class SteepestInner final : public InnerSolver {
 public:
  SolverRun run(const ProxOracle& prox, const Vector& start,
                const StopPredicate& stop, int cap) override;
};

// RACDM with its own coordinate-sampling stream. When warm_start is on,
// the beta_hat estimates persist across attempts and outer iterations;
// otherwise every run starts from beta0 again.
class RacdmInner final : public InnerSolver {
 public:
  RacdmInner(int dim, double beta0, std::uint64_t seed, bool warm_start);
  SolverRun run(const ProxOracle& prox, const Vector& start,
                const StopPredicate& stop, int cap) override;
  void reset() override;
  const RacdmState& state() const { return state_; }

 private:
  RacdmState state_;
  Vector beta0_;
  Rng rng_;
  bool warm_start_;
};

class AmInner final : public InnerSolver {
 public:
  SolverRun run(const ProxOracle& prox, const Vector& start,
                const StopPredicate& stop, int cap) override;
};

// One outer iteration of the adaptive scheme: the attempt loop over the
// regularization parameter (trial L starts at min{alpha L_k, L_u} and is
// divided by beta each retry, floored at L_d), the inner run from x^{k+1}
// until the certificate holds, the exit test
// (t > 1 and N_t >= gamma N_{t-1}) or L = L_d, then the z-step with the
// gradient of the original f. Throws InnerCapExceeded when an attempt
// exhausts inner_unit_cap.
OuterRecord catalyst_outer_step(EnvelopeState& state,
                                const CatalystConfig& cfg, InnerSolver& inner,
                                const Oracle& o);

// Full envelope: z^0 = y^0, A_0 = 0, outer steps until
// f(y^k) - f_ref <= eps or outer_cap. The returned trace carries one event
// per outer iteration plus the starting point. Pass a records sink to keep
// the per-iteration OuterRecords (trajectory certificates).
Trace catalyst_run(const Oracle& o, const Vector& y0,
                   const CatalystConfig& cfg, InnerSolver& inner,
                   double f_ref = 0.0,
                   std::vector<OuterRecord>* records = nullptr);

}  // namespace adacat
