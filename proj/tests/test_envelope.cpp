#include "adacat/envelope.hpp"

#include "adacat/errors.hpp"
#include "adacat/problems.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace adacat;
using namespace adacat::testing;

TEST_CASE("ms_coefficients closed-form values") {
  {
    auto [a, A] = ms_coefficients(0.0, 1.0);
    CHECK(a == doctest::Approx(1.0));
    CHECK(A == doctest::Approx(1.0));
  }
  {
    auto [a, A] = ms_coefficients(2.0, 1.0);
    CHECK(a == doctest::Approx(2.0));
    CHECK(A == doctest::Approx(4.0));
  }
  {
    auto [a, A] = ms_coefficients(0.0, 4.0);
    CHECK(a == doctest::Approx(0.25));
    CHECK(A == doctest::Approx(0.25));
  }
}

TEST_CASE("ms_coefficients satisfy L a^2 = A_{k+1} on random pairs") {
  Rng rng(61);
  for (int k = 0; k < 1000; ++k) {
    const double A_k = std::pow(10.0, 9.0 * rng.uniform() - 3.0);
    const double L = std::pow(10.0, 6.0 * rng.uniform() - 3.0);
    auto [a, A_next] = ms_coefficients(A_k, L);
    CHECK(std::abs(L * a * a - A_next) <= 1e-12 * A_next);
  }
}

TEST_CASE("extrapolate convex-combination special cases") {
  Vector y(2), z(2);
  y << 1.0, 2.0;
  z << 5.0, -2.0;

  const Vector same = extrapolate(y, y, 3.0, 1.0, 4.0);
  CHECK((same - y).norm() == doctest::Approx(0.0));

  const Vector first = extrapolate(y, z, 0.0, 2.0, 2.0);
  CHECK((first - z).norm() == doctest::Approx(0.0));

  const Vector mid = extrapolate(y, z, 1.5, 1.5, 3.0);
  CHECK(mid[0] == doctest::Approx(3.0));
  CHECK(mid[1] == doctest::Approx(0.0));
}

TEST_CASE("ms_condition on the one-dimensional prox example") {
  auto hs = half_square_1d();
  ProxOracle p(hs, 1.0, scalar(2.0));

  auto at = [&](double y) { return ms_condition(p, scalar(y)); };
  {
    const auto c = at(1.0);  // exact prox point
    CHECK(c.holds);
    CHECK(c.lhs == doctest::Approx(0.0));
    CHECK(c.rhs == doctest::Approx(0.5));
  }
  {
    const auto c = at(1.1);
    CHECK(c.holds);
    CHECK(c.lhs == doctest::Approx(0.2));
    CHECK(c.rhs == doctest::Approx(0.45));
  }
  {
    const auto c = at(1.5);
    CHECK_FALSE(c.holds);
    CHECK(c.lhs == doctest::Approx(1.0));
    CHECK(c.rhs == doctest::Approx(0.25));
  }
  {
    const auto c = at(2.0);  // y = center, rhs vanishes
    CHECK_FALSE(c.holds);
    CHECK(c.lhs == doctest::Approx(2.0));
    CHECK(c.rhs == doctest::Approx(0.0));
  }
  // the certificate's gradient call is charged
  CHECK(hs.counter().full_gradients == 4);
}

namespace {

// Inner stub that reports a prescribed unit count per attempt, for
// exercising the attempt ladder in isolation.
class ScriptedInner final : public InnerSolver {
 public:
  explicit ScriptedInner(std::vector<int> units) : units_(std::move(units)) {}

  SolverRun run(const ProxOracle& prox, const Vector& start,
                const StopPredicate&, int) override {
    trial_L.push_back(prox.L());
    SolverRun r;
    r.final_point = start;
    r.units = units_.at(call_++);
    return r;
  }

  std::vector<double> trial_L;

 private:
  std::vector<int> units_;
  std::size_t call_ = 0;
};

CatalystConfig base_config() {
  CatalystConfig cfg;
  cfg.alpha = 2.0;
  cfg.beta = 1.5;
  cfg.gamma = 1.3;
  cfg.L0 = 1.0;
  cfg.Ld = 1e-4;
  cfg.Lu = 1e4;
  return cfg;
}

}  // namespace

TEST_CASE("attempt ladder: first trial L is exactly alpha * L_prev") {
  auto hs = half_square_1d();
  auto cfg = base_config();
  ScriptedInner inner({4, 8});  // 8 >= 1.3*4: exit at attempt 2
  EnvelopeState st{0.0, scalar(5.0), scalar(5.0), scalar(5.0), cfg.L0, 0};
  const auto rec = catalyst_outer_step(st, cfg, inner, hs);

  REQUIRE(inner.trial_L.size() == 2);
  CHECK(inner.trial_L[0] == cfg.alpha * cfg.L0);  // bitwise
  CHECK(inner.trial_L[1] == doctest::Approx(cfg.alpha * cfg.L0 / cfg.beta));
  CHECK(rec.attempts == 2);
  CHECK(rec.units_per_attempt == std::vector<int>{4, 8});
  CHECK(rec.L_accepted == inner.trial_L[1]);
  CHECK(st.L_prev == rec.L_accepted);
}

TEST_CASE("attempt ladder: effort shrinking keeps retrying") {
  auto hs = half_square_1d();
  auto cfg = base_config();
  ScriptedInner inner({10, 9, 12});  // 9 < 13, 12 >= 1.3*9 = 11.7
  EnvelopeState st{0.0, scalar(5.0), scalar(5.0), scalar(5.0), cfg.L0, 0};
  const auto rec = catalyst_outer_step(st, cfg, inner, hs);
  CHECK(rec.attempts == 3);
  CHECK(rec.L_accepted ==
        doctest::Approx(cfg.alpha * cfg.L0 / (cfg.beta * cfg.beta)));
}

TEST_CASE("attempt ladder: reaching L_d ends the loop regardless of effort") {
  auto hs = half_square_1d();
  auto cfg = base_config();
  cfg.Ld = cfg.alpha * cfg.L0;  // floor met at the very first attempt
  cfg.Lu = 10.0 * cfg.Ld;
  ScriptedInner inner({4});
  EnvelopeState st{0.0, scalar(5.0), scalar(5.0), scalar(5.0), cfg.L0, 0};
  const auto rec = catalyst_outer_step(st, cfg, inner, hs);
  CHECK(rec.attempts == 1);
  CHECK(rec.L_accepted == cfg.Ld);

  // the floor also ends a shrinking ladder whose effort never grows
  auto cfg2 = base_config();
  cfg2.Ld = cfg2.alpha * cfg2.L0 / (cfg2.beta * cfg2.beta * cfg2.beta);
  ScriptedInner inner2({100, 10, 5, 1});
  EnvelopeState st2{0.0, scalar(5.0), scalar(5.0), scalar(5.0), cfg2.L0, 0};
  const auto rec2 = catalyst_outer_step(st2, cfg2, inner2, hs);
  CHECK(rec2.attempts == 4);
  CHECK(rec2.L_accepted == cfg2.Ld);
}

TEST_CASE("accumulator commits only the accepted attempt") {
  auto hs = half_square_1d();
  auto cfg = base_config();
  ScriptedInner inner({4, 8});
  EnvelopeState st{0.0, scalar(5.0), scalar(5.0), scalar(5.0), cfg.L0, 0};
  const auto rec = catalyst_outer_step(st, cfg, inner, hs);
  const auto [a, A_next] = ms_coefficients(0.0, rec.L_accepted);
  CHECK(st.A == doctest::Approx(A_next).epsilon(1e-15));
  CHECK(rec.A_k == doctest::Approx(A_next).epsilon(1e-15));
  CHECK(st.k == 1);
}

TEST_CASE("inner cap exhaustion surfaces with diagnostics") {
  class CappedInner final : public InnerSolver {
   public:
    SolverRun run(const ProxOracle&, const Vector& start, const StopPredicate&,
                  int) override {
      SolverRun r;
      r.final_point = start;
      r.units = 3;
      r.hit_cap = true;
      return r;
    }
  };
  auto hs = half_square_1d();
  auto cfg = base_config();
  CappedInner inner;
  EnvelopeState st{0.0, scalar(5.0), scalar(5.0), scalar(5.0), cfg.L0, 0};
  try {
    catalyst_outer_step(st, cfg, inner, hs);
    FAIL("expected InnerCapExceeded");
  } catch (const InnerCapExceeded& e) {
    CHECK(e.L() == cfg.alpha * cfg.L0);
    CHECK(e.attempt() == 1);
  }
}

TEST_CASE("config validation") {
  CatalystConfig cfg;
  CHECK_FALSE(cfg.validate());
  cfg.gamma = 0.9;
  CHECK(cfg.validate());  // warning case
  cfg.beta = 0.8;         // violates alpha > beta > gamma
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = CatalystConfig{};
  cfg.Ld = 2.0;
  cfg.Lu = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

namespace {

struct QuadRun {
  Trace trace;
  std::vector<OuterRecord> records;
  double R;
};

QuadRun run_quadratic_catalyst(std::uint64_t seed, int n = 20) {
  Rng prng(seed);
  const auto q = gen_quadratic(n, prng);
  QuadraticOracle o(q);
  const double lf = lf_estimate(q);

  Rng rng(seed + 1000);
  Vector y0(n);
  for (int i = 0; i < n; ++i) y0[i] = rng.uniform();

  CatalystConfig cfg;
  cfg.L0 = 1.6 * lf;
  cfg.Ld = 0.005 * lf;
  cfg.Lu = 10.0 * lf;
  cfg.eps = 1e-9;
  cfg.outer_cap = 400;

  SteepestInner inner;
  QuadRun out;
  out.R = y0.norm();  // x* = 0 by construction
  out.trace = catalyst_run(o, y0, cfg, inner, 0.0, &out.records);
  return out;
}

}  // namespace

TEST_CASE("catalyst on the degenerate quadratic: trajectory certificates") {
  const auto run = run_quadratic_catalyst(17);
  REQUIRE(run.trace.terminal_status == TerminalStatus::converged);
  REQUIRE_FALSE(run.records.empty());

  const double R2 = run.R * run.R;
  double weighted_residual = 0.0;
  double inv_sqrt_sum = 0.0;
  double A_prev = 0.0;
  for (const auto& rec : run.records) {
    // certificate at every accepted iterate
    CHECK(rec.cert_lhs <= rec.cert_rhs);

    // f-gap bound along the whole trajectory (f* = 0)
    CHECK(rec.f_y <= R2 / (2.0 * rec.A_k) + 1e-9);

    // weighted residual bound
    weighted_residual +=
        rec.A_k * rec.L_accepted * (rec.y - rec.x).squaredNorm();
    CHECK(weighted_residual <= 2.0 * R2 + 1e-9);

    // z stays inside the R-ball around x* = 0
    CHECK(rec.z.norm() <= run.R + 1e-9);

    // accumulator growth bound
    inv_sqrt_sum += 1.0 / std::sqrt(rec.L_accepted);
    CHECK(rec.A_k >= 0.25 * inv_sqrt_sum * inv_sqrt_sum - 1e-12);

    // step identity L a^2 = A
    const double a = rec.A_k - A_prev;
    CHECK(std::abs(rec.L_accepted * a * a - rec.A_k) <= 1e-12 * rec.A_k);
    CHECK(rec.A_k >= A_prev);
    A_prev = rec.A_k;
  }
}

TEST_CASE("catalyst keeps L within [Ld, Lu]") {
  const auto run = run_quadratic_catalyst(23);
  Rng prng(23);
  const auto q = gen_quadratic(20, prng);
  const double lf = lf_estimate(q);
  for (const auto& rec : run.records) {
    CHECK(rec.L_accepted >= 0.005 * lf);
    CHECK(rec.L_accepted <= 10.0 * lf);
  }
}

TEST_CASE("catalyst traces are deterministic") {
  const auto a = run_quadratic_catalyst(31);
  const auto b = run_quadratic_catalyst(31);
  REQUIRE(a.trace.events.size() == b.trace.events.size());
  for (std::size_t k = 0; k < a.trace.events.size(); ++k) {
    const auto& ea = a.trace.events[k];
    const auto& eb = b.trace.events[k];
    CHECK(ea.f_value == eb.f_value);
    CHECK(ea.grad_equiv == eb.grad_equiv);
    CHECK(ea.gap == eb.gap);
    CHECK(ea.L_k == eb.L_k);
    CHECK(ea.A_k == eb.A_k);
    CHECK(ea.inner_units == eb.inner_units);
  }
}

TEST_CASE("trace grad_equiv is strictly increasing") {
  const auto run = run_quadratic_catalyst(37);
  for (std::size_t k = 1; k < run.trace.events.size(); ++k)
    CHECK(run.trace.events[k].grad_equiv >
          run.trace.events[k - 1].grad_equiv);
}

TEST_CASE("outer cap is flagged, trace still returned") {
  Rng prng(3);
  const auto q = gen_quadratic(10, prng);
  QuadraticOracle o(q);
  const double lf = lf_estimate(q);
  CatalystConfig cfg;
  cfg.L0 = 1.6 * lf;
  cfg.Ld = 0.005 * lf;
  cfg.Lu = 10.0 * lf;
  cfg.eps = 1e-16;  // unreachable
  cfg.outer_cap = 3;
  SteepestInner inner;
  Vector y0 = Vector::Ones(10);
  const Trace t = catalyst_run(o, y0, cfg, inner);
  CHECK(t.terminal_status == TerminalStatus::outer_cap);
  CHECK(t.events.size() == 4);  // initial point + 3 outer iterations
}
