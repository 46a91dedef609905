#pragma once

#include <optional>
#include <string>
#include <vector>

namespace adacat {

// One convergence-trace record. For accelerated runs an event is one outer
// iteration; for plain runs it is one solver unit (L_k, A_k, inner_units
// stay empty). grad_equiv is cumulative and strictly increasing.
struct TraceEvent {
  int outer_k;
  double grad_equiv;
  double f_value;
  double gap;
  std::optional<double> L_k;
  std::optional<double> A_k;
  std::optional<int> inner_units;
  double wall_ms;  // informational only, never asserted on
};

enum class TerminalStatus { converged, outer_cap, inner_cap };

const char* to_string(TerminalStatus s);

struct Trace {
  std::vector<TraceEvent> events;
  TerminalStatus terminal_status = TerminalStatus::outer_cap;
  std::string error;  // empty unless the run died early
  double f_ref = 0.0;
};

}  // namespace adacat
