#pragma once

#include "adacat/envelope.hpp"
#include "adacat/trace.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace adacat {

enum class ProblemKind { quadratic, logistic };
enum class MethodKind { gd, sd, racdm, am };

const char* to_string(ProblemKind p);
const char* to_string(MethodKind m);

// One benchmark run. Smoothness-relative parameters (L0, Ld, Lu, beta0)
// are multipliers of the estimated L_f, resolved at execution time; step
// is absolute (defaults to 1/L_f when absent).
struct RunSpec {
  std::string run_id;
  ProblemKind problem = ProblemKind::quadratic;
  int n = 0;                      // quadratic
  std::uint64_t problem_seed = 0; // quadratic
  std::string data_path;          // logistic
  int n_features = 123;           // logistic (a1a dimensionality)
  MethodKind method = MethodKind::gd;
  bool accelerated = false;
  int blocks = 0;                 // am
  std::optional<double> step;     // gd
  double L0_mult = 1.6;
  double Ld_mult = 0.005;
  double Lu_mult = 10.0;
  double alpha = 2.0;
  double beta = 1.5;
  double gamma = 1.3;
  std::optional<double> beta0_mult;  // default: 1 / resolved L0
  double eps = 1e-9;
  std::uint64_t seed = 0;
  int inner_unit_cap = 100000;
  int outer_cap = 1000;
  int unit_cap = 100000;  // plain-run budget
  bool warm_start = true;
  bool inner_start_y = false;  // warm-start inner runs at the last y^k
};

// Parses the documented flat key=value section format; applies defaults
// and validates. gamma <= 1 is accepted with a warning pushed to
// `warnings`. Throws ConfigError / MissingFile.
std::vector<RunSpec> load_config(const std::string& path,
                                 std::vector<std::string>* warnings = nullptr);
std::vector<RunSpec> parse_config(std::istream& in,
                                  std::vector<std::string>* warnings = nullptr);

struct RunResult {
  RunSpec spec;
  Trace trace;
};

// Executes the runs (independently, across `jobs` workers when asked),
// preserving spec order in the output. A failing run records its error in
// the trace and never aborts siblings. Afterwards, logistic gaps are
// rebased against the best f seen on the same dataset in this session.
std::vector<RunResult> execute_runs(const std::vector<RunSpec>& specs,
                                    int jobs = 1);

// One CSV per run (header
// outer_k,grad_equiv,f_value,gap,L_k,A_k,inner_units,wall_ms, 17
// significant digits, '\n' line ends, NA for non-applicable fields) plus a
// session manifest.csv. Returns the paths written, manifest last.
std::vector<std::string> emit_csv(const std::vector<RunResult>& results,
                                  const std::string& out_dir);

// 0: all runs converged; 2: some run hit a cap or failed.
int session_exit_code(const std::vector<RunResult>& results);

}  // namespace adacat
