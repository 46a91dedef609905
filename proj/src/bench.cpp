#include "adacat/bench.hpp"

#include "adacat/errors.hpp"
#include "adacat/problems.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace adacat {

const char* to_string(ProblemKind p) {
  return p == ProblemKind::quadratic ? "quadratic" : "logistic";
}

const char* to_string(MethodKind m) {
  switch (m) {
    case MethodKind::gd: return "gd";
    case MethodKind::sd: return "sd";
    case MethodKind::racdm: return "racdm";
    case MethodKind::am: return "am";
  }
  return "?";
}

const char* to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::converged: return "converged";
    case TerminalStatus::outer_cap: return "outer_cap";
    case TerminalStatus::inner_cap: return "inner_cap";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool valid_run_id(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(key, "not a number: '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(key, "not an integer: '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(key, "not an unsigned integer: '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "not a boolean: '" + v + "'");
}

void apply_key(RunSpec& s, const std::string& key, const std::string& value,
               const std::string& scope) {
  const std::string field = scope + "." + key;
  if (key == "problem") {
    if (value == "quadratic") s.problem = ProblemKind::quadratic;
    else if (value == "logistic") s.problem = ProblemKind::logistic;
    else throw ConfigError(field, "unknown problem '" + value + "'");
  } else if (key == "method") {
    if (value == "gd") s.method = MethodKind::gd;
    else if (value == "sd") s.method = MethodKind::sd;
    else if (value == "racdm") s.method = MethodKind::racdm;
    else if (value == "am") s.method = MethodKind::am;
    else throw ConfigError(field, "unknown method '" + value + "'");
  } else if (key == "n") {
    s.n = static_cast<int>(to_int(field, value));
  } else if (key == "problem_seed") {
    s.problem_seed = to_u64(field, value);
  } else if (key == "data") {
    s.data_path = value;
  } else if (key == "n_features") {
    s.n_features = static_cast<int>(to_int(field, value));
  } else if (key == "accelerated") {
    s.accelerated = to_bool(field, value);
  } else if (key == "blocks") {
    s.blocks = static_cast<int>(to_int(field, value));
  } else if (key == "step") {
    s.step = to_double(field, value);
  } else if (key == "L0") {
    s.L0_mult = to_double(field, value);
  } else if (key == "Ld") {
    s.Ld_mult = to_double(field, value);
  } else if (key == "Lu") {
    s.Lu_mult = to_double(field, value);
  } else if (key == "alpha") {
    s.alpha = to_double(field, value);
  } else if (key == "beta") {
    s.beta = to_double(field, value);
  } else if (key == "gamma") {
    s.gamma = to_double(field, value);
  } else if (key == "beta0") {
    s.beta0_mult = to_double(field, value);
  } else if (key == "eps") {
    s.eps = to_double(field, value);
  } else if (key == "seed") {
    s.seed = to_u64(field, value);
  } else if (key == "inner_cap") {
    s.inner_unit_cap = static_cast<int>(to_int(field, value));
  } else if (key == "outer_cap") {
    s.outer_cap = static_cast<int>(to_int(field, value));
  } else if (key == "unit_cap") {
    s.unit_cap = static_cast<int>(to_int(field, value));
  } else if (key == "warm_start") {
    s.warm_start = to_bool(field, value);
  } else if (key == "inner_start") {
    if (value == "x") s.inner_start_y = false;
    else if (value == "y") s.inner_start_y = true;
    else throw ConfigError(field, "expected 'x' or 'y'");
  } else {
    throw ConfigError(field, "unknown key");
  }
}

void validate_spec(const RunSpec& s, std::vector<std::string>* warnings) {
  const std::string& id = s.run_id;
  if (s.problem == ProblemKind::quadratic) {
    if (s.n < 2) throw ConfigError(id + ".n", "quadratic requires n >= 2");
  } else {
    if (s.data_path.empty())
      throw ConfigError(id + ".data", "logistic requires a data path");
    if (s.n_features < 1)
      throw ConfigError(id + ".n_features", "must be >= 1");
  }
  if (s.method == MethodKind::am) {
    if (s.problem != ProblemKind::quadratic)
      throw ConfigError(id + ".method",
                        "am needs a block-solvable problem (quadratic)");
    if (s.blocks < 2 || s.blocks > s.n)
      throw ConfigError(id + ".blocks", "am requires 2 <= blocks <= n");
  }
  if (!(s.eps > 0.0)) throw ConfigError(id + ".eps", "must be > 0");
  if (!(s.Ld_mult > 0.0) || s.Ld_mult > s.Lu_mult)
    throw ConfigError(id + ".Ld/Lu", "requires 0 < Ld <= Lu");
  if (!(s.L0_mult > 0.0)) throw ConfigError(id + ".L0", "must be > 0");
  if (s.accelerated) {
    if (!(s.alpha > s.beta && s.beta > s.gamma && s.gamma > 0.0))
      throw ConfigError(id + ".alpha/beta/gamma",
                        "requires alpha > beta > gamma > 0");
    if (s.gamma <= 1.0 && warnings)
      warnings->push_back(id + ": gamma <= 1 makes the inner-effort growth "
                          "test fire trivially; expect one attempt per outer "
                          "iteration");
  }
  if (s.step && !(*s.step > 0.0))
    throw ConfigError(id + ".step", "must be > 0");
  if (s.unit_cap < 1 || s.inner_unit_cap < 1 || s.outer_cap < 1)
    throw ConfigError(id + ".caps", "must be >= 1");
}

}  // namespace

std::vector<RunSpec> parse_config(std::istream& in,
                                  std::vector<std::string>* warnings) {
  std::vector<RunSpec> specs;
  std::set<std::string> seen;
  RunSpec* current = nullptr;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(lineno),
                          "unterminated section header");
      const std::string id = trim(t.substr(1, t.size() - 2));
      if (!valid_run_id(id))
        throw ConfigError("line " + std::to_string(lineno),
                          "run_id must match [A-Za-z0-9_-]+");
      if (!seen.insert(id).second)
        throw ConfigError(id, "duplicate run_id");
      specs.emplace_back();
      specs.back().run_id = id;
      current = &specs.back();
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno),
                        "expected key = value");
    if (!current)
      throw ConfigError("line " + std::to_string(lineno),
                        "key before any [run] section");
    apply_key(*current, trim(t.substr(0, eq)), trim(t.substr(eq + 1)),
              current->run_id);
  }
  if (specs.empty()) throw ConfigError("config", "no run sections found");
  for (const auto& s : specs) validate_spec(s, warnings);
  return specs;
}

std::vector<RunSpec> load_config(const std::string& path,
                                 std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw MissingFile("cannot open config: " + path);
  return parse_config(in, warnings);
}

namespace {

Trace plain_trace(const SolverRun& run, double f_ref) {
  Trace t;
  t.f_ref = f_ref;
  t.events.reserve(run.events.size());
  for (const auto& e : run.events)
    t.events.push_back({e.unit, e.grad_equiv, e.f_value, e.f_value - f_ref,
                        std::nullopt, std::nullopt, std::nullopt, e.wall_ms});
  t.terminal_status =
      run.hit_cap ? TerminalStatus::outer_cap : TerminalStatus::converged;
  return t;
}

Trace run_one(const RunSpec& spec) {
  // Problem construction from its own seed; the run seed drives y0 and
  // the coordinate-sampling stream.
  std::unique_ptr<Oracle> oracle;
  QuadraticProblem quad;
  double lf = 0.0;
  if (spec.problem == ProblemKind::quadratic) {
    Rng prng(spec.problem_seed);
    quad = gen_quadratic(spec.n, prng);
    oracle = quadratic_oracle(quad, spec.method == MethodKind::am
                                        ? spec.blocks
                                        : 0);
    lf = lf_estimate(quad);
  } else {
    Dataset d = load_libsvm_file(spec.data_path);
    LogisticProblem p = make_logistic(d, spec.n_features);
    lf = lf_estimate(p);
    oracle = std::make_unique<LogisticOracle>(std::move(p));
  }
  const int n = oracle->dim();

  Rng rng(spec.seed);
  Vector y0(n);
  for (int i = 0; i < n; ++i) y0[i] = rng.uniform();

  // No closed-form optimum for the log-loss: run against f_ref = 0 and
  // let the session rebase gaps afterwards.
  const double f_ref = 0.0;
  const double L0 = spec.L0_mult * lf;
  const double beta0 =
      spec.beta0_mult ? *spec.beta0_mult * lf : 1.0 / L0;

  if (spec.accelerated) {
    CatalystConfig cfg;
    cfg.alpha = spec.alpha;
    cfg.beta = spec.beta;
    cfg.gamma = spec.gamma;
    cfg.L0 = L0;
    cfg.Ld = spec.Ld_mult * lf;
    cfg.Lu = spec.Lu_mult * lf;
    cfg.eps = spec.eps;
    cfg.inner_unit_cap = spec.inner_unit_cap;
    cfg.outer_cap = spec.outer_cap;
    cfg.warm_start_state = spec.warm_start;
    cfg.start_at_y = spec.inner_start_y;

    std::unique_ptr<InnerSolver> inner;
    switch (spec.method) {
      case MethodKind::gd:
        inner = std::make_unique<GdInner>(lf);
        break;
      case MethodKind::sd:
        inner = std::make_unique<SteepestInner>();
        break;
      case MethodKind::racdm:
        inner = std::make_unique<RacdmInner>(n, beta0, rng.next_u64(),
                                             spec.warm_start);
        break;
      case MethodKind::am:
        inner = std::make_unique<AmInner>();
        break;
    }
    Trace t = catalyst_run(*oracle, y0, cfg, *inner, f_ref);
    t.f_ref = f_ref;
    return t;
  }

  StopPredicate stop = [&](const Vector& y, int) {
    return oracle->value(y) - f_ref <= spec.eps;
  };
  SolverRun run;
  switch (spec.method) {
    case MethodKind::gd:
      run = gd_run(*oracle, y0, spec.step ? *spec.step : 1.0 / lf, stop,
                   spec.unit_cap);
      break;
    case MethodKind::sd:
      run = steepest_run(*oracle, y0, stop, spec.unit_cap);
      break;
    case MethodKind::racdm: {
      RacdmState state{Vector::Constant(n, beta0)};
      run = racdm_run(*oracle, y0, state, rng, stop, spec.unit_cap);
      break;
    }
    case MethodKind::am:
      run = am_run(*oracle, y0, stop, spec.unit_cap);
      break;
  }
  return plain_trace(run, f_ref);
}

void rebase_logistic_gaps(const std::vector<RunSpec>& specs,
                          std::vector<RunResult>& results) {
  std::map<std::string, double> best;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (specs[i].problem != ProblemKind::logistic) continue;
    const std::string key =
        specs[i].data_path + "#" + std::to_string(specs[i].n_features);
    for (const auto& e : results[i].trace.events) {
      auto [it, fresh] = best.emplace(key, e.f_value);
      if (!fresh) it->second = std::min(it->second, e.f_value);
    }
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (specs[i].problem != ProblemKind::logistic) continue;
    const std::string key =
        specs[i].data_path + "#" + std::to_string(specs[i].n_features);
    const auto it = best.find(key);
    if (it == best.end()) continue;
    results[i].trace.f_ref = it->second;
    for (auto& e : results[i].trace.events) e.gap = e.f_value - it->second;
  }
}

}  // namespace

std::vector<RunResult> execute_runs(const std::vector<RunSpec>& specs,
                                    int jobs) {
  std::vector<RunResult> results(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) results[i].spec = specs[i];

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      try {
        results[i].trace = run_one(specs[i]);
      } catch (const InnerCapExceeded& e) {
        results[i].trace.terminal_status = TerminalStatus::inner_cap;
        results[i].trace.error = e.what();
      } catch (const std::exception& e) {
        results[i].trace.terminal_status = TerminalStatus::inner_cap;
        results[i].trace.error = e.what();
      }
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const std::size_t count =
        std::min(static_cast<std::size_t>(jobs), specs.size());
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  rebase_logistic_gaps(specs, results);
  return results;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::string> emit_csv(const std::vector<RunResult>& results,
                                  const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  std::vector<std::string> paths;
  for (const auto& r : results) {
    const std::string path =
        (fs::path(out_dir) / (r.spec.run_id + ".csv")).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "outer_k,grad_equiv,f_value,gap,L_k,A_k,inner_units,wall_ms\n";
    for (const auto& e : r.trace.events) {
      out << e.outer_k << ',' << fmt(e.grad_equiv) << ',' << fmt(e.f_value)
          << ',' << fmt(e.gap) << ',';
      out << (e.L_k ? fmt(*e.L_k) : "NA") << ',';
      out << (e.A_k ? fmt(*e.A_k) : "NA") << ',';
      if (e.inner_units)
        out << *e.inner_units;
      else
        out << "NA";
      out << ',' << fmt(e.wall_ms) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
    paths.push_back(path);
  }

  const std::string mpath = (fs::path(out_dir) / "manifest.csv").string();
  std::ofstream man(mpath, std::ios::binary);
  if (!man) throw IoError("cannot open for writing: " + mpath);
  man << "run_id,problem,method,accelerated,n,problem_seed,data,n_features,"
         "seed,eps,terminal_status,final_gap,total_grad_equiv,error\n";
  for (const auto& r : results) {
    const auto& s = r.spec;
    const bool quad = s.problem == ProblemKind::quadratic;
    man << s.run_id << ',' << to_string(s.problem) << ','
        << to_string(s.method) << ',' << (s.accelerated ? "true" : "false")
        << ',';
    if (quad)
      man << s.n << ',' << s.problem_seed << ",,";
    else
      man << ",," << s.data_path << ',' << s.n_features;
    man << ',' << s.seed << ',' << fmt(s.eps) << ','
        << to_string(r.trace.terminal_status) << ',';
    if (r.trace.events.empty())
      man << "NA,NA";
    else
      man << fmt(r.trace.events.back().gap) << ','
          << fmt(r.trace.events.back().grad_equiv);
    man << ',' << r.trace.error << '\n';
  }
  if (!man) throw IoError("write failed: " + mpath);
  paths.push_back(mpath);
  return paths;
}

int session_exit_code(const std::vector<RunResult>& results) {
  for (const auto& r : results)
    if (r.trace.terminal_status != TerminalStatus::converged ||
        !r.trace.error.empty())
      return 2;
  return 0;
}

}  // namespace adacat
