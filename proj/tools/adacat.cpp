// adacat: benchmark CLI for the adaptive accelerated proximal envelope.

#include "adacat/bench.hpp"
#include "adacat/errors.hpp"
#include "adacat/problems.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace {

int cmd_run(const std::string& config, const std::string& out_dir,
            std::optional<std::uint64_t> seed, const std::string& only,
            int jobs) {
  std::vector<std::string> warnings;
  std::vector<adacat::RunSpec> specs;
  try {
    specs = adacat::load_config(config, &warnings);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  if (!only.empty()) {
    std::set<std::string> keep;
    std::stringstream ss(only);
    std::string id;
    while (std::getline(ss, id, ',')) keep.insert(id);
    std::erase_if(specs, [&](const adacat::RunSpec& s) {
      return !keep.count(s.run_id);
    });
    if (specs.empty()) {
      std::cerr << "error: --only matched no runs\n";
      return 3;
    }
  }
  if (seed)
    for (auto& s : specs) s.seed = *seed;

  auto results = adacat::execute_runs(specs, jobs);
  auto paths = adacat::emit_csv(results, out_dir);
  for (const auto& r : results) {
    const auto& t = r.trace;
    std::cout << r.spec.run_id << ": " << adacat::to_string(t.terminal_status);
    if (!t.events.empty())
      std::cout << "  gap=" << t.events.back().gap
                << "  grad_equiv=" << t.events.back().grad_equiv;
    if (!t.error.empty()) std::cout << "  error: " << t.error;
    std::cout << "\n";
  }
  std::cout << "wrote " << paths.size() << " files to " << out_dir << "\n";
  return adacat::session_exit_code(results);
}

int cmd_gen_quadratic(int n, std::uint64_t seed, const std::string& out) {
  adacat::Rng rng(seed);
  const auto q = adacat::gen_quadratic(n, rng);
  adacat::write_matrix_file(out, q.a);
  std::cout << "wrote " << n << "x" << n << " matrix (zero direction at index "
            << q.zero_index << ") to " << out << "\n";
  return 0;
}

int cmd_validate(const std::string& path) {
  try {
    const auto d = adacat::load_libsvm_file(path);
    std::size_t nnz = 0;
    for (const auto& r : d.rows) nnz += r.features.size();
    std::cout << path << ": " << d.rows.size() << " rows, " << d.n_features
              << " features, " << nnz << " nonzeros\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 1;
  }
}

int cmd_fetch_a1a(const std::string& out, const std::string& url);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adacat: adaptive Catalyst benchmark harness"};
  app.require_subcommand(1);

  std::string config, out_dir = "out";
  std::string only;
  int jobs = 1;
  std::optional<std::uint64_t> seed_override;
  std::uint64_t seed_flag = 0;
  auto* run = app.add_subcommand("run", "execute a benchmark config");
  run->add_option("--config", config, "config file path")->required();
  run->add_option("--out", out_dir, "output directory for CSV traces");
  auto* seed_opt =
      run->add_option("--seed", seed_flag, "override every run seed");
  run->add_option("--only", only, "comma-separated run_ids to execute");
  run->add_option("--jobs", jobs, "worker pool size")
      ->check(CLI::PositiveNumber);

  int gq_n = 100;
  std::uint64_t gq_seed = 0;
  std::string gq_out;
  auto* gq = app.add_subcommand("gen-quadratic",
                                "generate a degenerate quadratic and write "
                                "its matrix");
  gq->add_option("--n", gq_n, "dimension")->required();
  gq->add_option("--seed", gq_seed, "generator seed")->required();
  gq->add_option("--out", gq_out, "output file")->required();

  std::string fetch_out = "a1a.libsvm";
  std::string fetch_url =
      "http://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary/a1a";
  auto* fetch = app.add_subcommand(
      "fetch-a1a", "download the a1a dataset (explicit network use)");
  fetch->add_option("--out", fetch_out, "output file");
  fetch->add_option("--url", fetch_url, "source URL");

  std::string val_path;
  auto* val = app.add_subcommand("validate", "check a LIBSVM file");
  val->add_option("--libsvm", val_path, "file to validate")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (seed_opt->count()) seed_override = seed_flag;
      return cmd_run(config, out_dir, seed_override, only, jobs);
    }
    if (gq->parsed()) return cmd_gen_quadratic(gq_n, gq_seed, gq_out);
    if (fetch->parsed()) return cmd_fetch_a1a(fetch_out, fetch_url);
    if (val->parsed()) return cmd_validate(val_path);
  } catch (const adacat::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include <httplib.h>

namespace {

int cmd_fetch_a1a(const std::string& out, const std::string& url) {
  // Plain-HTTP fetch; tests never exercise this path.
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos ||
      url.substr(0, scheme_end) != "http") {
    std::cerr << "error: only http:// URLs are supported by this build; "
                 "download manually or pass --url with an http mirror\n";
    return 1;
  }
  const auto host_start = scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  const std::string host = url.substr(host_start, path_start - host_start);
  const std::string path =
      path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(host);
  client.set_follow_location(true);
  client.set_read_timeout(60);
  auto res = client.Get(path);
  if (!res || res->status != 200) {
    std::cerr << "error: fetch failed ("
              << (res ? std::to_string(res->status) : "no response")
              << ") from " << url << "\n";
    return 1;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write " << out << "\n";
    return 1;
  }
  f << res->body;
  std::cout << "wrote " << res->body.size() << " bytes to " << out << "\n";
  return 0;
}

}  // namespace
