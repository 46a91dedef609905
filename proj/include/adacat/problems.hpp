#pragma once

#include "adacat/numkit.hpp"
#include "adacat/oracle.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace adacat {

// f(x) = 1/2 x'Ax with A = S'DS: S a random orthogonal matrix, D_ii drawn
// from U(0,1) with one entry forced to zero, so the problem is convex but
// not strongly convex (f* = 0 at x* = 0, null direction S' e_zero).
struct QuadraticProblem {
  Matrix a;
  Matrix s;
  Vector d;
  int n;
  int zero_index;
};

QuadraticProblem gen_quadratic(int n, Rng& rng);

// Plain-text matrix serialization: "rows cols" header line, then one
// whitespace-separated row per line at 17 significant digits.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);
void write_matrix_file(const std::string& path, const Matrix& m);
Matrix read_matrix_file(const std::string& path);

class QuadraticOracle final : public Oracle {
 public:
  // blocks: contiguous (offset, length) spans partitioning {0..n-1};
  // empty means no block structure.
  explicit QuadraticOracle(const QuadraticProblem& q,
                           std::vector<std::pair<int, int>> blocks = {});

  bool has_blocks() const override { return !blocks_.empty(); }
  int block_count() const override {
    return blocks_.empty() ? 1 : static_cast<int>(blocks_.size());
  }
  std::pair<int, int> block_span(int b) const override;
  bool is_quadratic() const override { return true; }

 protected:
  double value_impl(const Vector& x) const override;
  Vector gradient_impl(const Vector& x) const override;
  double partial_impl(int i, const Vector& x) const override;
  Vector block_argmin_impl(int b, const Vector& x) const override;
  Vector block_argmin_prox_impl(int b, const Vector& x, double L,
                                const Vector& center) const override;
  Vector hessian_apply_impl(const Vector& v) const override;

 private:
  const Matrix& a_;
  std::vector<std::pair<int, int>> blocks_;
};

// Split {0..n-1} into p near-equal contiguous spans.
std::vector<std::pair<int, int>> contiguous_blocks(int n, int p);

std::unique_ptr<Oracle> quadratic_oracle(const QuadraticProblem& q,
                                         int p_blocks = 0);

// Sparse LIBSVM-format dataset: one row per example, label then ascending
// 1-based index:value pairs (stored 0-based).
struct DatasetRow {
  double label;
  std::vector<std::pair<int, double>> features;
};

struct Dataset {
  std::vector<DatasetRow> rows;
  int n_features = 0;
};

// Throws ParseError(line, reason) on malformed input. Blank lines and
// '#'-prefixed comment lines are skipped.
Dataset parse_libsvm(std::istream& in);
Dataset load_libsvm_file(const std::string& path);
std::string serialize_libsvm(const Dataset& d);

// Log-loss over the dataset: f(x) = (1/m) sum_j log(1 + exp(-y_j z_j'x)).
// Labels must be exactly -1 or +1 (MappedLabelError otherwise).
// n_features overrides the inferred feature count when the dataset is a
// subset that does not touch every feature (a1a has 123).
struct LogisticProblem {
  std::vector<DatasetRow> rows;
  int m = 0;
  int n = 0;
};

LogisticProblem make_logistic(const Dataset& d, int n_features = -1);

class LogisticOracle final : public Oracle {
 public:
  explicit LogisticOracle(LogisticProblem p);
  const LogisticProblem& problem() const { return p_; }

  bool has_ray_restriction() const override { return true; }

 protected:
  double value_impl(const Vector& x) const override;
  Vector gradient_impl(const Vector& x) const override;
  double partial_impl(int i, const Vector& x) const override;
  RayRestriction ray_restriction_impl(const Vector& x,
                                      const Vector& d) const override;

 private:
  double row_dot(int j, const Vector& x) const;

  LogisticProblem p_;
  // rows touching each feature, for partial derivatives
  std::vector<std::vector<std::pair<int, double>>> columns_;
};

std::unique_ptr<Oracle> logistic_oracle(const Dataset& d,
                                        int n_features = -1);

// Smoothness-constant estimates backing the L_f-relative parameter
// choices: lambda_max(A) for the quadratic, lambda_max(Z'Z)/(4m) for the
// log-loss.
double lf_estimate(const QuadraticProblem& q, double tol = 1e-8);
double lf_estimate(const LogisticProblem& p, double tol = 1e-8);

}  // namespace adacat
