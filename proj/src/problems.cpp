#include "adacat/problems.hpp"

#include "adacat/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace adacat {

namespace {

// Pairwise reduction keeps the mean of m identical row losses bit-exact
// for power-of-two m (each addition is an exact doubling).
double pairwise_sum(std::vector<double>& buf) {
  std::size_t len = buf.size();
  if (len == 0) return 0.0;
  while (len > 1) {
    std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
    if (len % 2 == 1) {
      buf[half] = buf[len - 1];
      len = half + 1;
    } else {
      len = half;
    }
  }
  return buf[0];
}

double softplus_neg(double t) {
  // log(1 + exp(-t)) without overflow on either side
  return t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
}

double sigma_neg(double t) {
  return 1.0 / (1.0 + std::exp(t));  // sigma(-t)
}

double parse_double(std::string_view tok, int line, const char* what) {
  std::string_view body = tok;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);  // "+1"
  double v = 0.0;
  const char* first = body.data();
  const char* last = body.data() + body.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (body.empty() || ec != std::errc{} || ptr != last)
    throw ParseError(line, std::string("non-numeric ") + what + " '" +
                               std::string(tok) + "'");
  return v;
}

int parse_index(std::string_view tok, int line) {
  int v = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || v < 1)
    throw ParseError(line, "bad feature index '" + std::string(tok) + "'");
  return v;
}

}  // namespace

QuadraticProblem gen_quadratic(int n, Rng& rng) {
  if (n < 2) throw DimensionMismatch("gen_quadratic: n must be >= 2");
  // Draw order is part of the reproducibility contract: n diagonal
  // entries, one index, then the orthogonal factor.
  Vector d(n);
  for (int i = 0; i < n; ++i) d[i] = rng.uniform();
  const int zero = std::min(static_cast<int>(rng.uniform() * n), n - 1);
  d[zero] = 0.0;
  Matrix s = random_orthogonal(n, rng);

  Matrix a = s.transpose() * d.asDiagonal() * s;
  a = 0.5 * (a + a.transpose()).eval();  // kill round-off asymmetry
  return {std::move(a), std::move(s), std::move(d), n, zero};
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1)
    throw ParseError(1, "expected 'rows cols' header");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(in >> m(i, j)))
        throw ParseError(static_cast<int>(i) + 2, "short matrix body");
  return m;
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_matrix(out, m);
  if (!out) throw IoError("write failed: " + path);
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile("cannot open: " + path);
  return read_matrix(in);
}

QuadraticOracle::QuadraticOracle(const QuadraticProblem& q,
                                 std::vector<std::pair<int, int>> blocks)
    : Oracle(q.n), a_(q.a), blocks_(std::move(blocks)) {
  int covered = 0;
  for (const auto& [off, len] : blocks_) {
    if (off != covered || len < 1)
      throw DimensionMismatch(
          "QuadraticOracle: blocks must be contiguous and cover 0..n-1");
    covered += len;
  }
  if (!blocks_.empty() && covered != q.n)
    throw DimensionMismatch("QuadraticOracle: blocks do not cover 0..n-1");
}

std::pair<int, int> QuadraticOracle::block_span(int b) const {
  if (b < 0 || b >= block_count())
    throw IndexOutOfRange("QuadraticOracle::block_span");
  return blocks_[static_cast<std::size_t>(b)];
}

double QuadraticOracle::value_impl(const Vector& x) const {
  return 0.5 * x.dot(a_ * x);
}

Vector QuadraticOracle::gradient_impl(const Vector& x) const { return a_ * x; }

double QuadraticOracle::partial_impl(int i, const Vector& x) const {
  return a_.row(i).dot(x);
}

Vector QuadraticOracle::block_argmin_impl(int b, const Vector& x) const {
  return block_argmin_prox_impl(b, x, 0.0, x);
}

Vector QuadraticOracle::block_argmin_prox_impl(int b, const Vector& x,
                                               double L,
                                               const Vector& center) const {
  const auto [off, len] = blocks_[static_cast<std::size_t>(b)];
  // Stationarity over the block: (A_II + L I) x_I = -A_IJ x_J + L c_I,
  // with a 1e-12 ridge covering the deliberately singular direction.
  Matrix aii = a_.block(off, off, len, len);
  aii.diagonal().array() += L + 1e-12;
  Vector rhs = a_.block(off, off, len, len) * x.segment(off, len) -
               (a_.middleRows(off, len) * x) + L * center.segment(off, len);
  Vector xi = cholesky_solve(aii, rhs);
  Vector out = x;
  out.segment(off, len) = xi;
  return out;
}

Vector QuadraticOracle::hessian_apply_impl(const Vector& v) const {
  return a_ * v;
}

std::vector<std::pair<int, int>> contiguous_blocks(int n, int p) {
  if (p < 1 || p > n)
    throw DimensionMismatch("contiguous_blocks: need 1 <= p <= n");
  std::vector<std::pair<int, int>> blocks;
  const int base = n / p, rem = n % p;
  int off = 0;
  for (int b = 0; b < p; ++b) {
    const int len = base + (b < rem ? 1 : 0);
    blocks.emplace_back(off, len);
    off += len;
  }
  return blocks;
}

std::unique_ptr<Oracle> quadratic_oracle(const QuadraticProblem& q,
                                         int p_blocks) {
  return std::make_unique<QuadraticOracle>(
      q, p_blocks > 0 ? contiguous_blocks(q.n, p_blocks)
                      : std::vector<std::pair<int, int>>{});
}

Dataset parse_libsvm(std::istream& in) {
  Dataset d;
  std::string line;
  int lineno = 0;
  int max_index = 0;  // 1-based
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream tokens(line);
    std::string tok;
    tokens >> tok;
    DatasetRow row;
    row.label = parse_double(tok, lineno, "label");

    int prev_index = 0;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError(lineno, "missing colon in '" + tok + "'");
      const int idx = parse_index(std::string_view(tok).substr(0, colon),
                                  lineno);
      if (idx <= prev_index)
        throw ParseError(lineno, "indices must be strictly ascending (saw " +
                                     std::to_string(idx) + " after " +
                                     std::to_string(prev_index) + ")");
      prev_index = idx;
      const double val = parse_double(std::string_view(tok).substr(colon + 1),
                                      lineno, "feature value");
      if (!std::isfinite(val))
        throw ParseError(lineno, "feature value must be finite");
      row.features.emplace_back(idx - 1, val);
    }
    max_index = std::max(max_index, prev_index);
    d.rows.push_back(std::move(row));
  }
  d.n_features = max_index;
  return d;
}

Dataset load_libsvm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile("cannot open: " + path);
  return parse_libsvm(in);
}

std::string serialize_libsvm(const Dataset& d) {
  std::ostringstream out;
  char buf[64];
  for (const auto& row : d.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", row.label);
    out << buf;
    for (const auto& [i, v] : row.features) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ' ' << (i + 1) << ':' << buf;
    }
    out << '\n';
  }
  return out.str();
}

LogisticProblem make_logistic(const Dataset& d, int n_features) {
  LogisticProblem p;
  p.m = static_cast<int>(d.rows.size());
  p.n = n_features > 0 ? n_features : d.n_features;
  if (p.m == 0) throw DimensionMismatch("make_logistic: empty dataset");
  if (p.n < d.n_features)
    throw DimensionMismatch("make_logistic: n_features below data indices");
  for (std::size_t j = 0; j < d.rows.size(); ++j) {
    const double y = d.rows[j].label;
    if (y != 1.0 && y != -1.0)
      throw MappedLabelError("row " + std::to_string(j + 1) + " has label " +
                             std::to_string(y) + "; expected -1 or +1");
  }
  p.rows = d.rows;
  return p;
}

LogisticOracle::LogisticOracle(LogisticProblem p)
    : Oracle(p.n), p_(std::move(p)), columns_(p_.n) {
  for (int j = 0; j < p_.m; ++j)
    for (const auto& [i, v] : p_.rows[static_cast<std::size_t>(j)].features)
      columns_[static_cast<std::size_t>(i)].emplace_back(j, v);
}

double LogisticOracle::row_dot(int j, const Vector& x) const {
  double t = 0.0;
  for (const auto& [i, v] : p_.rows[static_cast<std::size_t>(j)].features)
    t += v * x[i];
  return t;
}

double LogisticOracle::value_impl(const Vector& x) const {
  std::vector<double> losses(static_cast<std::size_t>(p_.m));
  for (int j = 0; j < p_.m; ++j) {
    const double t = p_.rows[static_cast<std::size_t>(j)].label * row_dot(j, x);
    losses[static_cast<std::size_t>(j)] = softplus_neg(t);
  }
  return pairwise_sum(losses) / static_cast<double>(p_.m);
}

Vector LogisticOracle::gradient_impl(const Vector& x) const {
  Vector g = Vector::Zero(dim());
  const double inv_m = 1.0 / static_cast<double>(p_.m);
  for (int j = 0; j < p_.m; ++j) {
    const auto& row = p_.rows[static_cast<std::size_t>(j)];
    const double t = row.label * row_dot(j, x);
    const double c = -sigma_neg(t) * row.label * inv_m;
    for (const auto& [i, v] : row.features) g[i] += c * v;
  }
  return g;
}

double LogisticOracle::partial_impl(int i, const Vector& x) const {
  double acc = 0.0;
  for (const auto& [j, v] : columns_[static_cast<std::size_t>(i)]) {
    const auto& row = p_.rows[static_cast<std::size_t>(j)];
    const double t = row.label * row_dot(j, x);
    acc -= sigma_neg(t) * row.label * v;
  }
  return acc / static_cast<double>(p_.m);
}

Oracle::RayRestriction LogisticOracle::ray_restriction_impl(
    const Vector& x, const Vector& d) const {
  const int m = p_.m;
  auto t = std::make_shared<std::vector<double>>(m);
  auto s = std::make_shared<std::vector<double>>(m);
  for (int j = 0; j < m; ++j) {
    const double y = p_.rows[static_cast<std::size_t>(j)].label;
    (*t)[static_cast<std::size_t>(j)] = y * row_dot(j, x);
    (*s)[static_cast<std::size_t>(j)] = y * row_dot(j, d);
  }
  note_value();  // one data sweep per precomputed margin vector
  note_value();
  return {[this, t, s, m](double h) {
            std::vector<double> losses(static_cast<std::size_t>(m));
            for (int j = 0; j < m; ++j)
              losses[static_cast<std::size_t>(j)] =
                  softplus_neg((*t)[static_cast<std::size_t>(j)] +
                               h * (*s)[static_cast<std::size_t>(j)]);
            note_value();
            return pairwise_sum(losses) / static_cast<double>(m);
          },
          [this, t, s, m](double h) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j)
              acc -= sigma_neg((*t)[static_cast<std::size_t>(j)] +
                               h * (*s)[static_cast<std::size_t>(j)]) *
                     (*s)[static_cast<std::size_t>(j)];
            note_value();
            return acc / static_cast<double>(m);
          }};
}

std::unique_ptr<Oracle> logistic_oracle(const Dataset& d, int n_features) {
  return std::make_unique<LogisticOracle>(make_logistic(d, n_features));
}

double lf_estimate(const QuadraticProblem& q, double tol) {
  return power_iteration_lmax([&](const Vector& v) { return q.a * v; }, q.n,
                              tol);
}

double lf_estimate(const LogisticProblem& p, double tol) {
  const double inv_4m = 1.0 / (4.0 * static_cast<double>(p.m));
  auto op = [&](const Vector& v) {
    // Z' (Z v) / (4m)
    Vector zv(p.m);
    for (int j = 0; j < p.m; ++j) {
      double t = 0.0;
      for (const auto& [i, w] : p.rows[static_cast<std::size_t>(j)].features)
        t += w * v[i];
      zv[j] = t;
    }
    Vector out = Vector::Zero(p.n);
    for (int j = 0; j < p.m; ++j)
      for (const auto& [i, w] : p.rows[static_cast<std::size_t>(j)].features)
        out[i] += w * zv[j];
    return Vector(out * inv_4m);
  };
  return power_iteration_lmax(op, p.n, tol);
}

}  // namespace adacat
