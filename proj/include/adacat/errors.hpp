#pragma once

#include <stdexcept>
#include <string>

namespace adacat {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndexOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct NonPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line search ran out of doublings with the directional derivative still
// negative: the direction looks unbounded below.
struct NoSignChange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DoublingCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingBlockSolver : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MappedLabelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An inner attempt burned through its unit cap without satisfying the
// acceptance condition; carries the trial L and attempt index.
class InnerCapExceeded : public std::runtime_error {
 public:
  InnerCapExceeded(double L, int attempt, std::string msg)
      : std::runtime_error(std::move(msg)), L_(L), attempt_(attempt) {}
  double L() const { return L_; }
  int attempt() const { return attempt_; }

 private:
  double L_;
  int attempt_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& reason)
      : std::runtime_error("parse error at line " + std::to_string(line) +
                           ": " + reason),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& reason)
      : std::runtime_error("config error [" + field + "]: " + reason),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct MissingFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace adacat
