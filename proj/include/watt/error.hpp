#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace watt {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside its documented domain (bad config, negative rate, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed or violates a sample invariant.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A CSV row failed validation. `line()` is 1-based and counts the header.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// No metric sample found a power sample within tolerance.
class EmptyAlignmentError : public DataError {
 public:
  EmptyAlignmentError(std::size_t metric_count, std::size_t dropped)
      : DataError("alignment produced no rows (" + std::to_string(dropped) + " of " +
                  std::to_string(metric_count) + " metric samples dropped)"),
        metric_count_(metric_count),
        dropped_(dropped) {}

  std::size_t metric_count() const noexcept { return metric_count_; }
  std::size_t dropped() const noexcept { return dropped_; }

 private:
  std::size_t metric_count_;
  std::size_t dropped_;
};

/// Fewer rows than parameters + 1.
class InsufficientRowsError : public DataError {
 public:
  InsufficientRowsError(std::size_t rows, std::size_t required)
      : DataError("need at least " + std::to_string(required) + " rows to fit, got " +
                  std::to_string(rows)),
        rows_(rows),
        required_(required) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t rows_;
  std::size_t required_;
};

/// Numerical failure in the solver.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A design column is (numerically) a linear combination of the columns before it.
class RankDeficientError : public NumericalError {
 public:
  RankDeficientError(std::size_t column, std::string column_name)
      : NumericalError("design matrix is rank deficient at column '" + column_name +
                       "' (constant or collinear regressor)"),
        column_(column),
        column_name_(std::move(column_name)) {}

  std::size_t column() const noexcept { return column_; }
  const std::string& column_name() const noexcept { return column_name_; }

 private:
  std::size_t column_;
  std::string column_name_;
};

}  // namespace watt
