#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nflab {

/// Argument outside the mathematical domain of a function (x <= 0 for lnΓ, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative solver stopped without meeting its residual tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed catalog or config text. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input parsed but violates a structural invariant (named in the message).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Enumeration refused because the lattice rank exceeds the configured cap.
class EnumerationCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A nonzero lattice vector with vanishing product norm was met.
class ZeroProductNormError : public std::runtime_error {
 public:
  explicit ZeroProductNormError(std::vector<long long> coords)
      : std::runtime_error(describe(coords)), coords_(std::move(coords)) {}
  const std::vector<long long>& coords() const noexcept { return coords_; }

 private:
  static std::string describe(const std::vector<long long>& c) {
    std::string s = "zero product norm at lattice vector (";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(c[i]);
    }
    return s + ")";
  }
  std::vector<long long> coords_;
};

/// Requested rate/power cannot be realized by the carving procedure.
class InfeasibleRateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shift search exhausted its retry budget.
class RetryCapError : public std::runtime_error {
 public:
  RetryCapError(const std::string& what, std::size_t best_count)
      : std::runtime_error(what), best_count_(best_count) {}
  std::size_t best_count() const noexcept { return best_count_; }

 private:
  std::size_t best_count_;
};

}  // namespace nflab
