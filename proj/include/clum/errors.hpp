#pragma once

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace clum {

// Base of every error raised by the library. The CLI maps each subclass onto
// a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation (bad index, malformed
// security, C <= q_max, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The instance is too large for a brute-force or enumeration path.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// Root finding gave up; carries the last bracket on the solver's variable.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double lower, double upper)
      : NumericError(what), lower_(lower), upper_(upper) {}

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

class SamplingError : public NumericError {
 public:
  using NumericError::NumericError;
};

namespace detail {
[[noreturn]] inline void invariant_failure(const char* expr, const char* file,
                                           int line) {
  std::fprintf(stderr, "%s:%d: internal invariant violated: %s\n", file, line,
               expr);
  std::abort();
}
}  // namespace detail

}  // namespace clum

// Internal-invariant check, active in every build type.
#define CLUM_CHECK(expr)                                              \
  do {                                                                \
    if (!(expr)) ::clum::detail::invariant_failure(#expr, __FILE__, __LINE__); \
  } while (false)
