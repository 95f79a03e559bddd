#pragma once

#include <stdexcept>
#include <string>

namespace mtkink {

// Each category maps onto a CLI exit code (validation 2, regime 3, numerical 4).
enum class ErrorKind { validation, regime, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::validation, what) {}
};

// The model has left the regime where a bounded kink exists (or the double
// well itself is gone).
class RegimeError : public Error {
 public:
  explicit RegimeError(const std::string& what)
      : Error(ErrorKind::regime, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return 2;
    case ErrorKind::regime: return 3;
    case ErrorKind::numerical: return 4;
  }
  return 1;
}

}  // namespace mtkink
