#ifndef IFD_ERROR_HPP
#define IFD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ifd {

// Failure classes mirror the process exit-code contract:
// validation -> 2, numerical -> 3, infeasible -> 4.
enum class ErrorKind { Validation, Numerical, Infeasible };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Infeasible: return "infeasible";
  }
  return "?";
}

class ValidationError : public Error {
public:
  explicit ValidationError(std::string message)
      : Error(ErrorKind::Validation, std::move(message)) {}
};

class NumericalError : public Error {
public:
  explicit NumericalError(std::string message)
      : Error(ErrorKind::Numerical, std::move(message)) {}
};

class InfeasibleError : public Error {
public:
  explicit InfeasibleError(std::string message)
      : Error(ErrorKind::Infeasible, std::move(message)) {}
};

} // namespace ifd

#endif
