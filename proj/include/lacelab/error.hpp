#ifndef LACELAB_ERROR_HPP
#define LACELAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lacelab {

enum class ErrorCode {
  kDimensionMismatch,
  kParameterMismatch,
  kOutOfRange,
  kPrecondition,
  kNotConverged,
  kBudgetExceeded,
  kNotConnected,
  kTooLarge,
  kIo,
  kConfig,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kParameterMismatch: return "parameter mismatch";
    case ErrorCode::kOutOfRange: return "out of range";
    case ErrorCode::kPrecondition: return "precondition violated";
    case ErrorCode::kNotConverged: return "not converged";
    case ErrorCode::kBudgetExceeded: return "budget exceeded";
    case ErrorCode::kNotConnected: return "graph not connected";
    case ErrorCode::kTooLarge: return "problem too large";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kConfig: return "configuration error";
  }
  return "error";
}

}  // namespace lacelab

#endif  // LACELAB_ERROR_HPP
