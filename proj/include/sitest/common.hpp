#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace sitest {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr const char* kVersion = "1.0.0";

// Failure taxonomy shared by the library and the CLI exit-code mapping.
// Input-side codes map to exit 2, numerical-side codes to exit 3.
enum class ErrorCode {
  ParseError,          // malformed cell / header / delimiter
  TooFewRows,          // n < p + 5 at load
  DegenerateColumn,    // zero-variance predictor column
  DegenerateResponse,  // zero-variance response / identically-zero residuals
  InvalidArgument,     // bad option combination, unknown name
  IoError,             // unreadable file
  NonIdentifiable,     // singular normal equations at maximal damping
  DomainError,         // model family evaluated outside its domain
  TransformSingular,   // A_n not invertible even at maximal ridge
  DegenerateBandwidth, // bandwidth rule produced h <= 0
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline bool input_side(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::TooFewRows:
    case ErrorCode::DegenerateColumn:
    case ErrorCode::DegenerateResponse:
    case ErrorCode::InvalidArgument:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::TooFewRows: return "too-few-rows";
    case ErrorCode::DegenerateColumn: return "degenerate-column";
    case ErrorCode::DegenerateResponse: return "degenerate-response";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::NonIdentifiable: return "non-identifiable";
    case ErrorCode::DomainError: return "domain-error";
    case ErrorCode::TransformSingular: return "transform-singular";
    case ErrorCode::DegenerateBandwidth: return "degenerate-bandwidth";
  }
  return "unknown";
}

}  // namespace sitest
