#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sturmian {

/// Every failure surfaced by the library carries one of these kinds.  The CLI
/// maps each kind to a fixed exit code (see README).
enum class ErrorKind {
  IsolatorInvalid,
  DivisionByZero,
  Indeterminate,
  DegreeCapExceeded,
  PrecisionExhausted,
  RationalInput,
  ZeroVector,
  ConstantPolynomial,
  RootOfUnity,
  HeightOne,
  BadSplit,
  WindowTooLong,
  SharedThetaViolation,
  DegenerateDifference,
  PrefixTooShort,
  NoWindow,
  NotPaired,
  IndexOutOfRange,
  PrecisionTooLow,
  TolUnreachable,
  ItineraryAmbiguous,
  NotOnAttractor,
  PreconditionViolated,
  ParseError,
  ValidationError,
  UnknownKind,
};

inline constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::IsolatorInvalid: return "IsolatorInvalid";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::Indeterminate: return "Indeterminate";
    case ErrorKind::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::RationalInput: return "RationalInput";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::ConstantPolynomial: return "ConstantPolynomial";
    case ErrorKind::RootOfUnity: return "RootOfUnity";
    case ErrorKind::HeightOne: return "HeightOne";
    case ErrorKind::BadSplit: return "BadSplit";
    case ErrorKind::WindowTooLong: return "WindowTooLong";
    case ErrorKind::SharedThetaViolation: return "SharedThetaViolation";
    case ErrorKind::DegenerateDifference: return "DegenerateDifference";
    case ErrorKind::PrefixTooShort: return "PrefixTooShort";
    case ErrorKind::NoWindow: return "NoWindow";
    case ErrorKind::NotPaired: return "NotPaired";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorKind::TolUnreachable: return "TolUnreachable";
    case ErrorKind::ItineraryAmbiguous: return "ItineraryAmbiguous";
    case ErrorKind::NotOnAttractor: return "NotOnAttractor";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::UnknownKind: return "UnknownKind";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace sturmian
