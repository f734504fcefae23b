#pragma once

#include <stdexcept>
#include <string>

namespace esjj {

enum class ErrKind {
  NonPositive,            // a parameter that must be > 0 is not
  NegativeTaper,          // lambda < 0
  NonFinite,
  NegativeTime,
  OutOfDomain,            // x or xi outside [0, l]
  NeedPositiveTime,       // operation defined only for t > 0
  BadTruncation,
  QuadratureUnderResolved,
  ProfileEndpointViolation,
  ProfileRegularityViolation,
  BoundaryViolation,
  GridMismatch,
  NoConvergence,
  WindowRestartFailure,
  ZeroPerturbation,
  WindowTooShort,
  LipschitzViolation,
  Underflow,
  Instability,
  StabilityPrecheckFailed,
  ConfigError,
  IoError,
};

class Error : public std::runtime_error {
public:
  Error(ErrKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrKind kind() const noexcept { return kind_; }

private:
  ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace esjj
