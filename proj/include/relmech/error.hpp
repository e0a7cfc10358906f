#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relmech {

enum class ErrorKind {
  InvalidArgument,
  SingularPoint,       // potential evaluated at a singular point (r = 0 for Kepler)
  SpeedLimitExceeded,  // g00 - |v|^2/c^2 <= margin, or |v| >= c
  InsideHorizon,       // g00 < 0
  SuperluminalFrame,   // boost with beta^2 >= g00
  AnchorMismatch,      // boost applied away from the point it was built at
  Horizon,             // redshift evaluated at r <= 2 r0
  NotAPotential,       // acceleration field is not conservative
  BranchPoint,         // Bohlin map at z = 0
  InvalidInput,
  NoRealAlpha,
  IntegratingFactor,
  DegenerateParameter,
  Stiffness,
  Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace relmech
