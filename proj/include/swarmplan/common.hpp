#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace swarmplan {

using Vec3 = Eigen::Vector3d;

enum class ErrorCode {
  ZeroPolynomial,
  IllPosed,
  DegenerateDisplacement,
  MixedHeading,
  OutOfDomain,
  IterationGuard,
  InfeasibleDensity,
  SamplingTimeout,
  VerificationFailure,
  InvalidInput,
};

const char* to_string(ErrorCode code);

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace swarmplan
