#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecstel {

enum class ErrorCode {
    invalid_argument,
    truncation_insufficient,
    degenerate_state,
    basis_undefined,
    critical_case,
    unsupported,
    resource_limit,
};

std::string_view to_string(ErrorCode code);

/// Base for every error raised by the library. The code is stable and is what
/// the command line tool reports in structured error records.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message) : std::runtime_error(message), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
  public:
    explicit InvalidArgument(const std::string &message) : Error(ErrorCode::invalid_argument, message) {}
};

/// A coherent expansion lost more norm to the Fock cutoff than allowed.
class TruncationInsufficient : public Error {
  public:
    TruncationInsufficient(double deficit, double tolerance);
    double deficit() const noexcept { return deficit_; }

  private:
    double deficit_;
};

class DegenerateState : public Error {
  public:
    explicit DegenerateState(const std::string &message) : Error(ErrorCode::degenerate_state, message) {}
};

class BasisUndefined : public Error {
  public:
    explicit BasisUndefined(const std::string &message) : Error(ErrorCode::basis_undefined, message) {}
};

class CriticalCase : public Error {
  public:
    explicit CriticalCase(const std::string &message) : Error(ErrorCode::critical_case, message) {}
};

class Unsupported : public Error {
  public:
    explicit Unsupported(const std::string &message) : Error(ErrorCode::unsupported, message) {}
};

class ResourceLimit : public Error {
  public:
    explicit ResourceLimit(const std::string &message) : Error(ErrorCode::resource_limit, message) {}
};

}  // namespace ecstel
