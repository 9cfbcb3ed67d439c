#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace otplab {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation applied outside its algebraic domain (e.g. mixing G1 and G2).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Ideal functionality refused a key identity.
class AuthorizationError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment or protocol configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unknown entity, session or record.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Caller violated an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// A protocol step failed. `step` is the 1-based step index within the
// session that raised it.
class ProtocolError : public Error {
 public:
  ProtocolError(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Message arrived at an entity whose state machine expects something else.
class PositionError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class IdentificationError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class AuthenticationError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

}  // namespace otplab
