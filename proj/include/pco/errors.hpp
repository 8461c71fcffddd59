#pragma once

#include <stdexcept>
#include <string>

namespace pco {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : ConfigError {
  using ConfigError::ConfigError;
};

struct ParseError : ConfigError {
  using ConfigError::ConfigError;
};

struct PreconditionViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotStronglyConnected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Unconnectable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZenoGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by the S2 validator; names the violated clause and where.
struct NotS2 : std::runtime_error {
  char clause;     // 'a', 'b' or 'c'
  double phi;      // violating phase
  NotS2(char clause_, double phi_, const std::string& what_)
      : std::runtime_error(what_), clause(clause_), phi(phi_) {}
};

}  // namespace pco
