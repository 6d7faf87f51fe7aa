#pragma once

#include <stdexcept>

namespace oddcycle {

// Bad user-supplied arguments or configuration. CLI maps this to exit code 1.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Wire grammar or session-state violation: malformed line, unknown key,
// out-of-order round, duplicate role. CLI maps this to exit code 2.
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Socket or channel failure. CLI maps this to exit code 2.
struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace oddcycle
