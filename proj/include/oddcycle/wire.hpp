#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "oddcycle/errors.hpp"

namespace oddcycle {

inline constexpr int kProtocolVersion = 1;

enum class MsgKind { Hello, EventReady, Query, Response, RoundResult, Finish };
enum class Role { Alice, Bob };

const char* to_string(MsgKind kind);
const char* to_string(Role role);

// One line of the wire protocol. Encoded as
//   v=1 kind=<k> round=<r> [role=..] [gamma=..] [vertex=..] [bit=..] [won=..]
// with exactly that key order, single spaces, LF terminated. Unknown keys,
// out-of-order keys, duplicate keys and out-of-range values are rejected.
// Allowed optional fields by kind: hello {role}, event_ready {gamma},
// query {vertex}, response {vertex, bit}, round_result {won}, finish {}.
struct WireMessage {
  MsgKind kind = MsgKind::Hello;
  std::uint64_t round = 0;
  std::optional<Role> role;
  std::optional<int> gamma;   // 0..3
  std::optional<int> vertex;  // >= 0
  std::optional<int> bit;     // 0|1
  std::optional<int> won;     // 0|1
  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

// Serialized line without the trailing newline. Throws ProtocolError if the
// field set is not allowed for the kind.
std::string encode(const WireMessage& msg);

// Parses one line (no newline). Throws ProtocolError on any grammar breach.
WireMessage decode(std::string_view line);

}  // namespace oddcycle
