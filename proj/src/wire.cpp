#include "oddcycle/wire.hpp"

#include <array>
#include <charconv>

namespace oddcycle {

namespace {

struct KindInfo {
  MsgKind kind;
  const char* name;
  bool role, gamma, vertex, bit, won;  // fields the kind may carry
};

constexpr std::array<KindInfo, 6> kKinds{{
    {MsgKind::Hello, "hello", true, false, false, false, false},
    {MsgKind::EventReady, "event_ready", false, true, false, false, false},
    {MsgKind::Query, "query", false, false, true, false, false},
    {MsgKind::Response, "response", false, false, true, true, false},
    {MsgKind::RoundResult, "round_result", false, false, false, false, true},
    {MsgKind::Finish, "finish", false, false, false, false, false},
}};

const KindInfo& info_for(MsgKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k;
  throw ProtocolError("unknown message kind");
}

const KindInfo& info_for_name(std::string_view name) {
  for (const auto& k : kKinds)
    if (name == k.name) return k;
  throw ProtocolError("unknown message kind '" + std::string(name) + "'");
}

void check_fields(const WireMessage& msg) {
  const KindInfo& k = info_for(msg.kind);
  if (msg.role && !k.role) throw ProtocolError("role not allowed on this kind");
  if (msg.gamma && !k.gamma) throw ProtocolError("gamma not allowed on this kind");
  if (msg.vertex && !k.vertex) throw ProtocolError("vertex not allowed on this kind");
  if (msg.bit && !k.bit) throw ProtocolError("bit not allowed on this kind");
  if (msg.won && !k.won) throw ProtocolError("won not allowed on this kind");
  if (msg.gamma && (*msg.gamma < 0 || *msg.gamma > 3))
    throw ProtocolError("gamma out of range");
  if (msg.vertex && *msg.vertex < 0) throw ProtocolError("vertex out of range");
  if (msg.bit && (*msg.bit != 0 && *msg.bit != 1)) throw ProtocolError("bit out of range");
  if (msg.won && (*msg.won != 0 && *msg.won != 1)) throw ProtocolError("won out of range");
}

std::uint64_t parse_uint(std::string_view text, const char* what) {
  std::uint64_t value = 0;
  if (text.empty()) throw ProtocolError(std::string("empty ") + what);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ProtocolError(std::string("malformed ") + what);
  return value;
}

}  // namespace

const char* to_string(MsgKind kind) { return info_for(kind).name; }

const char* to_string(Role role) { return role == Role::Alice ? "alice" : "bob"; }

std::string encode(const WireMessage& msg) {
  check_fields(msg);
  std::string line = "v=1 kind=";
  line += to_string(msg.kind);
  line += " round=";
  line += std::to_string(msg.round);
  if (msg.role) {
    line += " role=";
    line += to_string(*msg.role);
  }
  if (msg.gamma) line += " gamma=" + std::to_string(*msg.gamma);
  if (msg.vertex) line += " vertex=" + std::to_string(*msg.vertex);
  if (msg.bit) line += " bit=" + std::to_string(*msg.bit);
  if (msg.won) line += " won=" + std::to_string(*msg.won);
  return line;
}

WireMessage decode(std::string_view line) {
  // Key order is fixed: v, kind, round, role, gamma, vertex, bit, won.
  static constexpr std::array<std::string_view, 8> kOrder{
      "v", "kind", "round", "role", "gamma", "vertex", "bit", "won"};

  WireMessage msg;
  bool have_v = false, have_kind = false, have_round = false;
  std::size_t next_slot = 0;
  std::string_view rest = line;

  while (!rest.empty()) {
    std::size_t space = rest.find(' ');
    std::string_view token = rest.substr(0, space);
    rest = space == std::string_view::npos ? std::string_view{} : rest.substr(space + 1);
    if (token.empty()) throw ProtocolError("empty token (double space?)");

    std::size_t eq = token.find('=');
    if (eq == std::string_view::npos) throw ProtocolError("token without '='");
    std::string_view key = token.substr(0, eq);
    std::string_view value = token.substr(eq + 1);

    std::size_t slot = kOrder.size();
    for (std::size_t i = 0; i < kOrder.size(); ++i)
      if (key == kOrder[i]) {
        slot = i;
        break;
      }
    if (slot == kOrder.size())
      throw ProtocolError("unknown key '" + std::string(key) + "'");
    if (slot < next_slot)
      throw ProtocolError("key '" + std::string(key) + "' out of order or duplicated");
    next_slot = slot + 1;

    if (key == "v") {
      if (parse_uint(value, "version") != kProtocolVersion)
        throw ProtocolError("unsupported protocol version");
      have_v = true;
    } else if (key == "kind") {
      msg.kind = info_for_name(value).kind;
      have_kind = true;
    } else if (key == "round") {
      msg.round = parse_uint(value, "round");
      have_round = true;
    } else if (key == "role") {
      if (value == "alice")
        msg.role = Role::Alice;
      else if (value == "bob")
        msg.role = Role::Bob;
      else
        throw ProtocolError("unknown role '" + std::string(value) + "'");
    } else if (key == "gamma") {
      msg.gamma = static_cast<int>(parse_uint(value, "gamma"));
    } else if (key == "vertex") {
      msg.vertex = static_cast<int>(parse_uint(value, "vertex"));
    } else if (key == "bit") {
      msg.bit = static_cast<int>(parse_uint(value, "bit"));
    } else {
      msg.won = static_cast<int>(parse_uint(value, "won"));
    }
  }

  if (!have_v) throw ProtocolError("missing protocol version");
  if (!have_kind) throw ProtocolError("missing kind");
  if (!have_round) throw ProtocolError("missing round");
  check_fields(msg);
  return msg;
}

}  // namespace oddcycle
