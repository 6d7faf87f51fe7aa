#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "oddcycle/rng.hpp"
#include "oddcycle/wire.hpp"

using namespace oddcycle;

namespace {

WireMessage make(MsgKind kind, std::uint64_t round) {
  WireMessage m;
  m.kind = kind;
  m.round = round;
  return m;
}

bool same_message(const WireMessage& a, const WireMessage& b) {
  return a.kind == b.kind && a.round == b.round && a.role == b.role &&
         a.gamma == b.gamma && a.vertex == b.vertex && a.bit == b.bit &&
         a.won == b.won;
}

}  // namespace

TEST_CASE("exact encodings") {
  WireMessage hello = make(MsgKind::Hello, 0);
  hello.role = Role::Alice;
  CHECK(encode(hello) == "v=1 kind=hello round=0 role=alice");

  WireMessage ready = make(MsgKind::EventReady, 3);
  ready.gamma = 2;
  CHECK(encode(ready) == "v=1 kind=event_ready round=3 gamma=2");

  WireMessage bare_ready = make(MsgKind::EventReady, 3);
  CHECK(encode(bare_ready) == "v=1 kind=event_ready round=3");

  WireMessage query = make(MsgKind::Query, 7);
  query.vertex = 4;
  CHECK(encode(query) == "v=1 kind=query round=7 vertex=4");

  WireMessage response = make(MsgKind::Response, 7);
  response.vertex = 1;
  response.bit = 0;
  CHECK(encode(response) == "v=1 kind=response round=7 vertex=1 bit=0");

  WireMessage result = make(MsgKind::RoundResult, 12);
  result.won = 1;
  CHECK(encode(result) == "v=1 kind=round_result round=12 won=1");

  CHECK(encode(make(MsgKind::Finish, 99)) == "v=1 kind=finish round=99");
}

TEST_CASE("decode inverts encode") {
  auto rt = [](const WireMessage& m) {
    WireMessage back = decode(encode(m));
    CHECK(same_message(m, back));
  };
  WireMessage hello = make(MsgKind::Hello, 0);
  hello.role = Role::Bob;
  rt(hello);
  WireMessage resp = make(MsgKind::Response, 41);
  resp.bit = 1;
  rt(resp);
  resp.vertex = 6;
  rt(resp);
  rt(make(MsgKind::Finish, 1000000));
}

TEST_CASE("randomized round trips") {
  Rng rng(31337);
  for (int trial = 0; trial < 2000; ++trial) {
    WireMessage m;
    int pick = static_cast<int>(rng.below(6));
    m.round = rng.below(1u << 20);
    switch (pick) {
      case 0:
        m.kind = MsgKind::Hello;
        m.role = rng.below(2) == 0 ? Role::Alice : Role::Bob;
        break;
      case 1:
        m.kind = MsgKind::EventReady;
        if (rng.below(2) == 0) m.gamma = static_cast<int>(rng.below(4));
        break;
      case 2:
        m.kind = MsgKind::Query;
        if (rng.below(2) == 0) m.vertex = static_cast<int>(rng.below(100));
        break;
      case 3:
        m.kind = MsgKind::Response;
        m.bit = static_cast<int>(rng.below(2));
        if (rng.below(2) == 0) m.vertex = static_cast<int>(rng.below(100));
        break;
      case 4:
        m.kind = MsgKind::RoundResult;
        if (rng.below(2) == 0) m.won = static_cast<int>(rng.below(2));
        break;
      default:
        m.kind = MsgKind::Finish;
        break;
    }
    WireMessage back = decode(encode(m));
    CHECK(same_message(m, back));
  }
}

TEST_CASE("decode rejects malformed lines") {
  CHECK_THROWS_AS(decode("v=2 kind=finish round=0"), ProtocolError);
  CHECK_THROWS_AS(decode("kind=finish round=0"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 round=0"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=finish"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=nonsense round=0"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=finish round=0 extra=1"), ProtocolError);
  // Out-of-order and duplicated keys.
  CHECK_THROWS_AS(decode("kind=hello v=1 round=0 role=alice"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=hello round=0 role=alice role=bob"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 v=1 kind=finish round=0"), ProtocolError);
  // Double space produces an empty token.
  CHECK_THROWS_AS(decode("v=1  kind=finish round=0"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=finish round=abc"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=finish round="), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kindfinish round=0"), ProtocolError);
}

TEST_CASE("decode rejects fields on the wrong kind") {
  CHECK_THROWS_AS(decode("v=1 kind=finish round=0 won=1"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=hello round=0 gamma=1"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=query round=0 bit=1"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=event_ready round=0 role=alice"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=round_result round=0 vertex=2"), ProtocolError);
}

TEST_CASE("decode rejects out-of-range values") {
  CHECK_THROWS_AS(decode("v=1 kind=event_ready round=0 gamma=4"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=response round=0 bit=2"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=round_result round=0 won=5"), ProtocolError);
  CHECK_THROWS_AS(decode("v=1 kind=hello round=0 role=carol"), ProtocolError);
}

TEST_CASE("encode rejects invalid field combinations") {
  WireMessage bad = make(MsgKind::Finish, 0);
  bad.won = 1;
  CHECK_THROWS_AS(encode(bad), ProtocolError);

  WireMessage bad_gamma = make(MsgKind::EventReady, 0);
  bad_gamma.gamma = 9;
  CHECK_THROWS_AS(encode(bad_gamma), ProtocolError);

  WireMessage bad_bit = make(MsgKind::Response, 0);
  bad_bit.bit = 3;
  CHECK_THROWS_AS(encode(bad_bit), ProtocolError);
}
