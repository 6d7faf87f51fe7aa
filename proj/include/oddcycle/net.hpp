#pragma once

#include <optional>
#include <string>

namespace oddcycle {

struct Endpoint {
  std::string host;
  int port = 0;
};

// "host:port"; a bare ":port" or "port" binds/connects on localhost.
Endpoint parse_endpoint(const std::string& text);

// Blocking line-oriented TCP connection with poll-based deadlines.
class TcpConn {
 public:
  TcpConn() = default;
  explicit TcpConn(int fd);
  TcpConn(TcpConn&& other) noexcept;
  TcpConn& operator=(TcpConn&& other) noexcept;
  TcpConn(const TcpConn&) = delete;
  TcpConn& operator=(const TcpConn&) = delete;
  ~TcpConn();

  // Retries refused connections until the deadline (startup races).
  static TcpConn connect(const Endpoint& ep, int timeout_ms);

  bool open() const { return fd_ >= 0; }
  int fd() const { return fd_; }
  void close();

  void send_line(const std::string& line);  // appends '\n'

  // True with a line (newline stripped); false on clean EOF with no pending
  // full line. Throws TransportError on timeout or socket error.
  bool recv_line(std::string& line, int timeout_ms);

  // A full line is already buffered; reading it will not block.
  bool has_buffered_line() const;

  // Pops a buffered line without touching the socket.
  bool try_pop_line(std::string& line) { return extract_line(line); }

  // One buffer fill for multi-connection loops: waits up to timeout_ms for
  // readability, then performs a single recv.
  enum class Pump { Data, Timeout, Eof };
  Pump pump(int timeout_ms);

 private:
  bool extract_line(std::string& line);

  int fd_ = -1;
  std::string buf_;
};

class TcpListener {
 public:
  explicit TcpListener(int port);  // 0 picks an ephemeral port
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  int port() const { return port_; }
  int fd() const { return fd_; }

  // Throws TransportError on timeout; timeout_ms < 0 waits forever.
  TcpConn accept_conn(int timeout_ms);
  // Returns nothing on timeout instead of throwing.
  std::optional<TcpConn> try_accept(int timeout_ms);

 private:
  int fd_ = -1;
  int port_ = 0;
};

// poll() a single fd for readability; true when readable, false on timeout.
bool wait_readable(int fd, int timeout_ms);

}  // namespace oddcycle
