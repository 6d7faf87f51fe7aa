#include "oddcycle/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstring>
#include <thread>

#include "oddcycle/errors.hpp"

namespace oddcycle {

namespace {

using Clock = std::chrono::steady_clock;

std::string errno_text(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

sockaddr_in make_addr(const std::string& host, int port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  std::string h = host.empty() ? "127.0.0.1" : host;
  if (h == "localhost") h = "127.0.0.1";
  if (::inet_pton(AF_INET, h.c_str(), &addr.sin_addr) != 1)
    throw TransportError("cannot parse host address '" + h + "'");
  return addr;
}

}  // namespace

Endpoint parse_endpoint(const std::string& text) {
  if (text.empty()) throw ValidationError("empty endpoint");
  Endpoint ep;
  std::string port_text;
  auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    port_text = text;
  } else {
    ep.host = text.substr(0, colon);
    port_text = text.substr(colon + 1);
  }
  if (ep.host.empty()) ep.host = "127.0.0.1";
  int port = 0;
  auto [p, ec] = std::from_chars(port_text.data(),
                                 port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || p != port_text.data() + port_text.size() ||
      port < 1 || port > 65535)
    throw ValidationError("invalid port in endpoint '" + text + "'");
  ep.port = port;
  return ep;
}

bool wait_readable(int fd, int timeout_ms) {
  pollfd pfd{fd, POLLIN, 0};
  for (;;) {
    int r = ::poll(&pfd, 1, timeout_ms);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("poll failed"));
    }
    return r > 0;
  }
}

// ------------------------------------------------------------------- conn --

TcpConn::TcpConn(int fd) : fd_(fd) {
  if (fd_ >= 0) set_nodelay(fd_);
}

TcpConn::TcpConn(TcpConn&& other) noexcept
    : fd_(other.fd_), buf_(std::move(other.buf_)) {
  other.fd_ = -1;
}

TcpConn& TcpConn::operator=(TcpConn&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    buf_ = std::move(other.buf_);
    other.fd_ = -1;
  }
  return *this;
}

TcpConn::~TcpConn() { close(); }

void TcpConn::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  buf_.clear();
}

TcpConn TcpConn::connect(const Endpoint& ep, int timeout_ms) {
  auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
  sockaddr_in addr = make_addr(ep.host, ep.port);
  for (;;) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError(errno_text("socket failed"));
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0)
      return TcpConn(fd);
    int err = errno;
    ::close(fd);
    if (Clock::now() >= deadline)
      throw TransportError("connect to " + ep.host + ":" +
                           std::to_string(ep.port) + " failed: " +
                           std::strerror(err));
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

void TcpConn::send_line(const std::string& line) {
  if (fd_ < 0) throw TransportError("send on a closed connection");
  std::string framed = line;
  framed.push_back('\n');
  std::size_t sent = 0;
  while (sent < framed.size()) {
    ssize_t k = ::send(fd_, framed.data() + sent, framed.size() - sent,
                       MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("send failed"));
    }
    sent += static_cast<std::size_t>(k);
  }
}

bool TcpConn::extract_line(std::string& line) {
  auto pos = buf_.find('\n');
  if (pos == std::string::npos) return false;
  line.assign(buf_, 0, pos);
  buf_.erase(0, pos + 1);
  return true;
}

bool TcpConn::has_buffered_line() const {
  return buf_.find('\n') != std::string::npos;
}

TcpConn::Pump TcpConn::pump(int timeout_ms) {
  if (fd_ < 0) return Pump::Eof;
  if (!wait_readable(fd_, timeout_ms)) return Pump::Timeout;
  char chunk[4096];
  for (;;) {
    ssize_t k = ::recv(fd_, chunk, sizeof chunk, 0);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("recv failed"));
    }
    if (k == 0) {
      ::close(fd_);
      fd_ = -1;
      return Pump::Eof;
    }
    buf_.append(chunk, static_cast<std::size_t>(k));
    return Pump::Data;
  }
}

bool TcpConn::recv_line(std::string& line, int timeout_ms) {
  if (extract_line(line)) return true;
  if (fd_ < 0) return false;
  auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
  for (;;) {
    int remain = timeout_ms < 0
                     ? -1
                     : static_cast<int>(
                           std::chrono::duration_cast<std::chrono::milliseconds>(
                               deadline - Clock::now())
                               .count());
    if (timeout_ms >= 0 && remain < 0) remain = 0;
    if (!wait_readable(fd_, remain))
      throw TransportError("timed out waiting for a line");
    char chunk[4096];
    ssize_t k = ::recv(fd_, chunk, sizeof chunk, 0);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("recv failed"));
    }
    if (k == 0) {
      // Clean shutdown: any unterminated remainder is discarded.
      ::close(fd_);
      fd_ = -1;
      return extract_line(line);
    }
    buf_.append(chunk, static_cast<std::size_t>(k));
    if (extract_line(line)) return true;
  }
}

// --------------------------------------------------------------- listener --

TcpListener::TcpListener(int port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw TransportError(errno_text("socket failed"));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    int err = errno;
    ::close(fd_);
    fd_ = -1;
    throw TransportError("bind to port " + std::to_string(port) +
                         " failed: " + std::strerror(err));
  }
  if (::listen(fd_, 8) != 0) {
    int err = errno;
    ::close(fd_);
    fd_ = -1;
    throw TransportError(std::string("listen failed: ") + std::strerror(err));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len) != 0)
    throw TransportError(errno_text("getsockname failed"));
  port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::optional<TcpConn> TcpListener::try_accept(int timeout_ms) {
  if (!wait_readable(fd_, timeout_ms)) return std::nullopt;
  int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) throw TransportError(errno_text("accept failed"));
  return TcpConn(fd);
}

TcpConn TcpListener::accept_conn(int timeout_ms) {
  auto conn = try_accept(timeout_ms);
  if (!conn) throw TransportError("timed out waiting for a connection");
  return std::move(*conn);
}

}  // namespace oddcycle
