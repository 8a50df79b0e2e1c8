#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <utility>

#include "swapsim/channel.hpp"

namespace swapsim {

namespace detail {

inline void close_fd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

inline void wait_readable(int fd, std::chrono::milliseconds timeout,
                          const char* what) {
  pollfd p{fd, POLLIN, 0};
  const int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
  if (rc == 0) throw SessionError(std::string(what) + ": timed out");
  if (rc < 0) throw SessionError(std::string(what) + ": poll failed");
}

inline void write_all(int fd, const std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t n = ::write(fd, data, len);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
        throw SessionError("socket write timed out");
      }
      throw SessionError("socket write failed");
    }
    data += n;
    len -= static_cast<std::size_t>(n);
  }
}

inline void set_send_timeout(int fd, std::chrono::milliseconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

/// Reads exactly len bytes. Returns false on EOF at offset 0.
inline bool read_all(int fd, std::uint8_t* data, std::size_t len,
                     std::chrono::milliseconds timeout) {
  std::size_t got = 0;
  while (got < len) {
    wait_readable(fd, timeout, "socket read");
    const ssize_t n = ::read(fd, data + got, len - got);
    if (n == 0) {
      if (got == 0) return false;
      throw SessionError("socket closed mid-frame");
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SessionError("socket read failed");
    }
    got += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace detail

/// Loopback listener; port 0 asks the kernel for an ephemeral port.
class TcpListener {
 public:
  explicit TcpListener(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw SessionError("socket() failed");
    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
      detail::close_fd(fd_);
      throw SessionError("bind failed");
    }
    if (::listen(fd_, 8) != 0) {
      detail::close_fd(fd_);
      throw SessionError("listen failed");
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
  }

  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;
  ~TcpListener() { detail::close_fd(fd_); }

  std::uint16_t port() const { return port_; }

  int accept_fd(std::chrono::milliseconds timeout) {
    detail::wait_readable(fd_, timeout, "accept");
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) throw SessionError("accept failed");
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return fd;
  }

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// A connected socket speaking the frame format, one frame after another.
/// On connect the client announces its role with a single handshake byte.
class TcpFrameChannel final : public FrameSink, public FrameSource {
 public:
  explicit TcpFrameChannel(int fd, std::chrono::milliseconds timeout =
                                       std::chrono::milliseconds(30000))
      : fd_(fd), timeout_(timeout) {
    detail::set_send_timeout(fd_, timeout_);
  }

  static TcpFrameChannel connect(std::uint16_t port, Role self,
                                 std::chrono::milliseconds timeout =
                                     std::chrono::milliseconds(30000)) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw SessionError("socket() failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
      ::close(fd);
      throw SessionError("connect failed");
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    const std::uint8_t hello = static_cast<std::uint8_t>(self);
    detail::write_all(fd, &hello, 1);
    return TcpFrameChannel(fd, timeout);
  }

  /// Server side: the client's role byte.
  static Role read_handshake(int fd, std::chrono::milliseconds timeout =
                                         std::chrono::milliseconds(30000)) {
    std::uint8_t hello = 0;
    if (!detail::read_all(fd, &hello, 1, timeout) || hello > 3) {
      throw SessionError("bad connection handshake");
    }
    return static_cast<Role>(hello);
  }

  TcpFrameChannel(TcpFrameChannel&& o) noexcept
      : fd_(std::exchange(o.fd_, -1)), timeout_(o.timeout_) {}
  TcpFrameChannel& operator=(TcpFrameChannel&& o) noexcept {
    if (this != &o) {
      detail::close_fd(fd_);
      fd_ = std::exchange(o.fd_, -1);
      timeout_ = o.timeout_;
    }
    return *this;
  }
  TcpFrameChannel(const TcpFrameChannel&) = delete;
  TcpFrameChannel& operator=(const TcpFrameChannel&) = delete;
  ~TcpFrameChannel() override { detail::close_fd(fd_); }

  void send(const WireMessage& m) override {
    const std::vector<std::uint8_t> bytes = serialize_frame(m);
    detail::write_all(fd_, bytes.data(), bytes.size());
  }

  void close() override {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_WR);
  }

  std::optional<WireMessage> recv() override {
    std::uint8_t header[kFrameHeaderBytes];
    if (!detail::read_all(fd_, header, sizeof header, timeout_)) {
      return std::nullopt;  // clean close
    }
    const std::size_t payload_len = payload_bytes_for(header[5]);
    std::vector<std::uint8_t> buffer(header, header + sizeof header);
    buffer.resize(kFrameHeaderBytes + payload_len);
    if (payload_len > 0 &&
        !detail::read_all(fd_, buffer.data() + kFrameHeaderBytes, payload_len,
                          timeout_)) {
      throw SessionError("socket closed mid-frame");
    }
    return parse_frame(buffer);
  }

 private:
  int fd_ = -1;
  std::chrono::milliseconds timeout_;
};

}  // namespace swapsim
