#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

#include "swapsim/wire.hpp"

namespace swapsim {

struct SessionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One direction of a reliable, ordered edge.
class FrameSink {
 public:
  virtual ~FrameSink() = default;
  virtual void send(const WireMessage& m) = 0;
  virtual void close() = 0;
};

class FrameSource {
 public:
  virtual ~FrameSource() = default;
  /// Next frame, or nullopt after a clean close. Throws SessionError if the
  /// peer goes silent past the timeout.
  virtual std::optional<WireMessage> recv() = 0;
};

/// In-process edge: a bounded blocking queue of frames.
class QueueChannel final : public FrameSink, public FrameSource {
 public:
  explicit QueueChannel(std::chrono::milliseconds recv_timeout =
                            std::chrono::milliseconds(30000),
                        std::size_t capacity = 4096)
      : timeout_(recv_timeout), capacity_(capacity) {}

  void send(const WireMessage& m) override {
    std::unique_lock lock(mu_);
    if (!not_full_.wait_for(lock, timeout_, [&] {
          return queue_.size() < capacity_ || closed_;
        })) {
      throw SessionError("timed out waiting to send");
    }
    if (closed_) throw SessionError("send on closed channel");
    queue_.push_back(m);
    not_empty_.notify_one();
  }

  void close() override {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

  std::optional<WireMessage> recv() override {
    std::unique_lock lock(mu_);
    if (!not_empty_.wait_for(lock, timeout_,
                             [&] { return !queue_.empty() || closed_; })) {
      throw SessionError("timed out waiting for a message");
    }
    if (queue_.empty()) return std::nullopt;
    WireMessage m = std::move(queue_.front());
    queue_.pop_front();
    not_full_.notify_one();
    return m;
  }

 private:
  std::mutex mu_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<WireMessage> queue_;
  std::chrono::milliseconds timeout_;
  std::size_t capacity_;
  bool closed_ = false;
};

/// Per-round payload-bit counts on the two audited protocol edges. Header
/// bytes are transport overhead and deliberately not counted. Each edge has
/// a single writer thread; reads happen after the session joins.
class BitAudit {
 public:
  explicit BitAudit(std::uint32_t rounds) : per_round_(rounds) {}

  void record(Role sender, Role receiver, std::uint32_t round, int bits) {
    if (receiver != Role::bob) {
      throw std::logic_error("audited edges all terminate at Bob");
    }
    if (round >= per_round_.size()) {
      throw std::logic_error("audit round out of range");
    }
    if (sender == Role::alice) {
      per_round_[round].from_alice += static_cast<std::uint8_t>(bits);
    } else if (sender == Role::referee) {
      per_round_[round].from_referee += static_cast<std::uint8_t>(bits);
    } else {
      throw std::logic_error("unexpected sender on an audited edge");
    }
  }

  std::uint32_t rounds() const { return static_cast<std::uint32_t>(per_round_.size()); }

  int alice_bits(std::uint32_t round) const { return per_round_.at(round).from_alice; }
  int referee_bits(std::uint32_t round) const { return per_round_.at(round).from_referee; }
  int round_total(std::uint32_t round) const {
    return per_round_.at(round).from_alice + per_round_.at(round).from_referee;
  }

  std::uint64_t session_total() const {
    std::uint64_t total = 0;
    for (const PerRound& r : per_round_) total += r.from_alice + r.from_referee;
    return total;
  }

 private:
  struct PerRound {
    std::uint8_t from_alice = 0;
    std::uint8_t from_referee = 0;
  };
  std::vector<PerRound> per_round_;
};

/// Sink wrapper that records payload bits before forwarding.
class AuditedSink final : public FrameSink {
 public:
  AuditedSink(FrameSink& inner, BitAudit& audit, Role receiver)
      : inner_(inner), audit_(audit), receiver_(receiver) {}

  void send(const WireMessage& m) override {
    audit_.record(m.sender, receiver_, m.round_id, m.bit_count);
    inner_.send(m);
  }

  void close() override { inner_.close(); }

 private:
  FrameSink& inner_;
  BitAudit& audit_;
  Role receiver_;
};

}  // namespace swapsim
