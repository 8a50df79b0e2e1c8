#pragma once

#include <array>
#include <exception>
#include <functional>
#include <memory>
#include <thread>
#include <vector>

#include "swapsim/channel.hpp"
#include "swapsim/protocol2.hpp"
#include "swapsim/tcp.hpp"

namespace swapsim {

// Alice, the Referee, and Bob run as independent threads that interact only
// through frame channels; no shared mutable protocol state exists. Each
// party constructs exactly the substreams it is entitled to, so Alice can
// not read the Referee-Bob variable and Bob can not read the Alice-Referee
// one; the isolation test checks the key sets stay disjoint.

enum class SessionMode { protocol1, full };
enum class TransportKind { in_process, tcp };

struct RoundSettings {
  MeasurementDirection x;
  MeasurementDirection y;
};

/// Per-round measurement settings; must be pure (Alice and Bob evaluate it
/// concurrently). Delivered to Alice and Bob only.
using SettingsSource = std::function<RoundSettings(std::uint32_t)>;

struct SessionConfig {
  SessionMode mode = SessionMode::full;
  TransportKind transport = TransportKind::in_process;
  std::uint32_t rounds = 0;
  std::uint64_t seed = 0;
  SettingsSource settings;
  std::array<std::uint16_t, 3> ports{0, 0, 0};  // alice, referee, bob; 0 = auto
};

struct SessionResult {
  std::vector<std::int8_t> alice_outcomes;
  std::vector<std::int8_t> bob_outcomes;
  BitAudit audit;
  // stream keys actually held by each party, for the isolation test
  std::vector<std::uint64_t> alice_keys;
  std::vector<std::uint64_t> referee_keys;
  std::vector<std::uint64_t> bob_keys;
};

namespace detail {

struct AliceRandomness {
  RandomStream lambda_first;
  RandomStream lambda_second;
  RandomStream flip;
  explicit AliceRandomness(std::uint64_t seed)
      : lambda_first(seed, stream_label::kAliceReferee, 0),
        lambda_second(seed, stream_label::kAliceReferee, 1),
        flip(seed, stream_label::kFlip, 0) {}
};

struct RefereeRandomness {
  RandomStream lambda_ar_first;
  RandomStream lambda_ar_second;
  RandomStream lambda_rb_first;
  RandomStream lambda_rb_second;
  explicit RefereeRandomness(std::uint64_t seed)
      : lambda_ar_first(seed, stream_label::kAliceReferee, 0),
        lambda_ar_second(seed, stream_label::kAliceReferee, 1),
        lambda_rb_first(seed, stream_label::kRefereeBob, 0),
        lambda_rb_second(seed, stream_label::kRefereeBob, 1) {}
};

struct BobRandomness {
  RandomStream lambda_first;
  RandomStream lambda_second;
  RandomStream accept_first;
  RandomStream accept_second;
  explicit BobRandomness(std::uint64_t seed)
      : lambda_first(seed, stream_label::kRefereeBob, 0),
        lambda_second(seed, stream_label::kRefereeBob, 1),
        accept_first(seed, stream_label::kBobAccept, 0),
        accept_second(seed, stream_label::kBobAccept, 1) {}
};

inline WireMessage expect_frame(FrameSource& src, Role sender,
                                std::uint32_t round, int bits) {
  std::optional<WireMessage> m = src.recv();
  if (!m) throw SessionError("channel closed before the round completed");
  if (m->sender != sender || m->round_id != round || m->bit_count != bits) {
    throw SessionError("protocol error: unexpected frame");
  }
  return *std::move(m);
}

inline WireMessage outcome_frame(Role sender, std::uint32_t round, int value) {
  BitWriter bits;
  bits.push_bit(value > 0 ? 1 : 0);
  return make_frame(sender, round, bits);
}

inline int outcome_from_frame(const WireMessage& m) {
  BitReader bits(m.payload, m.bit_count);
  return bits.read_bit() ? +1 : -1;
}

inline void alice_party(const SessionConfig& cfg, FrameSink& to_bob,
                        FrameSink& to_observer) {
  AliceRandomness rand(cfg.seed);
  for (std::uint32_t r = 0; r < cfg.rounds; ++r) {
    const RoundSettings s = cfg.settings(r);
    const AliceDecision first =
        alice_step(Angle::from_radians(s.x.phi()),
                   rand.lambda_first.next_scaled(kQuarterPi));
    BitWriter run1;
    run1.push_bits(static_cast<std::uint32_t>(first.sector), 2);
    run1.push_bit(first.compare_bit);
    to_bob.send(make_frame(Role::alice, r, run1));
    int outcome = first.outcome;
    if (cfg.mode == SessionMode::full) {
      const AliceDecision second =
          alice_step(Angle::from_radians(first.outcome * s.x.theta()),
                     rand.lambda_second.next_scaled(kQuarterPi));
      BitWriter run2;
      run2.push_bits(static_cast<std::uint32_t>(second.sector), 2);
      run2.push_bit(second.compare_bit);
      to_bob.send(make_frame(Role::alice, r, run2));
      const int flip = rand.flip.next_bit();
      BitWriter flip_bits;
      flip_bits.push_bit(flip);
      to_bob.send(make_frame(Role::alice, r, flip_bits));
      outcome = flip ? -second.outcome : second.outcome;
    }
    to_observer.send(outcome_frame(Role::alice, r, outcome));
  }
  to_bob.close();
  to_observer.close();
}

inline void referee_party(const SessionConfig& cfg, FrameSink& to_bob) {
  RefereeRandomness rand(cfg.seed);
  for (std::uint32_t r = 0; r < cfg.rounds; ++r) {
    BitWriter first;
    first.push_bit(referee_step(rand.lambda_ar_first.next_scaled(kQuarterPi),
                                rand.lambda_rb_first.next_scaled(kQuarterPi)));
    to_bob.send(make_frame(Role::referee, r, first));
    if (cfg.mode == SessionMode::full) {
      BitWriter second;
      second.push_bit(
          referee_step(rand.lambda_ar_second.next_scaled(kQuarterPi),
                       rand.lambda_rb_second.next_scaled(kQuarterPi)));
      to_bob.send(make_frame(Role::referee, r, second));
    }
  }
  to_bob.close();
}

inline void bob_party(const SessionConfig& cfg, FrameSource& from_alice,
                      FrameSource& from_referee, FrameSink& to_observer) {
  BobRandomness rand(cfg.seed);
  for (std::uint32_t r = 0; r < cfg.rounds; ++r) {
    const RoundSettings s = cfg.settings(r);
    // order between Alice's and the Referee's arrivals is irrelevant: both
    // are awaited before anything is computed
    const WireMessage alice1 = expect_frame(from_alice, Role::alice, r, 3);
    const WireMessage referee1 = expect_frame(from_referee, Role::referee, r, 1);
    BitReader run1(alice1.payload, alice1.bit_count);
    const int sector1 = static_cast<int>(run1.read_bits(2));
    const int alice_bit1 = run1.read_bit();
    const int referee_bit1 = BitReader(referee1.payload, 1).read_bit();
    const BobDecision first = bob_step(
        Angle::from_radians(s.y.phi()), rand.lambda_first.next_scaled(kQuarterPi),
        sector1, alice_bit1, referee_bit1, rand.accept_first.next_unit());
    int outcome = first.outcome;
    if (cfg.mode == SessionMode::full) {
      const WireMessage alice2 = expect_frame(from_alice, Role::alice, r, 3);
      const WireMessage referee2 =
          expect_frame(from_referee, Role::referee, r, 1);
      BitReader run2(alice2.payload, alice2.bit_count);
      const int sector2 = static_cast<int>(run2.read_bits(2));
      const int alice_bit2 = run2.read_bit();
      const int referee_bit2 = BitReader(referee2.payload, 1).read_bit();
      const BobDecision second =
          bob_step(Angle::from_radians(-first.outcome * s.y.theta()),
                   rand.lambda_second.next_scaled(kQuarterPi), sector2,
                   alice_bit2, referee_bit2, rand.accept_second.next_unit());
      const WireMessage flip_frame = expect_frame(from_alice, Role::alice, r, 1);
      const int flip = BitReader(flip_frame.payload, 1).read_bit();
      outcome = flip ? -second.outcome : second.outcome;
    }
    to_observer.send(outcome_frame(Role::bob, r, outcome));
  }
  to_observer.close();
}

class JoinedThread {
 public:
  template <class F>
  explicit JoinedThread(F&& body)
      : thread_([this, body = std::forward<F>(body)]() mutable {
          try {
            body();
          } catch (...) {
            error_ = std::current_exception();
          }
        }) {}

  ~JoinedThread() {
    if (thread_.joinable()) thread_.join();
  }

  void join_and_rethrow() {
    if (thread_.joinable()) thread_.join();
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
  std::thread thread_;
};

inline void collect_outcomes(const SessionConfig& cfg, FrameSource& from_alice,
                             FrameSource& from_bob, SessionResult& result) {
  result.alice_outcomes.resize(cfg.rounds);
  result.bob_outcomes.resize(cfg.rounds);
  // interleave so neither party runs unboundedly ahead of the collector
  for (std::uint32_t r = 0; r < cfg.rounds; ++r) {
    result.alice_outcomes[r] = static_cast<std::int8_t>(
        outcome_from_frame(expect_frame(from_alice, Role::alice, r, 1)));
    result.bob_outcomes[r] = static_cast<std::int8_t>(
        outcome_from_frame(expect_frame(from_bob, Role::bob, r, 1)));
  }
}

inline void fill_stream_keys(const SessionConfig& cfg, SessionResult& result) {
  const AliceRandomness a(cfg.seed);
  const RefereeRandomness ref(cfg.seed);
  const BobRandomness b(cfg.seed);
  result.alice_keys = {a.lambda_first.key(), a.lambda_second.key(), a.flip.key()};
  result.referee_keys = {ref.lambda_ar_first.key(), ref.lambda_ar_second.key(),
                         ref.lambda_rb_first.key(), ref.lambda_rb_second.key()};
  result.bob_keys = {b.lambda_first.key(), b.lambda_second.key(),
                     b.accept_first.key(), b.accept_second.key()};
}

inline SessionResult run_in_process_session(const SessionConfig& cfg) {
  QueueChannel alice_to_bob;
  QueueChannel referee_to_bob;
  QueueChannel alice_to_observer;
  QueueChannel bob_to_observer;
  SessionResult result{.audit = BitAudit(cfg.rounds)};
  AuditedSink audited_alice(alice_to_bob, result.audit, Role::bob);
  AuditedSink audited_referee(referee_to_bob, result.audit, Role::bob);

  JoinedThread alice([&] { alice_party(cfg, audited_alice, alice_to_observer); });
  JoinedThread referee([&] { referee_party(cfg, audited_referee); });
  JoinedThread bob([&] {
    bob_party(cfg, alice_to_bob, referee_to_bob, bob_to_observer);
  });

  collect_outcomes(cfg, alice_to_observer, bob_to_observer, result);
  alice.join_and_rethrow();
  referee.join_and_rethrow();
  bob.join_and_rethrow();
  fill_stream_keys(cfg, result);
  return result;
}

inline SessionResult run_tcp_session(const SessionConfig& cfg) {
  TcpListener alice_listener(cfg.ports[0]);
  TcpListener referee_listener(cfg.ports[1]);
  TcpListener bob_listener(cfg.ports[2]);
  const auto timeout = std::chrono::milliseconds(30000);

  SessionResult result{.audit = BitAudit(cfg.rounds)};

  JoinedThread bob([&] {
    std::unique_ptr<TcpFrameChannel> from_alice;
    std::unique_ptr<TcpFrameChannel> from_referee;
    std::unique_ptr<TcpFrameChannel> to_observer;
    for (int i = 0; i < 3; ++i) {
      const int fd = bob_listener.accept_fd(timeout);
      switch (TcpFrameChannel::read_handshake(fd, timeout)) {
        case Role::alice: from_alice = std::make_unique<TcpFrameChannel>(fd); break;
        case Role::referee: from_referee = std::make_unique<TcpFrameChannel>(fd); break;
        case Role::observer: to_observer = std::make_unique<TcpFrameChannel>(fd); break;
        default: throw SessionError("unexpected peer at Bob's port");
      }
    }
    if (!from_alice || !from_referee || !to_observer) {
      throw SessionError("Bob did not receive all three connections");
    }
    bob_party(cfg, *from_alice, *from_referee, *to_observer);
  });

  JoinedThread alice([&] {
    TcpFrameChannel to_bob =
        TcpFrameChannel::connect(bob_listener.port(), Role::alice, timeout);
    AuditedSink audited(to_bob, result.audit, Role::bob);
    const int observer_fd = alice_listener.accept_fd(timeout);
    if (TcpFrameChannel::read_handshake(observer_fd, timeout) != Role::observer) {
      throw SessionError("unexpected peer at Alice's port");
    }
    TcpFrameChannel to_observer(observer_fd);
    alice_party(cfg, audited, to_observer);
  });

  JoinedThread referee([&] {
    TcpFrameChannel to_bob =
        TcpFrameChannel::connect(bob_listener.port(), Role::referee, timeout);
    AuditedSink audited(to_bob, result.audit, Role::bob);
    const int observer_fd = referee_listener.accept_fd(timeout);
    if (TcpFrameChannel::read_handshake(observer_fd, timeout) != Role::observer) {
      throw SessionError("unexpected peer at the Referee's port");
    }
    TcpFrameChannel observer(observer_fd);  // no data flows here
    referee_party(cfg, audited);
  });

  // the coordinator is a pure observer: it connects to all three parties and
  // collects the outcome streams from Alice and Bob
  TcpFrameChannel from_alice =
      TcpFrameChannel::connect(alice_listener.port(), Role::observer, timeout);
  TcpFrameChannel from_referee =
      TcpFrameChannel::connect(referee_listener.port(), Role::observer, timeout);
  TcpFrameChannel from_bob =
      TcpFrameChannel::connect(bob_listener.port(), Role::observer, timeout);

  collect_outcomes(cfg, from_alice, from_bob, result);
  alice.join_and_rethrow();
  referee.join_and_rethrow();
  bob.join_and_rethrow();
  fill_stream_keys(cfg, result);
  return result;
}

}  // namespace detail

/// Runs one session of `rounds` rounds with the three parties as isolated
/// message-passing threads, auditing every payload bit on the wire. Given
/// (seed, mode, settings) the outcome streams are identical across
/// transports and match the in-process sampler bit for bit.
inline SessionResult run_session(const SessionConfig& cfg) {
  if (cfg.rounds == 0) throw std::invalid_argument("run_session: rounds == 0");
  if (!cfg.settings) throw std::invalid_argument("run_session: no settings source");
  return cfg.transport == TransportKind::in_process
             ? detail::run_in_process_session(cfg)
             : detail::run_tcp_session(cfg);
}

/// Expected audited payload bits per round.
inline constexpr int session_bits_per_round(SessionMode mode) {
  return mode == SessionMode::full ? kFullRoundBits : kProtocol1Bits;
}

}  // namespace swapsim
