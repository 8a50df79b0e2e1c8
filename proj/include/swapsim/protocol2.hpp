#pragma once

#include <cstdint>

#include "swapsim/direction.hpp"
#include "swapsim/protocol1.hpp"
#include "swapsim/random.hpp"

namespace swapsim {

/// The messages of one equatorial run, as sent on the wire.
struct RunSummary {
  int sector = 0;
  int alice_bit = 0;
  int referee_bit = 0;
};

inline constexpr int kFullRoundBits = 9;  // two 4-bit runs plus the flip bit

struct RoundTranscript {
  RunSummary first_run;
  RunSummary second_run;
  int flip_bit = 0;
  int total_bits = 0;
};

struct RoundOutcome {
  int alice = 0;  // +-1
  int bob = 0;    // +-1
  RoundTranscript transcript;
};

/// All randomness consumed by one full round, drawn by the caller so that
/// rounds are pure and replayable.
struct RoundRandomness {
  HiddenVariables first;
  HiddenVariables second;
  double accept_first = 0.0;   // Bob's acceptance draw, run 1
  double accept_second = 0.0;  // run 2
  int flip_bit = 0;            // Alice's marginal-randomization bit
};

/// Lays a master seed out as the named per-run substreams and hands out one
/// RoundRandomness per call. Keeping the Alice-Referee and Referee-Bob
/// variables in separately keyed streams is what enforces bilocality.
class RoundRandomnessSource {
 public:
  explicit RoundRandomnessSource(std::uint64_t seed)
      : lambda_ar_first_(seed, stream_label::kAliceReferee, 0),
        lambda_ar_second_(seed, stream_label::kAliceReferee, 1),
        lambda_rb_first_(seed, stream_label::kRefereeBob, 0),
        lambda_rb_second_(seed, stream_label::kRefereeBob, 1),
        accept_first_(seed, stream_label::kBobAccept, 0),
        accept_second_(seed, stream_label::kBobAccept, 1),
        flip_(seed, stream_label::kFlip, 0) {}

  RoundRandomness next() {
    RoundRandomness r;
    r.first = draw_hidden_variables(lambda_ar_first_, lambda_rb_first_);
    r.second = draw_hidden_variables(lambda_ar_second_, lambda_rb_second_);
    r.accept_first = accept_first_.next_unit();
    r.accept_second = accept_second_.next_unit();
    r.flip_bit = flip_.next_bit();
    return r;
  }

 private:
  RandomStream lambda_ar_first_;
  RandomStream lambda_ar_second_;
  RandomStream lambda_rb_first_;
  RandomStream lambda_rb_second_;
  RandomStream accept_first_;
  RandomStream accept_second_;
  RandomStream flip_;
};

struct Protocol2Result {
  int alice = 0;
  int bob = 0;
  int bits_exchanged = 2 * kProtocol1Bits;
  RunSummary first_run;
  RunSummary second_run;
};

namespace detail {
inline RunSummary summarize(const Protocol1Result& r) {
  return {r.alice.sector, r.alice.compare_bit, r.referee_bit};
}
}  // namespace detail

/// Arbitrary directions via two chained equatorial runs: the first run reads
/// the azimuths, the second the polar angles signed by the first run's
/// outputs. Uses 8 bits; hv2 must be a fresh draw, never hv1 reused.
inline Protocol2Result run_protocol2(const MeasurementDirection& x,
                                     const MeasurementDirection& y,
                                     const HiddenVariables& hv1,
                                     const HiddenVariables& hv2,
                                     double accept_first,
                                     double accept_second) {
  const Protocol1Result first =
      run_protocol1(Angle::from_radians(x.phi()), Angle::from_radians(y.phi()),
                    hv1, accept_first);
  const Protocol1Result second = run_protocol1(
      Angle::from_radians(first.alice_outcome * x.theta()),
      Angle::from_radians(-first.bob_outcome * y.theta()), hv2, accept_second);
  return {second.alice_outcome, second.bob_outcome, 2 * kProtocol1Bits,
          detail::summarize(first), detail::summarize(second)};
}

/// The complete 9-bit round: both runs plus Alice's shared flip bit, which
/// makes each marginal uniform without touching the product of the outputs.
inline RoundOutcome run_full(const MeasurementDirection& x,
                             const MeasurementDirection& y,
                             const RoundRandomness& rand) {
  const Protocol2Result base = run_protocol2(
      x, y, rand.first, rand.second, rand.accept_first, rand.accept_second);
  const int sign = rand.flip_bit ? -1 : +1;
  RoundOutcome out;
  out.alice = sign * base.alice;
  out.bob = sign * base.bob;
  out.transcript = {base.first_run, base.second_run, rand.flip_bit, kFullRoundBits};
  return out;
}

}  // namespace swapsim
