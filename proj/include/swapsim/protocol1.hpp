#pragma once

#include <stdexcept>

#include "swapsim/angle.hpp"
#include "swapsim/random.hpp"
#include "swapsim/weight_table.hpp"

namespace swapsim {

/// The two shared uniform variables of one equatorial run. The Alice-Referee
/// and Referee-Bob pairs draw from independent sources; Alice and Bob never
/// share randomness.
struct HiddenVariables {
  double alice_referee = 0.0;  // in [0, pi/4], seen by Alice and the Referee
  double referee_bob = 0.0;    // in [0, pi/4], seen by the Referee and Bob
};

inline HiddenVariables draw_hidden_variables(RandomStream& alice_referee,
                                             RandomStream& referee_bob) {
  return {alice_referee.next_scaled(kQuarterPi),
          referee_bob.next_scaled(kQuarterPi)};
}

namespace detail {
inline void check_lambda(double v) {
  if (!(v >= 0.0 && v <= kQuarterPi)) {
    throw std::domain_error("hidden variable outside [0, pi/4]");
  }
}
}  // namespace detail

/// Everything Alice computes from her setting and her shared variable.
struct AliceDecision {
  int outcome = 0;            // +-1, the sign of sin(phi)
  int sector = 0;             // 2-bit message
  int compare_bit = 0;        // 1-bit message: [sector_offset < lambda]
  double sector_offset = 0.0;  // phi's position inside its sector, [0, pi/4)
};

inline AliceDecision alice_step(Angle phi_alice, double lambda_ar) {
  detail::check_lambda(lambda_ar);
  const double phi = phi_alice.radians();
  const SectorSplit split = split_by_sector(phi);
  return {sign_of_sin(phi), split.sector,
          split.offset < lambda_ar ? 1 : 0, split.offset};
}

/// The Referee's 1-bit message: strict comparison of the two shared
/// variables; ties resolve to 0.
inline int referee_step(double lambda_ar, double lambda_rb) {
  detail::check_lambda(lambda_ar);
  detail::check_lambda(lambda_rb);
  return lambda_ar < lambda_rb ? 1 : 0;
}

struct BobDecision {
  int base_sign = 0;        // provisional +-1 before the acceptance draw
  double reduced_phi = 0.0; // Bob's angle with Alice's sector removed, [0, pi)
  int sector = 0;
  int compare_bit = 0;      // [lambda < reduced_phi - sector*pi/4]
  int outcome = 0;
};

/// Bob's output rule: keep the provisional sign with the tabulated
/// probability for his (sector, announced bits) cell, else flip it.
/// accept_draw is Bob's local uniform in [0, 1).
inline BobDecision bob_step(Angle phi_bob, double lambda_rb, int alice_sector,
                            int alice_bit, int referee_bit, double accept_draw) {
  detail::check_lambda(lambda_rb);
  const double shifted = phi_bob.radians() - alice_sector * kQuarterPi;
  const int base_sign = sign_of_sin(shifted);
  const double reduced = mod_pi(shifted);
  const SectorSplit split = split_by_sector(reduced);
  const int compare_bit = lambda_rb < split.offset ? 1 : 0;
  const double gamma = reduced - lambda_rb;
  const double keep = weight(split.sector, alice_bit, referee_bit, compare_bit, gamma);
  const int outcome = accept_draw < keep ? base_sign : -base_sign;
  return {base_sign, reduced, split.sector, compare_bit, outcome};
}

inline constexpr int kProtocol1Bits = 4;  // sector (2) + Alice's bit + Referee's bit

struct Protocol1Result {
  int alice_outcome = 0;
  int bob_outcome = 0;
  int bits_exchanged = kProtocol1Bits;
  AliceDecision alice;
  int referee_bit = 0;
  BobDecision bob;
};

/// One equatorial round: Alice and the Referee each message Bob, who then
/// outputs. Always exactly 4 payload bits.
inline Protocol1Result run_protocol1(Angle phi_alice, Angle phi_bob,
                                     const HiddenVariables& hv,
                                     double accept_draw) {
  const AliceDecision alice = alice_step(phi_alice, hv.alice_referee);
  const int referee_bit = referee_step(hv.alice_referee, hv.referee_bob);
  const BobDecision bob = bob_step(phi_bob, hv.referee_bob, alice.sector,
                                   alice.compare_bit, referee_bit, accept_draw);
  return {alice.outcome, bob.outcome, kProtocol1Bits, alice, referee_bit, bob};
}

namespace detail {
inline void check_sector_angle(int m, double phi) {
  if (m < 1) throw std::invalid_argument("sector count must be positive");
  if (!(phi >= 0.0 && phi <= kPi / m)) {
    throw std::domain_error("angle outside [0, pi/m]");
  }
}
}  // namespace detail

/// Single-sector precursor round with both settings in [0, pi/m]: Alice
/// outputs +1, Bob outputs +1 exactly when the three comparison bits agree.
/// Returns whether the outputs agree.
inline bool naive_sector_round(int m, double phi_alice, double phi_bob,
                               double lambda_ar, double lambda_rb) {
  detail::check_sector_angle(m, phi_alice);
  detail::check_sector_angle(m, phi_bob);
  const int alice_bit = phi_alice < lambda_ar ? 1 : 0;
  const int referee_bit = lambda_ar < lambda_rb ? 1 : 0;
  const int bob_bit = lambda_rb < phi_bob ? 1 : 0;
  return alice_bit == referee_bit && referee_bit == bob_bit;
}

/// Weighted variant: when the bits agree Bob keeps +1 only with probability
/// (pi^2 / 2m^2) cos(phi_bob - lambda_rb).
inline bool weighted_sector_round(int m, double phi_alice, double phi_bob,
                                  double lambda_ar, double lambda_rb,
                                  double accept_draw) {
  if (!naive_sector_round(m, phi_alice, phi_bob, lambda_ar, lambda_rb)) {
    return false;
  }
  const double keep =
      kPi * kPi / (2.0 * m * m) * std::cos(phi_bob - lambda_rb);
  return accept_draw < keep;
}

}  // namespace swapsim
