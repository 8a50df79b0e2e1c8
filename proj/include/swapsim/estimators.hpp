#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "swapsim/protocol2.hpp"
#include "swapsim/stats.hpp"

namespace swapsim {

inline constexpr std::uint64_t kMinEstimatorRounds = 100;

/// Raw counts over a batch of rounds; cheap to merge and exactly mergeable.
struct RoundTallies {
  std::uint64_t n = 0;
  std::uint64_t agreements = 0;
  std::uint64_t alice_plus = 0;
  std::uint64_t bob_plus = 0;
  std::int64_t product_sum = 0;

  RoundTallies& operator+=(const RoundTallies& o) {
    n += o.n;
    agreements += o.agreements;
    alice_plus += o.alice_plus;
    bob_plus += o.bob_plus;
    product_sum += o.product_sum;
    return *this;
  }
};

inline RoundTallies tally_full_rounds(const MeasurementDirection& x,
                                      const MeasurementDirection& y,
                                      std::uint64_t n, std::uint64_t seed) {
  RoundRandomnessSource rand(seed);
  RoundTallies t;
  t.n = n;
  for (std::uint64_t i = 0; i < n; ++i) {
    const RoundOutcome out = run_full(x, y, rand.next());
    t.agreements += out.alice == out.bob;
    t.alice_plus += out.alice > 0;
    t.bob_plus += out.bob > 0;
    t.product_sum += out.alice * out.bob;
  }
  return t;
}

/// Equatorial-only rounds (no polar run, no flip); 4 bits each.
inline RoundTallies tally_equatorial_rounds(Angle phi_alice, Angle phi_bob,
                                            std::uint64_t n,
                                            std::uint64_t seed) {
  RandomStream lambda_ar(seed, stream_label::kAliceReferee, 0);
  RandomStream lambda_rb(seed, stream_label::kRefereeBob, 0);
  RandomStream accept(seed, stream_label::kBobAccept, 0);
  RoundTallies t;
  t.n = n;
  for (std::uint64_t i = 0; i < n; ++i) {
    const HiddenVariables hv = draw_hidden_variables(lambda_ar, lambda_rb);
    const Protocol1Result r =
        run_protocol1(phi_alice, phi_bob, hv, accept.next_unit());
    t.agreements += r.alice_outcome == r.bob_outcome;
    t.alice_plus += r.alice_outcome > 0;
    t.bob_plus += r.bob_outcome > 0;
    t.product_sum += r.alice_outcome * r.bob_outcome;
  }
  return t;
}

namespace detail {
inline void check_rounds(std::uint64_t n, std::uint64_t minimum) {
  if (n < minimum) {
    throw std::invalid_argument("estimator configured with too few rounds");
  }
}
}  // namespace detail

inline EstimatorResult estimate_agreement(const MeasurementDirection& x,
                                          const MeasurementDirection& y,
                                          std::uint64_t n, std::uint64_t seed) {
  detail::check_rounds(n, kMinEstimatorRounds);
  return make_probability_estimate(tally_full_rounds(x, y, n, seed).agreements, n);
}

inline EstimatorResult estimate_correlation(const MeasurementDirection& x,
                                            const MeasurementDirection& y,
                                            std::uint64_t n,
                                            std::uint64_t seed) {
  detail::check_rounds(n, kMinEstimatorRounds);
  return make_correlation_estimate(tally_full_rounds(x, y, n, seed).product_sum, n);
}

inline EstimatorResult estimate_equatorial_agreement(Angle phi_alice,
                                                     Angle phi_bob,
                                                     std::uint64_t n,
                                                     std::uint64_t seed) {
  detail::check_rounds(n, kMinEstimatorRounds);
  return make_probability_estimate(
      tally_equatorial_rounds(phi_alice, phi_bob, n, seed).agreements, n);
}

// Equatorial settings whose four correlators reach |S| = 2*sqrt(2):
// Alice measures along azimuths {0, pi/2}, Bob along {pi/4, -pi/4}.
struct ChshSettings {
  std::array<double, 2> alice_phi{0.0, kPi / 2.0};
  std::array<double, 2> bob_phi{kQuarterPi, 7.0 * kQuarterPi};
};

inline constexpr double kChshTarget = 2.8284271247461903;  // 2*sqrt(2)

struct ChshEstimate {
  // correlators ordered (a1,b1), (a1,b2), (a2,b1), (a2,b2)
  std::array<EstimatorResult, 4> correlators{};
  double s_value = 0.0;  // E11 + E12 + E21 - E22
  double std_err = 0.0;
};

inline double chsh_combination(const std::array<double, 4>& e) {
  return e[0] + e[1] + e[2] - e[3];
}

inline ChshEstimate chsh(std::uint64_t n_per_setting, std::uint64_t seed,
                         const ChshSettings& settings = {}) {
  detail::check_rounds(n_per_setting, 10000);
  ChshEstimate result;
  int k = 0;
  for (const double phi_alice : settings.alice_phi) {
    for (const double phi_bob : settings.bob_phi) {
      const auto x = MeasurementDirection::from_spherical(kPi / 2.0, phi_alice);
      const auto y = MeasurementDirection::from_spherical(kPi / 2.0, phi_bob);
      result.correlators[k] = estimate_correlation(
          x, y, n_per_setting, derive_seed(seed, "chshSetting", k));
      ++k;
    }
  }
  result.s_value = chsh_combination({result.correlators[0].estimate,
                                     result.correlators[1].estimate,
                                     result.correlators[2].estimate,
                                     result.correlators[3].estimate});
  double var = 0.0;
  for (const EstimatorResult& r : result.correlators) {
    var += r.std_err * r.std_err;
  }
  result.std_err = std::sqrt(var);
  return result;
}

}  // namespace swapsim
